"""
Unit tests for the command-line value parsers.
"""

import pytest

from src.utils.input_validator import (
    InputValidationError,
    parse_alpha_list,
    parse_decimal,
    parse_degree_filter,
)

# =============================================================================
# DECIMAL INTEGERS
# =============================================================================

# Each tuple contains: (test_id, raw, expected)
VALID_DECIMAL_TEST_CASES = [
    ("plain", "12769", 12769),
    ("with_plus", "+9", 9),
    ("with_whitespace", "  42 ", 42),
    ("with_separators", "1_000_000", 1000000),
    ("zero", "0", 0),
    ("leading_zeros", "007", 7),
    ("beyond_machine_words", "1" + "0" * 60, 10**60),
]


@pytest.mark.parametrize(
    "test_id, raw, expected",
    VALID_DECIMAL_TEST_CASES,
    ids=[case[0] for case in VALID_DECIMAL_TEST_CASES],
)
def test_parse_decimal_succeeds_on_valid_input(test_id, raw, expected):
    # Act
    value = parse_decimal(raw)
    # Assert
    assert value == expected


# Each tuple contains: (test_id, raw)
INVALID_DECIMAL_TEST_CASES = [
    ("empty", ""),
    ("negative", "-5"),
    ("hex", "0x1f"),
    ("float", "1.5"),
    ("words", "ten"),
    ("inner_space", "1 2"),
]


@pytest.mark.parametrize(
    "test_id, raw",
    INVALID_DECIMAL_TEST_CASES,
    ids=[case[0] for case in INVALID_DECIMAL_TEST_CASES],
)
def test_parse_decimal_fails_on_invalid_input(test_id, raw):
    with pytest.raises(InputValidationError):
        parse_decimal(raw)


def test_parse_decimal_enforces_minimum():
    """
    Test that a well-formed value below the minimum is rejected with the parameter name in the message.
    """
    with pytest.raises(InputValidationError, match="base must be >= 2, got 1"):
        parse_decimal("1", "base", minimum=2)


# =============================================================================
# DEGREE FILTERS
# =============================================================================


@pytest.mark.parametrize(
    "raw, expected",
    [("any", None), (" ANY ", None), ("2", frozenset({2})), ("3,2,3", frozenset({2, 3}))],
    ids=["any", "any_mixed_case", "single", "list_with_repeat"],
)
def test_parse_degree_filter(raw, expected):
    assert parse_degree_filter(raw) == expected


@pytest.mark.parametrize(
    "raw", ["1", "2,1", "", "two", "2,,3"], ids=["one", "list_with_one", "empty", "word", "gap"]
)
def test_parse_degree_filter_fails_on_invalid_input(raw):
    with pytest.raises(InputValidationError):
        parse_degree_filter(raw)


# =============================================================================
# ALPHA SEQUENCES
# =============================================================================


def test_parse_alpha_list():
    assert parse_alpha_list("3,6,13") == (3, 6, 13)


@pytest.mark.parametrize(
    "raw", ["0,3", "3,3", "5,2", "3,x"], ids=["zero", "repeated", "decreasing", "not_decimal"]
)
def test_parse_alpha_list_fails_on_invalid_input(raw):
    with pytest.raises(InputValidationError):
        parse_alpha_list(raw)
