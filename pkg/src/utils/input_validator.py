"""
Input Validator for the Sparse Power Oracle

This module provides validation and normalization of command-line values: arbitrary-size decimal
integers, degree filters and alpha sequences.
"""

import logging
import re
from typing import FrozenSet, Optional, Tuple

logger = logging.getLogger(__name__)

DECIMAL_PATTERN = re.compile(r"^[+]?[0-9]+$")


class InputValidationError(Exception):
    """Raised when a command-line value fails validation."""

    pass


def parse_decimal(raw: str, name: str = "value", minimum: int = 0) -> int:
    """
    Parse a non-negative decimal integer of any size.

    Args:
        raw: Raw string from the command line
        name: Name used in error messages
        minimum: Smallest accepted value

    Returns:
        The parsed integer

    Raises:
        InputValidationError: If the string is not a decimal integer or the value is below minimum
    """
    if not raw or not isinstance(raw, str):
        raise InputValidationError(f"{name} must be a non-empty decimal string")

    # Remove whitespace and digit group separators
    clean = raw.strip().replace("_", "")

    if not DECIMAL_PATTERN.match(clean):
        raise InputValidationError(f"{name} must be a decimal integer, got {raw!r}")

    value = int(clean)
    if value < minimum:
        raise InputValidationError(f"{name} must be >= {minimum}, got {value}")

    return value


def parse_degree_filter(raw: str) -> Optional[FrozenSet[int]]:
    """
    Parse a degree filter: `any` or a comma-separated list of degrees >= 2.

    Returns:
        None for `any`, otherwise the set of degrees

    Raises:
        InputValidationError: If an entry is not an integer >= 2
    """
    clean = raw.strip().lower()
    if clean == "any":
        return None

    degrees = frozenset(parse_decimal(part, "degree", minimum=2) for part in clean.split(","))
    logger.debug(f"Degree filter parsed as {sorted(degrees)}")
    return degrees


def parse_alpha_list(raw: str) -> Tuple[int, ...]:
    """
    Parse a comma-separated alpha sequence a1 < a2 < ... of positive exponents.

    Raises:
        InputValidationError: If an entry is not a positive integer or the list is not strictly increasing
    """
    alphas = tuple(parse_decimal(part, "alpha", minimum=1) for part in raw.split(","))

    if any(a >= b for a, b in zip(alphas, alphas[1:])):
        raise InputValidationError(f"Alphas must be strictly increasing, got {raw!r}")

    return alphas
