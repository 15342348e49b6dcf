"""
Unit tests for the uncarried expansion analysis: digit count decomposition, term lists and collisions.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.models.expansion import (
    AlphaSequence,
    DecompositionForm,
    OutOfRangeError,
    TermMultiset,
    binary_expansion_terms,
    count_collisions,
    decompose_digit_count,
    power_expansion_terms,
    predicted_collisions,
    sigma_for_base,
    square_expansion_terms,
)
from src.models.radix import count_nonzero


# --- Strategies ---


@st.composite
def doubling_alphas(draw, binary: bool):
    """
    Alpha sequences with ai >= 2a(i-1) (x >= 3) or ai >= 2a(i-1) - 1 (binary, a1 >= 3).

    Returns the sequence together with the number of indices sitting exactly on the lower bound.
    """
    first = draw(st.integers(min_value=3 if binary else 1, max_value=40))
    steps = draw(st.lists(st.integers(min_value=0, max_value=3), min_size=0, max_size=7))

    entries = [first]
    for step in steps:
        entries.append(2 * entries[-1] - (1 if binary else 0) + step)

    return AlphaSequence(entries=tuple(entries)), sum(1 for step in steps if step == 0)


# --- Decomposition ---


class TestDecomposeDigitCount:
    """Tests for decompose_digit_count."""


    @pytest.mark.parametrize(
        "k, p, beta, form",
        [
            (5, 3, 1, DecompositionForm.GENERIC),
            (6, 3, 0, DecompositionForm.GENERIC),
            (7, 4, 3, DecompositionForm.BOUNDARY),
            (8, 4, 2, DecompositionForm.GENERIC),
            (11, 5, 4, DecompositionForm.BOUNDARY),
            (16, 6, 5, DecompositionForm.BOUNDARY),
            (45, 9, 0, DecompositionForm.GENERIC),
        ],
        ids=["k5", "k6", "k7-boundary", "k8", "k11-boundary", "k16-boundary", "k45"],
    )
    def test_decompose_known_counts(self, k, p, beta, form):
        decomposition = decompose_digit_count(k)

        assert (decomposition.p, decomposition.beta) == (p, beta)
        assert decomposition.form is form


    @pytest.mark.parametrize("k", range(5, 501))
    def test_decomposition_reconstructs_k_and_beta_is_in_range(self, k):
        decomposition = decompose_digit_count(k)

        assert decomposition.reconstruct() == k
        assert 0 <= decomposition.beta <= decomposition.p - 1
        assert math.comb(decomposition.p, 2) < k <= math.comb(decomposition.p + 1, 2)


    def test_boundary_counts_are_binomial_plus_one(self):
        boundary = [k for k in range(5, 60) if decompose_digit_count(k).is_boundary]

        assert boundary == [7, 11, 16, 22, 29, 37, 46, 56]


    @pytest.mark.parametrize("k", [4, 3, 0], ids=["k4", "k3", "k0"])
    def test_decompose_rejects_small_counts(self, k):
        with pytest.raises(OutOfRangeError, match="k >= 5"):
            decompose_digit_count(k)


# --- Term Lists ---


class TestExpansionTerms:
    """Tests for the uncarried term lists."""


    def test_square_expansion_terms_follow_bracket_order(self):
        terms = square_expansion_terms(AlphaSequence(entries=(3, 7)), base=10)

        assert terms.terms == ((0, 1), (3, 2), (6, 1), (7, 2), (10, 2), (14, 1))
        assert len(terms) == math.comb(3 + 1, 2)


    def test_square_expansion_terms_with_colliding_exponent(self):
        terms = square_expansion_terms(AlphaSequence(entries=(3, 6)), base=10)

        assert terms.terms == ((0, 1), (3, 2), (6, 1), (6, 2), (9, 2), (12, 1))
        assert terms.distinct_exponents == 5
        assert terms.collisions == 1
        assert terms.evaluate(10) == 1001001**2 == 1002003002001


    @given(st.lists(st.integers(min_value=1, max_value=60), min_size=1, max_size=6, unique=True))
    def test_square_expansion_evaluates_to_the_square(self, raw_alphas):
        alphas = AlphaSequence(entries=tuple(sorted(raw_alphas)))
        root = sum(7**alpha for alpha in alphas.with_zero)

        terms = square_expansion_terms(alphas, base=7)

        assert terms.evaluate(7) == root**2
        assert len(terms) == math.comb(len(alphas.with_zero) + 1, 2)


    def test_binary_expansion_folds_cross_terms(self):
        terms = binary_expansion_terms(AlphaSequence(entries=(3,)))

        assert terms.terms == ((0, 1), (4, 1), (6, 1))
        assert terms.evaluate(2) == 9**2


    @pytest.mark.parametrize("first", range(4, 13))
    def test_seven_bit_identity(self, first):
        """
        GIVEN y = 1 + 2^a + 2^(a+1) + 2^(a+2) with a >= 4
        WHEN y is squared
        THEN y^2 = 1 + 2^(a+1) + 2^(a+2) + 2^(a+3) + 2^(2a) + 2^(2a+4) + 2^(2a+5), exactly seven bits.
        """
        root = 1 + 2**first + 2 ** (first + 1) + 2 ** (first + 2)
        expected = sum(
            2**exponent
            for exponent in (0, first + 1, first + 2, first + 3, 2 * first, 2 * first + 4, 2 * first + 5)
        )

        assert root**2 == expected
        assert count_nonzero(root**2, 2) == 7


    @pytest.mark.parametrize("degree", [2, 3, 4, 5])
    def test_power_expansion_has_multinomial_term_count(self, degree):
        alphas = AlphaSequence(entries=(2, 5))

        terms = power_expansion_terms(alphas, degree, base=3)

        assert len(terms) == math.comb(3 - 1 + degree, degree)
        assert terms.evaluate(3) == (1 + 3**2 + 3**5) ** degree


    def test_power_expansion_of_degree_two_matches_square_expansion(self):
        alphas = AlphaSequence(entries=(3, 6, 13))

        assert power_expansion_terms(alphas, 2, base=5).terms == square_expansion_terms(alphas, 5).sorted_terms()


    def test_power_expansion_rejects_degree_below_two(self):
        with pytest.raises(OutOfRangeError):
            power_expansion_terms(AlphaSequence(entries=(2,)), 1, base=3)


    @pytest.mark.parametrize(
        "entries", [(3, 3), (0, 4), (5, 2), (-1,)], ids=["repeated", "zero", "decreasing", "negative"]
    )
    def test_alpha_sequence_must_be_strictly_increasing_and_positive(self, entries):
        with pytest.raises(OutOfRangeError):
            AlphaSequence(entries=entries)


# --- Collisions ---


class TestCollisions:
    """Tests for the collision counts the families rely on."""


    def test_count_collisions_counts_repeated_exponents(self):
        assert count_collisions([(0, 1), (4, 2), (4, 1), (4, 1), (9, 1)]) == 2
        assert TermMultiset(terms=((1, 1), (2, 1))).collisions == 0


    @settings(max_examples=200)
    @given(doubling_alphas(binary=False))
    def test_collision_law_for_general_base(self, drawn):
        """
        GIVEN alphas with ai >= 2a(i-1)
        WHEN the square expansion is listed
        THEN the collisions are exactly the indices with ai = 2a(i-1).
        """
        alphas, on_bound = drawn

        terms = square_expansion_terms(alphas, base=3)

        assert terms.collisions == on_bound
        assert predicted_collisions(alphas, binary=False) == on_bound


    @settings(max_examples=200)
    @given(doubling_alphas(binary=True))
    def test_collision_law_for_folded_binary(self, drawn):
        """
        GIVEN alphas with a1 >= 3 and ai >= 2a(i-1) - 1
        WHEN the folded binary expansion is listed
        THEN the collisions are exactly the indices with ai = 2a(i-1) - 1.
        """
        alphas, on_bound = drawn

        terms = binary_expansion_terms(alphas)

        assert terms.collisions == on_bound
        assert predicted_collisions(alphas, binary=True) == on_bound


# --- Sigma ---


class TestSigma:
    """Tests for the leading coefficient of the x >= 6 boundary construction."""


    @pytest.mark.parametrize("x", range(6, 1001))
    def test_sigma_spans_exactly_two_digits(self, x):
        sigma = sigma_for_base(x)

        assert (sigma - 1) ** 2 < x + 1 <= sigma**2
        assert 2 * sigma <= x
        assert x < sigma**2 < 2 * x


    @pytest.mark.parametrize("x", [2, 3, 4, 5])
    def test_sigma_rejects_small_bases(self, x):
        with pytest.raises(OutOfRangeError, match="x >= 6"):
            sigma_for_base(x)
