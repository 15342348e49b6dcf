"""
Uncarried expansion analysis for sparse squares.

The family constructions start from the square of a sum of powers of the base,
(x^a0 + x^a1 + ... + x^a(p-1))^2 with a0 = 0, and count how many of its terms land on the same exponent.
This module provides:
- The split of a digit count k into (p, beta) with k = C(p+1, 2) - beta.
- The alpha sequences and the uncarried term lists (general base, folded binary, and any degree).
- Collision counting, both observed and predicted by the recurrences of the constructions.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Tuple

from sympy.ntheory import multinomial_coefficients

from src.models.radix import check_base, from_terms

logger = logging.getLogger(__name__)


class FamilyError(ValueError):
    """Base class for errors raised while building a family member."""

    pass


class OutOfRangeError(FamilyError):
    """Raised when a parameter lies outside the range a construction accepts."""

    pass


class DecompositionForm(str, Enum):
    """Which of the two shapes a digit count takes."""

    GENERIC = "generic"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class DigitDecomposition:
    """
    The unique writing k = C(p+1, 2) - beta with beta in [0, p-1].

    beta <= p-2 is the generic form, where beta engineered collisions reach k. beta = p-1 is the boundary form
    k = C(p, 2) + 1, which needs the per-base special constructions.
    """

    k: int
    p: int
    beta: int

    @property
    def form(self) -> DecompositionForm:
        return DecompositionForm.BOUNDARY if self.beta == self.p - 1 else DecompositionForm.GENERIC


    @property
    def is_boundary(self) -> bool:
        return self.form is DecompositionForm.BOUNDARY


    def reconstruct(self) -> int:
        """Recompute k from (p, beta) alone."""
        if self.is_boundary:
            return math.comb(self.p, 2) + 1
        return math.comb(self.p + 1, 2) - self.beta


@dataclass(frozen=True)
class AlphaSequence:
    """Strictly increasing positive exponents a1 < ... < a(p-1); a0 = 0 is implicit."""

    entries: Tuple[int, ...]

    def __post_init__(self) -> None:
        with_zero = (0,) + tuple(self.entries)
        if any(a >= b for a, b in zip(with_zero, with_zero[1:])):
            raise OutOfRangeError(f"Alpha sequence must be strictly increasing and positive, got {self.entries}")


    def __len__(self) -> int:
        return len(self.entries)


    @property
    def with_zero(self) -> Tuple[int, ...]:
        """The sequence including the implicit a0 = 0."""
        return (0,) + tuple(self.entries)


@dataclass(frozen=True)
class TermMultiset:
    """Uncarried (exponent, coefficient) terms of an expansion; exponents may repeat."""

    terms: Tuple[Tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.terms)


    @property
    def distinct_exponents(self) -> int:
        return len({exponent for exponent, _ in self.terms})


    @property
    def collisions(self) -> int:
        return count_collisions(self.terms)


    def evaluate(self, base: int) -> int:
        return from_terms(self.terms, base)


    def sorted_terms(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(sorted(self.terms))


# --- Digit Count Decomposition ---


def _decompose(k: int) -> DigitDecomposition:
    """Decompose any k >= 2 without the range restriction of the public entry point."""
    # Smallest p with C(p+1, 2) >= k
    p = (math.isqrt(8 * k + 1) - 1) // 2
    if math.comb(p + 1, 2) < k:
        p += 1

    return DigitDecomposition(k=k, p=p, beta=math.comb(p + 1, 2) - k)


def decompose_digit_count(k: int) -> DigitDecomposition:
    """
    Decompose a digit count k >= 5 into its generic or boundary form.

    Args:
        k: Target number of non-zero digits

    Returns:
        DigitDecomposition: Generic(p, beta) when beta <= p-2, boundary when k = C(p, 2) + 1

    Raises:
        OutOfRangeError: If k < 5 (small counts are handled by the small-k family and the classifier)
    """
    if k < 5:
        raise OutOfRangeError(f"Digit count decomposition needs k >= 5, got {k}")

    return _decompose(k)


# --- Uncarried Expansions ---


def square_expansion_terms(alphas: AlphaSequence, base: int) -> TermMultiset:
    """
    List the C(p+1, 2) uncarried terms of (sum of x^ai)^2 in bracket order.

    The order is x^(2*a0), then for each i the bracket 2*x^(ai+aj) for j < i followed by x^(2*ai).

    Args:
        alphas: The exponents a1 < ... < a(p-1)
        base: Radix the expansion is meant for

    Returns:
        TermMultiset: Squares with coefficient 1 and cross terms with coefficient 2
    """
    check_base(base)
    sequence = alphas.with_zero
    terms = [(2 * sequence[0], 1)]
    for i in range(1, len(sequence)):
        terms.extend((sequence[i] + sequence[j], 2) for j in range(i))
        terms.append((2 * sequence[i], 1))

    return TermMultiset(terms=tuple(terms))


def binary_expansion_terms(alphas: AlphaSequence) -> TermMultiset:
    """Base-2 version of the square expansion, each cross term 2*2^e folded into 2^(e+1)."""
    folded = [
        (exponent + 1, 1) if coefficient == 2 else (exponent, coefficient)
        for exponent, coefficient in square_expansion_terms(alphas, 2).terms
    ]
    return TermMultiset(terms=tuple(folded))


def power_expansion_terms(alphas: AlphaSequence, degree: int, base: int) -> TermMultiset:
    """
    List the uncarried multinomial terms of (sum of x^ai)^degree.

    There is one term per monomial of (1 + X1 + ... + X(p-1))^degree, so C(p-1+degree, degree) terms.

    Args:
        alphas: The exponents a1 < ... < a(p-1)
        degree: Power, at least 2
        base: Radix the expansion is meant for

    Returns:
        TermMultiset: Terms sorted by (exponent, coefficient)

    Raises:
        OutOfRangeError: If degree < 2
    """
    check_base(base)
    if degree < 2:
        raise OutOfRangeError(f"Expansion degree must be >= 2, got {degree}")

    sequence = alphas.with_zero
    terms = [
        (sum(multiplicity * alpha for multiplicity, alpha in zip(monomial, sequence)), int(coefficient))
        for monomial, coefficient in multinomial_coefficients(len(sequence), degree).items()
    ]
    return TermMultiset(terms=tuple(sorted(terms)))


# --- Collisions ---


def count_collisions(terms: Iterable[Tuple[int, int]]) -> int:
    """Number of terms minus number of distinct exponents."""
    terms = list(terms)
    return len(terms) - len({exponent for exponent, _ in terms})


def predicted_collisions(alphas: AlphaSequence, binary: bool) -> int:
    """
    Count the indices where the recurrence forces a collision.

    For x >= 3 a collision happens exactly when ai = 2*a(i-1); in the folded binary expansion exactly when
    ai = 2*a(i-1) - 1. This holds while ai >= 2*a(i-1) (resp. 2*a(i-1) - 1, with a1 >= 3 in binary).
    """
    offset = 1 if binary else 0
    sequence = alphas.with_zero
    return sum(1 for previous, current in zip(sequence[1:], sequence[2:]) if current == 2 * previous - offset)


def sigma_for_base(x: int) -> int:
    """
    Leading coefficient ceil(sqrt(x+1)) of the x >= 6 boundary construction.

    For x >= 6 it satisfies 2*sigma <= x and x < sigma^2 < 2x, so sigma^2 spans exactly two base-x digits.

    Raises:
        OutOfRangeError: If x < 6
    """
    if x < 6:
        raise OutOfRangeError(f"Sigma construction needs x >= 6, got {x}")

    root = math.isqrt(x + 1)
    return root if root * root == x + 1 else root + 1
