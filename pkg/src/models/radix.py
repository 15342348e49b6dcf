"""
Exact radix arithmetic for the Sparse Power Oracle.

This module holds the arbitrary-precision building blocks shared by the family generators and the search oracle:
- Base-x expansion of natural numbers and evaluation of uncarried term lists.
- Counting of non-zero digits.
- Integer n-th roots and perfect-power detection with a canonical (maximal degree) witness.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy import divisors, integer_nthroot, primerange
from sympy.ntheory import digits as sympy_digits

logger = logging.getLogger(__name__)


class RadixError(ValueError):
    """Raised when radix arithmetic receives an input outside its domain."""

    pass


class InvalidBaseError(RadixError):
    """Raised when a base smaller than 2 is supplied."""

    pass


class InvalidDegreeError(RadixError):
    """Raised when a root degree smaller than 1 is supplied."""

    pass


class DegenerateInputError(RadixError):
    """Raised when perfect-power detection is asked about 0 or 1, which have no canonical witness."""

    pass


def check_base(base: int) -> None:
    """Raise InvalidBaseError unless base is an integer >= 2."""
    if isinstance(base, bool) or not isinstance(base, int) or base < 2:
        raise InvalidBaseError(f"Base must be an integer >= 2, got {base!r}")


def _check_natural(n: int, name: str = "n") -> None:
    """Raise RadixError unless n is a non-negative integer."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise RadixError(f"{name} must be a non-negative integer, got {n!r}")


# --- Domain Types ---


@dataclass(frozen=True)
class BaseExpansion:
    """Digits of a natural number in a given base, least-significant first, without leading zeros."""

    base: int
    digits: Tuple[int, ...]

    def __post_init__(self) -> None:
        check_base(self.base)

        # Every digit must be a valid base-x digit
        if any(digit < 0 or digit >= self.base for digit in self.digits):
            raise RadixError(f"Digits {self.digits} are not all in [0, {self.base - 1}]")

        # The most significant entry is never zero; zero itself is the empty expansion
        if self.digits and self.digits[-1] == 0:
            raise RadixError("Expansion must not end with a most-significant zero digit")


    @property
    def nonzero_count(self) -> int:
        return sum(1 for digit in self.digits if digit != 0)


@dataclass(frozen=True)
class SparseForm:
    """
    The non-zero digits of a value in base x, as (exponent, coefficient) pairs.

    Exponents are strictly increasing and every coefficient is a valid non-zero digit, so the number of terms
    is exactly the non-zero digit count of the represented value.
    """

    base: int
    terms: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        check_base(self.base)
        exponents = [exponent for exponent, _ in self.terms]

        # Exponents must be strictly increasing and non-negative
        if any(exponent < 0 for exponent in exponents) or any(a >= b for a, b in zip(exponents, exponents[1:])):
            raise RadixError(f"Sparse form exponents must be strictly increasing, got {exponents}")

        # Coefficients must be non-zero base-x digits
        if any(not 1 <= coefficient < self.base for _, coefficient in self.terms):
            raise RadixError(f"Sparse form coefficients must lie in [1, {self.base - 1}]")


    def __len__(self) -> int:
        return len(self.terms)


    @property
    def value(self) -> int:
        return from_terms(self.terms, self.base)


    @property
    def exponents(self) -> Tuple[int, ...]:
        return tuple(exponent for exponent, _ in self.terms)


    @property
    def max_exponent(self) -> int:
        return self.terms[-1][0] if self.terms else 0


    def render(self) -> str:
        """Render as `c*x^m+...` in ascending exponent order, e.g. `1*2^0+1*2^3` for 9 in base 2."""
        return "+".join(f"{coefficient}*{self.base}^{exponent}" for exponent, coefficient in self.terms)


@dataclass(frozen=True)
class PowerWitness:
    """A representation n = root^degree with root >= 2 and degree >= 2."""

    root: int
    degree: int

    def __post_init__(self) -> None:
        if self.root < 2 or self.degree < 2:
            raise RadixError(f"Power witness needs root >= 2 and degree >= 2, got {self.root}^{self.degree}")


    @property
    def value(self) -> int:
        return self.root**self.degree


    def render(self) -> str:
        return f"{self.root}^{self.degree}"


# --- Expansion and Evaluation ---


def to_expansion(n: int, base: int) -> BaseExpansion:
    """
    Expand n in the given base.

    Args:
        n: Non-negative integer to expand
        base: Radix, at least 2

    Returns:
        BaseExpansion: Digits least-significant first; 0 maps to the empty digit list

    Raises:
        InvalidBaseError: If base < 2
        RadixError: If n is negative
    """
    check_base(base)
    _check_natural(n)

    if n == 0:
        return BaseExpansion(base=base, digits=())

    # sympy returns [base, most significant digit, ..., least significant digit]
    most_significant_first = sympy_digits(n, base)[1:]
    return BaseExpansion(base=base, digits=tuple(reversed(most_significant_first)))


def from_expansion(expansion: BaseExpansion) -> int:
    """Evaluate a BaseExpansion back to its integer value."""
    return from_terms(enumerate(expansion.digits), expansion.base)


def from_terms(terms: Iterable[Tuple[int, int]], base: int) -> int:
    """
    Evaluate an uncarried list of (exponent, coefficient) terms.

    Exponents may repeat and coefficients may equal or exceed the base; carries happen implicitly.

    Args:
        terms: Iterable of (exponent, coefficient) pairs
        base: Radix, at least 2

    Returns:
        int: The sum of coefficient * base**exponent

    Raises:
        InvalidBaseError: If base < 2
        RadixError: If an exponent or coefficient is negative
    """
    check_base(base)
    total = 0
    for exponent, coefficient in terms:
        if exponent < 0 or coefficient < 0:
            raise RadixError(f"Term ({exponent}, {coefficient}) has a negative exponent or coefficient")
        total += coefficient * base**exponent

    return total


def count_nonzero(n: int, base: int) -> int:
    """
    Count the non-zero digits of n in the given base.

    Args:
        n: Non-negative integer
        base: Radix, at least 2

    Returns:
        int: Number of non-zero digits of the canonical base expansion of n
    """
    check_base(base)
    _check_natural(n)

    # Binary has a direct representation
    if base == 2:
        return bin(n).count("1")

    return to_expansion(n, base).nonzero_count


def sparse_form(n: int, base: int) -> SparseForm:
    """Return the SparseForm (non-zero digits with their positions) of n in the given base."""
    expansion = to_expansion(n, base)
    terms = tuple((exponent, digit) for exponent, digit in enumerate(expansion.digits) if digit != 0)
    return SparseForm(base=base, terms=terms)


# --- Roots and Perfect Powers ---


def integer_nth_root(n: int, d: int) -> Tuple[int, bool]:
    """
    Compute the integer d-th root of n.

    Args:
        n: Non-negative integer
        d: Root degree, at least 1

    Returns:
        Tuple[int, bool]: (root, exact) with root**d <= n < (root+1)**d and exact iff root**d == n

    Raises:
        InvalidDegreeError: If d < 1
        RadixError: If n is negative
    """
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise InvalidDegreeError(f"Root degree must be an integer >= 1, got {d!r}")
    _check_natural(n)

    root, exact = integer_nthroot(n, d)
    return int(root), bool(exact)


def as_perfect_power(n: int, candidate_primes: Optional[Sequence[int]] = None) -> Optional[PowerWitness]:
    """
    Find the maximal-degree witness n = y^d, if n is a perfect power.

    Prime degrees up to log2(n) are tried in ascending order, each as often as it divides the degree, so the
    returned root is itself not a perfect power and the degree is maximal.

    Args:
        n: Integer >= 2
        candidate_primes: Optional subset of prime degrees known to be the only possible ones. Primes outside
            it must already be excluded (for instance by residue tests); the result is then unchanged.

    Returns:
        Optional[PowerWitness]: The witness with maximal degree, or None when n is not a perfect power

    Raises:
        DegenerateInputError: If n < 2
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise DegenerateInputError(f"Perfect-power detection needs n >= 2, got {n!r}")

    primes = list(primerange(2, n.bit_length() + 1)) if candidate_primes is None else sorted(candidate_primes)
    root, degree = n, 1

    # Peel off prime degrees smallest first
    for prime in primes:
        if 1 << prime > root:
            break

        while True:
            candidate, exact = integer_nth_root(root, prime)
            if not exact:
                break
            root, degree = candidate, degree * prime

    if degree == 1:
        return None

    return PowerWitness(root=root, degree=degree)


def power_divisors(witness: PowerWitness) -> List[PowerWitness]:
    """
    List every representation of witness.value as a perfect power, ascending by degree.

    Args:
        witness: The maximal-degree witness of a value

    Returns:
        List[PowerWitness]: One witness per divisor d' >= 2 of the maximal degree
    """
    return [
        PowerWitness(root=witness.root ** (witness.degree // degree), degree=int(degree))
        for degree in divisors(witness.degree)
        if degree >= 2
    ]
