"""
Case classification for (base, digit count) pairs.

For every pair (x, k) this module reports what is known about perfect powers coprime with x having exactly
k non-zero base-x digits, and routes generation requests to the family that proves infinitude:
- k = 1: finitely many, trivially (single digits).
- k = 2: finite for x = 2 (Mihailescu), conjectured finite for x >= 3.
- k = 4, x = 2: finite (Corvaja-Zannier).
- k = 4, x = 3, squares only: open.
- Every other pair with k >= 3: infinite, with an explicit family.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import count, islice
from typing import Callable, Dict, Iterator, List, Optional

from src.models.expansion import decompose_digit_count
from src.models.families import (
    FamilyId,
    FamilyMember,
    gen_base3_special,
    gen_base45_special,
    gen_basex_generic,
    gen_basex_sigma,
    gen_binary_generic,
    gen_binary_special,
    gen_small_k,
)

logger = logging.getLogger(__name__)

# Citation tags carried by the known finiteness results
MIHAILESCU = "Mihailescu"
CZ_FOUR_DIGITS = "CZ-4digits"


class InvalidCaseError(ValueError):
    """Raised when a base below 2 or a digit count below 1 is classified."""

    pass


class CaseKind(str, Enum):
    """What is known about a (base, digit count) pair."""

    FINITE_TRIVIAL = "finite-trivial"
    FINITE_KNOWN = "finite-known"
    CONJECTURED_FINITE = "conjectured-finite"
    OPEN_QUESTION = "open-question"
    INFINITE = "infinite"


@dataclass(frozen=True)
class CaseStatus:
    """Classification of one (x, k, square_only) triple; Infinite statuses name their family and degree."""

    kind: CaseKind
    reason: str
    citation: Optional[str] = None
    family_id: Optional[FamilyId] = None
    degree: Optional[int] = None

    @property
    def is_infinite(self) -> bool:
        return self.kind is CaseKind.INFINITE


    @property
    def label(self) -> str:
        """Short label used in table cells."""
        if self.kind is CaseKind.INFINITE:
            return f"infinite: {self.family_id.value}"
        if self.kind is CaseKind.OPEN_QUESTION:
            return "open"
        return self.kind.value


class CaseStatusError(Exception):
    """Raised when a member is requested for a pair that has no infinite family; carries the status."""

    def __init__(self, x: int, k: int, status: CaseStatus):
        super().__init__(f"No family for x={x}, k={k}: {status.kind.value} ({status.reason})")
        self.x = x
        self.k = k
        self.status = status


@dataclass(frozen=True)
class CaseTableRow:
    """One cell of the case matrix: both the any-power and the square-only status."""

    base: int
    digits: int
    any_power: CaseStatus
    square_only: CaseStatus


# --- Classification ---


def _infinite(family_id: FamilyId, degree: int, reason: str) -> CaseStatus:
    return CaseStatus(kind=CaseKind.INFINITE, reason=reason, family_id=family_id, degree=degree)


def _classify_large_k(x: int, k: int) -> CaseStatus:
    """Route k >= 5 by its decomposition and the base."""
    decomposition = decompose_digit_count(k)

    if not decomposition.is_boundary:
        if x == 2:
            return _infinite(FamilyId.BINARY_GENERIC, 2, f"k = C({decomposition.p + 1}, 2) - {decomposition.beta}")
        return _infinite(FamilyId.BASEX_GENERIC, 2, f"k = C({decomposition.p + 1}, 2) - {decomposition.beta}")

    # Boundary counts k = C(p, 2) + 1 need a construction per base
    reason = f"k = C({decomposition.p}, 2) + 1"
    if x == 2:
        return _infinite(FamilyId.BINARY_SPECIAL, 2, reason)
    if x == 3:
        return _infinite(FamilyId.BASE3_SPECIAL, 2, reason)
    if x in (4, 5):
        return _infinite(FamilyId.BASE45_SPECIAL, 2, reason)
    return _infinite(FamilyId.BASEX_SIGMA, 2, reason)


def classify_case(x: int, k: int, square_only: bool = False) -> CaseStatus:
    """
    Classify a (base, digit count) pair.

    Args:
        x: Base, at least 2
        k: Number of non-zero digits, at least 1
        square_only: Restrict to perfect squares instead of arbitrary perfect powers

    Returns:
        CaseStatus: Exactly one status per (x, k, square_only)

    Raises:
        InvalidCaseError: If x < 2 or k < 1
    """
    if isinstance(x, bool) or not isinstance(x, int) or x < 2:
        raise InvalidCaseError(f"Base must be an integer >= 2, got {x!r}")
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise InvalidCaseError(f"Digit count must be an integer >= 1, got {k!r}")

    if k == 1:
        return CaseStatus(kind=CaseKind.FINITE_TRIVIAL, reason="a single non-zero digit is a value below x")

    if k == 2:
        if x == 2:
            return CaseStatus(
                kind=CaseKind.FINITE_KNOWN, reason="9 = 3^2 = 1 + 2^3 is the only solution", citation=MIHAILESCU
            )
        return CaseStatus(kind=CaseKind.CONJECTURED_FINITE, reason="two-digit powers are conjectured finite")

    if k == 3:
        return _infinite(FamilyId.SMALL_K, 2, "(x^a + 1)^2 = x^(2a) + 2x^a + 1")

    if k == 4:
        if x == 2:
            return CaseStatus(
                kind=CaseKind.FINITE_KNOWN,
                reason="finitely many odd perfect powers with four binary digits",
                citation=CZ_FOUR_DIGITS,
            )
        if x == 3:
            if square_only:
                return CaseStatus(kind=CaseKind.OPEN_QUESTION, reason="squares with four base-3 digits are open")
            return _infinite(FamilyId.SMALL_K, 3, "(3^a + 1)^3 = 1 + 3^(a+1) + 3^(2a+1) + 3^(3a)")
        if x in (4, 5):
            return _infinite(FamilyId.BASE45_SPECIAL, 2, "k = C(3, 2) + 1")
        return _infinite(FamilyId.BASEX_SIGMA, 2, "k = C(3, 2) + 1")

    return _classify_large_k(x, k)


# --- Generation ---


# Generators keyed by family, normalized to the (x, k, t) signature
GENERATORS: Dict[FamilyId, Callable[[int, int, int], FamilyMember]] = {
    FamilyId.BINARY_GENERIC: lambda x, k, t: gen_binary_generic(k, t),
    FamilyId.BINARY_SPECIAL: lambda x, k, t: gen_binary_special(k, t),
    FamilyId.BASEX_GENERIC: gen_basex_generic,
    FamilyId.BASE3_SPECIAL: lambda x, k, t: gen_base3_special(k, t),
    FamilyId.BASE45_SPECIAL: gen_base45_special,
    FamilyId.BASEX_SIGMA: gen_basex_sigma,
    FamilyId.SMALL_K: gen_small_k,
}


def generate_member(x: int, k: int, t: int, square_only: bool = False) -> FamilyMember:
    """
    Return the t-th member of the family designated for (x, k).

    Args:
        x: Base, at least 2
        k: Number of non-zero digits
        t: Family index, at least 0
        square_only: Restrict to perfect squares

    Returns:
        FamilyMember: A verified member

    Raises:
        CaseStatusError: If the pair is not classified Infinite; the status is attached
    """
    status = classify_case(x, k, square_only)
    if not status.is_infinite:
        raise CaseStatusError(x, k, status)

    return GENERATORS[status.family_id](x, k, t)


def iter_family(x: int, k: int, start: int = 0, square_only: bool = False) -> Iterator[FamilyMember]:
    """
    Lazily yield the members t = start, start+1, ... of the family designated for (x, k).

    Raises:
        CaseStatusError: On first use, if the pair is not classified Infinite
    """
    status = classify_case(x, k, square_only)
    if not status.is_infinite:
        raise CaseStatusError(x, k, status)

    generator = GENERATORS[status.family_id]
    for t in count(start):
        yield generator(x, k, t)


def first_members(x: int, k: int, n: int, start: int = 0, square_only: bool = False) -> List[FamilyMember]:
    """The first n members from start on."""
    return list(islice(iter_family(x, k, start, square_only), n))


def case_table(max_base: int, max_digits: int) -> List[CaseTableRow]:
    """
    Build the case matrix for 2 <= x <= max_base and 3 <= k <= max_digits, row-major by x then k.

    Raises:
        InvalidCaseError: If max_base < 2 or max_digits < 3
    """
    if max_base < 2 or max_digits < 3:
        raise InvalidCaseError(f"Table needs max_base >= 2 and max_digits >= 3, got {max_base}, {max_digits}")

    rows = [
        CaseTableRow(
            base=x,
            digits=k,
            any_power=classify_case(x, k, square_only=False),
            square_only=classify_case(x, k, square_only=True),
        )
        for x in range(2, max_base + 1)
        for k in range(3, max_digits + 1)
    ]
    logger.debug(f"Built case table with {len(rows)} cells")
    return rows
