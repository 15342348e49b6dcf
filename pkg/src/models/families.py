"""
Constructive families of sparse perfect powers.

Each generator takes the family parameters (base x, digit count k, family index t) and returns a member
y^d that is coprime with x and has exactly k non-zero base-x digits. Members are verified before they are
returned: a failed digit count is raised as FamilyVerificationError, never returned.

Families:
- binary-generic: x = 2, k generic; a1 = 3+t, ai = 2a(i-1)-1 for beta steps, then ai = 2a(i-1).
- binary-special: x = 2, k = C(p, 2)+1 with k = 7 or k >= 11.
- basex-generic: x >= 3, k generic; a1 = 3+t, ai = 2a(i-1) for beta steps, then ai = 2a(i-1)+1.
- base3-special: x = 3, k = C(p, 2)+1 with k >= 7.
- base45-special: x in {4, 5}, k = C(p, 2)+1 with k >= 4.
- basex-sigma: x >= 6, k = C(p, 2)+1 with k >= 4, leading coefficient sigma = ceil(sqrt(x+1)).
- small-k: k = 3 squares (x^a+1)^2 and k = 4 cubes (x^a+1)^3.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Optional

from src.models.expansion import (
    AlphaSequence,
    DigitDecomposition,
    FamilyError,
    OutOfRangeError,
    _decompose,
    decompose_digit_count,
    sigma_for_base,
)
from src.models.radix import SparseForm, check_base, count_nonzero, sparse_form

logger = logging.getLogger(__name__)


class WrongFormError(FamilyError):
    """Raised when a family is asked for a (base, digit count) pair it does not cover."""

    pass


class FamilyVerificationError(FamilyError):
    """Raised when a constructed member fails its digit count or coprimality check."""

    pass


class FamilyId(str, Enum):
    """Identifiers of the constructive families."""

    BINARY_GENERIC = "binary-generic"
    BINARY_SPECIAL = "binary-special"
    BASEX_GENERIC = "basex-generic"
    BASE3_SPECIAL = "base3-special"
    BASE45_SPECIAL = "base45-special"
    BASEX_SIGMA = "basex-sigma"
    SMALL_K = "small-k"


@dataclass(frozen=True)
class FamilyParameters:
    """The parameters that produced a member."""

    family_index: int
    alphas: AlphaSequence
    decomposition: Optional[DigitDecomposition] = None
    normalization: int = 1
    sigma: Optional[int] = None


@dataclass(frozen=True)
class FamilyMember:
    """One verified witness y^d with exactly target_k non-zero base-x digits, coprime with x."""

    family_id: FamilyId
    base: int
    target_k: int
    root: int
    degree: int
    value: int
    sparse: SparseForm
    params: FamilyParameters

    @property
    def max_exponent(self) -> int:
        return self.sparse.max_exponent


# --- Helpers ---


def _check_family_index(t: int) -> None:
    if t < 0:
        raise OutOfRangeError(f"Family index must be >= 0, got {t}")


def _boundary_decomposition(k: int, minimum_k: int, family_id: FamilyId) -> DigitDecomposition:
    """Return the boundary decomposition of k, or raise WrongFormError if k is not covered by the family."""
    if k < minimum_k:
        raise WrongFormError(f"{family_id.value} needs k >= {minimum_k}, got {k}")

    decomposition = _decompose(k)
    if not decomposition.is_boundary:
        raise WrongFormError(f"{family_id.value} needs k of the form C(p, 2)+1, got {k}")

    return decomposition


def _generic_decomposition(k: int, family_id: FamilyId) -> DigitDecomposition:
    """Return the generic decomposition of k, or raise WrongFormError for boundary counts."""
    decomposition = decompose_digit_count(k)
    if decomposition.is_boundary:
        raise WrongFormError(f"{family_id.value} does not cover k = C({decomposition.p}, 2)+1 = {k}")

    return decomposition


def _recurrence_alphas(first: int, length: int, step: Callable[[int, int], int]) -> AlphaSequence:
    """Build (a1, ..., a_length) with a1 = first and ai = step(i, a(i-1))."""
    entries = [first] if length >= 1 else []
    for i in range(2, length + 1):
        entries.append(step(i, entries[-1]))

    return AlphaSequence(entries=tuple(entries))


def _power_sum(base: int, exponents) -> int:
    return sum(base**exponent for exponent in exponents)


def _verified_member(
    family_id: FamilyId, base: int, k: int, root: int, degree: int, params: FamilyParameters
) -> FamilyMember:
    """
    Build a member and check it against the target digit count and coprimality with the base.

    Raises:
        FamilyVerificationError: If y^d does not have exactly k non-zero digits or shares a factor with x
    """
    value = root**degree
    nonzero = count_nonzero(value, base)
    if nonzero != k:
        raise FamilyVerificationError(
            f"{family_id.value} member for x={base}, k={k}, t={params.family_index} has {nonzero} non-zero digits"
        )

    if math.gcd(value, base) != 1:
        raise FamilyVerificationError(
            f"{family_id.value} member for x={base}, k={k}, t={params.family_index} is not coprime with the base"
        )

    logger.debug(f"Verified {family_id.value} member x={base} k={k} t={params.family_index}: {root}^{degree}")
    return FamilyMember(
        family_id=family_id,
        base=base,
        target_k=k,
        root=root,
        degree=degree,
        value=value,
        sparse=sparse_form(value, base),
        params=params,
    )


# --- Alpha Sequences ---


def binary_generic_alphas(decomposition: DigitDecomposition, t: int) -> AlphaSequence:
    """a1 = 3+t; ai = 2a(i-1)-1 for i = 2..beta+1; ai = 2a(i-1) for i >= beta+2."""
    beta = decomposition.beta
    return _recurrence_alphas(
        3 + t, decomposition.p - 1, lambda i, previous: 2 * previous - 1 if i <= beta + 1 else 2 * previous
    )


def binary_special_alphas(decomposition: DigitDecomposition, t: int) -> AlphaSequence:
    """(a1, a1+1, a1+2) with a1 = 4+t, then a4 = 2a1+4 and ai = 2a(i-1)-1 for i > 4."""
    first = 4 + t
    entries = [first, first + 1, first + 2]
    if decomposition.p >= 5:
        entries.append(2 * first + 4)
        for _ in range(5, decomposition.p):
            entries.append(2 * entries[-1] - 1)

    return AlphaSequence(entries=tuple(entries))


def basex_generic_alphas(decomposition: DigitDecomposition, t: int) -> AlphaSequence:
    """a1 = 3+t; ai = 2a(i-1) for i = 2..beta+1; ai = 2a(i-1)+1 for i >= beta+2."""
    beta = decomposition.beta
    return _recurrence_alphas(
        3 + t, decomposition.p - 1, lambda i, previous: 2 * previous if i <= beta + 1 else 2 * previous + 1
    )


def base3_special_alphas(decomposition: DigitDecomposition, t: int) -> AlphaSequence:
    """k = 7: (a1, a1+1, a1+2) with a1 = 3+t. k >= 11: (a1, a1+1, 2a1, 2a1+1) with a1 = 4+t, then doubling."""
    if decomposition.p == 4:
        first = 3 + t
        return AlphaSequence(entries=(first, first + 1, first + 2))

    first = 4 + t
    entries = [first, first + 1, 2 * first, 2 * first + 1]
    for _ in range(5, decomposition.p):
        entries.append(2 * entries[-1])

    return AlphaSequence(entries=tuple(entries))


def boundary_alphas(decomposition: DigitDecomposition, t: int) -> AlphaSequence:
    """(a1, ..., a(p-2)) with a1 = 2+t and ai = 2a(i-1)+1; shared by the base 4/5 and sigma families."""
    return _recurrence_alphas(2 + t, decomposition.p - 2, lambda i, previous: 2 * previous + 1)


# --- Generators ---


def gen_binary_generic(k: int, t: int) -> FamilyMember:
    """
    Odd square with exactly k non-zero bits, for k >= 5 not of the form C(p, 2)+1.

    Args:
        k: Target digit count
        t: Family index, a1 = 3+t

    Returns:
        FamilyMember: y = 1 + sum of 2^ai, d = 2

    Raises:
        WrongFormError: If k is a boundary count
        FamilyVerificationError: If the member does not verify
    """
    _check_family_index(t)
    decomposition = _generic_decomposition(k, FamilyId.BINARY_GENERIC)
    alphas = binary_generic_alphas(decomposition, t)
    root = _power_sum(2, alphas.with_zero)
    params = FamilyParameters(family_index=t, alphas=alphas, decomposition=decomposition)
    return _verified_member(FamilyId.BINARY_GENERIC, 2, k, root, 2, params)


def gen_binary_special(k: int, t: int) -> FamilyMember:
    """
    Odd square with exactly k non-zero bits, for k = 7 or k = C(p, 2)+1 >= 11.

    Raises:
        WrongFormError: If k is not covered (k = 4 belongs to the classifier, not here)
        FamilyVerificationError: If the member does not verify
    """
    _check_family_index(t)
    decomposition = _boundary_decomposition(k, 7, FamilyId.BINARY_SPECIAL)
    alphas = binary_special_alphas(decomposition, t)
    root = _power_sum(2, alphas.with_zero)
    params = FamilyParameters(family_index=t, alphas=alphas, decomposition=decomposition)
    return _verified_member(FamilyId.BINARY_SPECIAL, 2, k, root, 2, params)


def gen_basex_generic(x: int, k: int, t: int) -> FamilyMember:
    """
    Square coprime with x >= 3 with exactly k non-zero base-x digits, for k >= 5 not of the form C(p, 2)+1.

    In base 3 a collision merges 3^(2a) with 2*3^(2a) into a carried single digit; the digit count still
    comes out at k, which the verification confirms.

    Raises:
        WrongFormError: If x < 3 or k is a boundary count
        FamilyVerificationError: If the member does not verify
    """
    check_base(x)
    _check_family_index(t)
    if x < 3:
        raise WrongFormError(f"{FamilyId.BASEX_GENERIC.value} needs x >= 3, got {x}")

    decomposition = _generic_decomposition(k, FamilyId.BASEX_GENERIC)
    alphas = basex_generic_alphas(decomposition, t)
    root = _power_sum(x, alphas.with_zero)
    params = FamilyParameters(family_index=t, alphas=alphas, decomposition=decomposition)
    return _verified_member(FamilyId.BASEX_GENERIC, x, k, root, 2, params)


def gen_base3_special(k: int, t: int) -> FamilyMember:
    """
    Square coprime with 3 with exactly k non-zero base-3 digits, for k = C(p, 2)+1 >= 7.

    Raises:
        WrongFormError: If k is not covered, including the open case k = 4
        FamilyVerificationError: If the member does not verify
    """
    _check_family_index(t)
    decomposition = _boundary_decomposition(k, 7, FamilyId.BASE3_SPECIAL)
    alphas = base3_special_alphas(decomposition, t)
    root = _power_sum(3, alphas.with_zero)
    params = FamilyParameters(family_index=t, alphas=alphas, decomposition=decomposition)
    return _verified_member(FamilyId.BASE3_SPECIAL, 3, k, root, 2, params)


def gen_base45_special(x: int, k: int, t: int) -> FamilyMember:
    """
    Square coprime with x in {4, 5} with exactly k non-zero digits, for k = C(p, 2)+1 >= 4.

    Base 4 builds y0 = 3*4^a(p-2) + 2*(sum of 4^ai for i <= p-3), which is even; the member is y = y0/2,
    whose square is odd and has the same non-zero digits shifted down one place.
    Base 5 uses y = 2*5^a(p-2) + 2*5^a(p-3) + (sum of 5^ai for i <= p-4).

    Raises:
        WrongFormError: If x is not 4 or 5, or k is not covered
        FamilyVerificationError: If the member does not verify
    """
    check_base(x)
    _check_family_index(t)
    if x not in (4, 5):
        raise WrongFormError(f"{FamilyId.BASE45_SPECIAL.value} needs x in {{4, 5}}, got {x}")

    decomposition = _boundary_decomposition(k, 4, FamilyId.BASE45_SPECIAL)
    alphas = boundary_alphas(decomposition, t)
    sequence = alphas.with_zero
    p = decomposition.p

    if x == 4:
        doubled_root = 3 * 4 ** sequence[p - 2] + 2 * _power_sum(4, sequence[: p - 2])
        root, normalization = doubled_root // 2, 2
    else:
        root = 2 * 5 ** sequence[p - 2] + 2 * 5 ** sequence[p - 3] + _power_sum(5, sequence[: p - 3])
        normalization = 1

    params = FamilyParameters(
        family_index=t, alphas=alphas, decomposition=decomposition, normalization=normalization
    )
    return _verified_member(FamilyId.BASE45_SPECIAL, x, k, root, 2, params)


def gen_basex_sigma(x: int, k: int, t: int) -> FamilyMember:
    """
    Square coprime with x >= 6 with exactly k non-zero digits, for k = C(p, 2)+1 >= 4.

    y = sigma*x^a(p-2) + x^a(p-3) + ... + x^a1 + 1 with sigma = ceil(sqrt(x+1)).

    Raises:
        WrongFormError: If x < 6 or k is not covered
        FamilyVerificationError: If the member does not verify
    """
    check_base(x)
    _check_family_index(t)
    if x < 6:
        raise WrongFormError(f"{FamilyId.BASEX_SIGMA.value} needs x >= 6, got {x}")

    decomposition = _boundary_decomposition(k, 4, FamilyId.BASEX_SIGMA)
    alphas = boundary_alphas(decomposition, t)
    sequence = alphas.with_zero
    sigma = sigma_for_base(x)
    root = sigma * x ** sequence[-1] + _power_sum(x, sequence[:-1])
    params = FamilyParameters(family_index=t, alphas=alphas, decomposition=decomposition, sigma=sigma)
    return _verified_member(FamilyId.BASEX_SIGMA, x, k, root, 2, params)


def gen_small_k(x: int, k: int, t: int) -> FamilyMember:
    """
    The small families y = x^a + 1 with a = 2+t.

    k = 3 uses the square (any x >= 2); k = 4 uses the cube (x >= 3). For x = 3 the cube carries into
    1 + 3^(a+1) + 3^(2a+1) + 3^(3a), which still has four non-zero digits.

    Raises:
        WrongFormError: If (x, k) is not covered, including the excluded pair (2, 4)
        FamilyVerificationError: If the member does not verify
    """
    check_base(x)
    _check_family_index(t)
    if k == 3:
        degree = 2
    elif k == 4 and x >= 3:
        degree = 3
    else:
        raise WrongFormError(f"{FamilyId.SMALL_K.value} does not cover x={x}, k={k}")

    exponent = 2 + t
    params = FamilyParameters(family_index=t, alphas=AlphaSequence(entries=(exponent,)))
    return _verified_member(FamilyId.SMALL_K, x, k, x**exponent + 1, degree, params)


# Alpha sequence builders by family, for callers that only need the exponents
ALPHA_BUILDERS: Dict[FamilyId, Callable[[DigitDecomposition, int], AlphaSequence]] = {
    FamilyId.BINARY_GENERIC: binary_generic_alphas,
    FamilyId.BINARY_SPECIAL: binary_special_alphas,
    FamilyId.BASEX_GENERIC: basex_generic_alphas,
    FamilyId.BASE3_SPECIAL: base3_special_alphas,
    FamilyId.BASE45_SPECIAL: boundary_alphas,
    FamilyId.BASEX_SIGMA: boundary_alphas,
}


def alpha_sequence(family_id: FamilyId, decomposition: DigitDecomposition, t: int) -> AlphaSequence:
    """
    Return the canonical alpha sequence a family uses for a decomposition and family index.

    Raises:
        WrongFormError: For the small-k family, whose single exponent does not come from a decomposition
    """
    if family_id not in ALPHA_BUILDERS:
        raise WrongFormError(f"{family_id.value} has no decomposition-driven alpha sequence")

    return ALPHA_BUILDERS[family_id](decomposition, t)
