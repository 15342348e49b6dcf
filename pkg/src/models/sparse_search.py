"""
Brute-force search for sparse perfect powers.

The search enumerates every integer with exactly k non-zero base-x digits whose exponents are bounded by M,
and keeps the ones that are perfect powers. It is the independent ground truth for the families and the
desk-scale check of the known finiteness results.

Enumeration order is lexicographic by exponent tuple, then by coefficient tuple. Work is split into blocks
by the first free exponent (the smallest exponent that is not fixed at 0), blocks are scanned by a
multiprocessing pool and merged by value, so the output does not depend on the number of workers.
"""

import logging
import math
import multiprocessing
import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from sympy import isprime, primefactors, primerange

from src.models.radix import PowerWitness, SparseForm, as_perfect_power, sparse_form
from src.utils.search_checkpoint import SearchCheckpoint

logger = logging.getLogger(__name__)

# Number of prime moduli tried per prime degree by the residue sieve
MODULI_PER_DEGREE = 3

Exponents = Tuple[int, ...]


class InvalidSearchSpecError(ValueError):
    """Raised when a search specification has a parameter outside its domain."""

    pass


class InvalidPositionTokenError(ValueError):
    """Raised when a resume token is malformed or does not belong to the search it is used with."""

    pass


@dataclass(frozen=True)
class SearchSpec:
    """
    Parameters of a bounded search.

    coprime_only requires a non-zero constant digit c0 (exponent 0 is always used), which for prime bases
    is the same as gcd(value, x) = 1. degrees=None means any degree d >= 2.
    """

    base: int
    digits: int
    max_exponent: int
    degrees: Optional[FrozenSet[int]] = None
    coprime_only: bool = True

    def __post_init__(self) -> None:
        for name, value, minimum in (
            ("base", self.base, 2),
            ("digits", self.digits, 1),
            ("max_exponent", self.max_exponent, 0),
        ):
            if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
                raise InvalidSearchSpecError(f"{name} must be an integer >= {minimum}, got {value!r}")

        if self.degrees is not None:
            degrees = frozenset(self.degrees)
            if not degrees or any(isinstance(d, bool) or not isinstance(d, int) or d < 2 for d in degrees):
                raise InvalidSearchSpecError(f"Degree filter must be non-empty integers >= 2, got {degrees}")
            object.__setattr__(self, "degrees", degrees)


    @property
    def is_feasible(self) -> bool:
        """k distinct exponents must fit into [0, M]."""
        return self.digits <= self.max_exponent + 1


    @property
    def free_digits(self) -> int:
        """Number of exponents the enumeration chooses; c0 sits at the fixed exponent 0 when coprime_only."""
        return self.digits - 1 if self.coprime_only else self.digits


    @property
    def degree_label(self) -> str:
        return "any" if self.degrees is None else ",".join(str(d) for d in sorted(self.degrees))


@dataclass(frozen=True)
class SearchHit:
    """A candidate that is a perfect power; witness is the maximal-degree one."""

    value: int
    witness: PowerWitness
    sparse: SparseForm


@dataclass
class SearchResult:
    """Outcome of a search run: hits ascending by value plus bookkeeping for summaries and resumption."""

    spec: SearchSpec
    hits: List[SearchHit] = field(default_factory=list)
    candidates: int = 0
    tuples: int = 0
    last_position: Optional[Tuple[int, ...]] = None
    elapsed_seconds: float = 0.0

    @property
    def infeasible(self) -> bool:
        return not self.spec.is_feasible


    @property
    def last_token(self) -> Optional[str]:
        return None if self.last_position is None else render_position_token(self.last_position)


@dataclass(frozen=True)
class BlockResult:
    """Output of one scanned block, as returned by a worker."""

    lead: Optional[int]
    hits: Tuple[SearchHit, ...]
    candidates: int
    tuples: int
    last_position: Optional[Tuple[int, ...]]


# --- Counting and Position Tokens ---


def candidate_count(spec: SearchSpec) -> int:
    """
    Closed-form number of candidates of a spec.

    Returns:
        int: C(M, k-1)*(x-1)^k when coprime_only, C(M+1, k)*(x-1)^k otherwise, 0 when infeasible
    """
    if not spec.is_feasible:
        return 0

    positions = math.comb(spec.max_exponent, spec.digits - 1) if spec.coprime_only else math.comb(
        spec.max_exponent + 1, spec.digits
    )
    return positions * (spec.base - 1) ** spec.digits


def render_position_token(exponents: Sequence[int]) -> str:
    """Render an exponent tuple as its decimal comma-separated token, e.g. `0,3,5`."""
    return ",".join(str(exponent) for exponent in exponents)


def parse_position_token(token: str, spec: SearchSpec) -> Tuple[int, ...]:
    """
    Parse a resume token against the search it belongs to.

    Args:
        token: Decimal comma-separated exponent tuple, the last tuple fully processed
        spec: The search the token resumes

    Returns:
        Tuple[int, ...]: The exponent tuple

    Raises:
        InvalidPositionTokenError: If the token is malformed or is not a tuple of this search
    """
    parts = [part.strip() for part in token.split(",")]
    if not all(part.isdigit() for part in parts):
        raise InvalidPositionTokenError(f"Position token must be comma-separated decimal exponents, got {token!r}")

    exponents = tuple(int(part) for part in parts)
    if len(exponents) != spec.digits:
        raise InvalidPositionTokenError(
            f"Position token {token!r} has {len(exponents)} exponents, expected {spec.digits}"
        )

    if any(a >= b for a, b in zip(exponents, exponents[1:])) or exponents[-1] > spec.max_exponent:
        raise InvalidPositionTokenError(
            f"Position token {token!r} is not strictly increasing within [0, {spec.max_exponent}]"
        )

    if spec.coprime_only and exponents[0] != 0:
        raise InvalidPositionTokenError(f"Position token {token!r} must start at exponent 0 for a coprime search")

    return exponents


# --- Enumeration ---


def _block_leads(spec: SearchSpec) -> List[Optional[int]]:
    """Values of the first free exponent, one block each; a spec without free exponents has one block."""
    if not spec.is_feasible:
        return []
    if spec.free_digits == 0:
        return [None]

    lowest = 1 if spec.coprime_only else 0
    return list(range(lowest, spec.max_exponent - spec.free_digits + 2))


def _tuples_in_block(
    spec: SearchSpec, lead: Optional[int], resume_after: Optional[Tuple[int, ...]] = None
) -> Iterator[Tuple[int, ...]]:
    """Exponent tuples of one block in lexicographic order, skipping those not after resume_after."""
    fixed: Tuple[int, ...] = (0,) if spec.coprime_only else ()

    if lead is None:
        tuples: Iterable[Tuple[int, ...]] = [fixed]
    else:
        tuples = (
            fixed + (lead,) + rest
            for rest in combinations(range(lead + 1, spec.max_exponent + 1), spec.free_digits - 1)
        )

    for exponents in tuples:
        if resume_after is not None and exponents <= resume_after:
            continue
        yield exponents


def _values_for(spec: SearchSpec, exponents: Tuple[int, ...]) -> Iterator[Tuple[int, Tuple[int, ...]]]:
    """(value, coefficients) for every coefficient tuple in lexicographic order."""
    powers = [spec.base**exponent for exponent in exponents]
    for coefficients in product(range(1, spec.base), repeat=len(exponents)):
        yield sum(c * power for c, power in zip(coefficients, powers)), coefficients


class SparseEnumerator:
    """
    Stream of the candidates of a spec.

    Iterating yields every value exactly once. position holds the last fully processed exponent tuple, which
    can be rendered as a resume token. An infeasible spec yields nothing and reports infeasible.
    """

    def __init__(self, spec: SearchSpec, resume_after: Optional[Tuple[int, ...]] = None):
        self.spec = spec
        self.resume_after = resume_after
        self.position = resume_after

        if self.infeasible:
            logger.warning(
                f"Search x={spec.base}, k={spec.digits}, M={spec.max_exponent} is infeasible: "
                f"{spec.digits} distinct exponents do not fit into [0, {spec.max_exponent}]"
            )


    @property
    def infeasible(self) -> bool:
        return not self.spec.is_feasible


    def blocks(self) -> List[Optional[int]]:
        """Block leads still to be scanned after resume_after."""
        leads = _block_leads(self.spec)
        if self.resume_after is None or leads == [None]:
            return leads

        # Blocks entirely before the token are done
        resumed_lead = self.resume_after[1 if self.spec.coprime_only else 0]
        return [lead for lead in leads if lead is not None and lead >= resumed_lead]


    def iter_block(self, lead: Optional[int]) -> Iterator[Tuple[Exponents, Iterator[Tuple[int, Exponents]]]]:
        """Yield (exponents, values) pairs of one block."""
        for exponents in _tuples_in_block(self.spec, lead, self.resume_after):
            yield exponents, _values_for(self.spec, exponents)


    def __iter__(self) -> Iterator[int]:
        for lead in self.blocks():
            for exponents, values in self.iter_block(lead):
                for value, _ in values:
                    yield value
                self.position = exponents


def enumerate_sparse(spec: SearchSpec, resume_after: Optional[Tuple[int, ...]] = None) -> SparseEnumerator:
    """Stream the candidates of a spec in deterministic order; see SparseEnumerator."""
    return SparseEnumerator(spec, resume_after)


# --- Perfect-Power Filtering ---


def _residue_moduli(prime: int, count: int) -> List[int]:
    """The first primes m = j*prime + 1; d-th power residues only thin out modulo m with d | m-1."""
    moduli: List[int] = []
    multiplier = 1
    while len(moduli) < count:
        candidate = multiplier * prime + 1
        if isprime(candidate):
            moduli.append(candidate)
        multiplier += 1

    return moduli


class ResidueSieve:
    """
    Excludes prime degrees by power residues.

    For each prime q up to max_degree a few prime moduli m = 1 (mod q) are chosen and the q-th power residues
    modulo m are precomputed. A q-th power is a q-th power residue modulo every m, so a value whose residue
    falls outside the set cannot be a q-th power.
    """

    def __init__(self, max_degree: int, moduli_per_degree: int = MODULI_PER_DEGREE):
        self.max_degree = max_degree
        self._residues = {
            prime: [
                (modulus, frozenset(pow(r, prime, modulus) for r in range(modulus)))
                for modulus in _residue_moduli(prime, moduli_per_degree)
            ]
            for prime in primerange(2, max_degree + 1)
        }
        logger.debug(f"Residue sieve covers {len(self._residues)} prime degrees up to {max_degree}")


    def admissible_degrees(self, n: int) -> List[int]:
        """
        Prime degrees q <= log2(n) for which n may still be a q-th power.

        Primes above max_degree are never excluded.
        """
        limit = n.bit_length()
        admissible = [
            prime
            for prime, tests in self._residues.items()
            if prime <= limit and all(n % modulus in residues for modulus, residues in tests)
        ]
        if limit > self.max_degree:
            admissible.extend(int(prime) for prime in primerange(self.max_degree + 1, limit + 1))

        return admissible


@lru_cache(maxsize=8)
def sieve_for(max_degree: int) -> ResidueSieve:
    """Shared sieve per degree bound; built once per process."""
    return ResidueSieve(max_degree)


def _max_bit_length(spec: SearchSpec) -> int:
    """Bit length of x^(M+1), an upper bound for every candidate."""
    return (spec.base ** (spec.max_exponent + 1)).bit_length()


def _power_witness(value: int, spec: SearchSpec, sieve: Optional[ResidueSieve]) -> Optional[PowerWitness]:
    """Maximal witness of value if it is a perfect power matching the degree filter."""
    if value < 2:
        return None

    primes = None if sieve is None else sieve.admissible_degrees(value)

    # Every prime factor of some wanted degree must survive the sieve
    if spec.degrees is not None and primes is not None:
        surviving = set(primes)
        if not any(set(primefactors(degree)) <= surviving for degree in spec.degrees):
            return None

    witness = as_perfect_power(value, primes)
    if witness is None:
        return None

    # A value matches degree d when d divides its maximal degree
    if spec.degrees is not None and not any(witness.degree % degree == 0 for degree in spec.degrees):
        return None

    return witness


def inspect_candidate(value: int, spec: SearchSpec, sieve: Optional[ResidueSieve] = None) -> Optional[SearchHit]:
    """
    Decide whether a single value is a hit of the spec, without enumerating.

    Args:
        value: Non-negative integer
        spec: The search whose predicate is applied
        sieve: Optional residue sieve for pruning

    Returns:
        Optional[SearchHit]: The hit when value has exactly k non-zero digits with exponents <= M, a non-zero
            constant digit when coprime_only, and is a perfect power matching the degree filter
    """
    if value < 1:
        return None

    form = sparse_form(value, spec.base)
    if len(form) != spec.digits or form.max_exponent > spec.max_exponent:
        return None
    if spec.coprime_only and form.exponents[0] != 0:
        return None

    witness = _power_witness(value, spec, sieve)
    return None if witness is None else SearchHit(value=value, witness=witness, sparse=form)


# --- Search ---


def _scan_block(
    task: Tuple[SearchSpec, Optional[int], Optional[Tuple[int, ...]], bool],
) -> BlockResult:
    """Worker: scan one block and return its hits in enumeration order."""
    spec, lead, resume_after, pruning = task
    sieve = sieve_for(_max_bit_length(spec)) if pruning else None

    hits: List[SearchHit] = []
    candidates = tuples = 0
    last_position: Optional[Tuple[int, ...]] = None

    for exponents in _tuples_in_block(spec, lead, resume_after):
        for value, coefficients in _values_for(spec, exponents):
            candidates += 1
            witness = _power_witness(value, spec, sieve)
            if witness is not None:
                form = SparseForm(base=spec.base, terms=tuple(zip(exponents, coefficients)))
                hits.append(SearchHit(value=value, witness=witness, sparse=form))

        tuples += 1
        last_position = exponents

    return BlockResult(
        lead=lead, hits=tuple(hits), candidates=candidates, tuples=tuples, last_position=last_position
    )


class SparseSearch:
    """
    Runs a bounded search, optionally in parallel and resumable.

    Blocks are handed to a process pool in lead order and consumed in the same order, so a checkpoint token
    always names a tuple before which everything has been scanned.
    """

    def __init__(self, spec: SearchSpec, pruning: bool = True, checkpoint_interval: int = 10000):
        """
        Args:
            spec: What to search
            pruning: Use the residue sieve before root extraction; results are identical either way
            checkpoint_interval: Exponent tuples between checkpoint writes (written at block boundaries)
        """
        self.spec = spec
        self.pruning = pruning
        self.checkpoint_interval = checkpoint_interval


    def run(
        self,
        threads: int = 1,
        resume_token: Optional[str] = None,
        checkpoint: Optional[SearchCheckpoint] = None,
    ) -> SearchResult:
        """
        Scan every candidate after the resume token and collect the perfect powers.

        Args:
            threads: Worker processes; 1 scans in-process
            resume_token: Last tuple processed by an earlier run; only strictly later tuples are scanned
            checkpoint: Receives the latest token every checkpoint_interval tuples

        Returns:
            SearchResult: Hits sorted ascending by value, candidate and tuple counts, last position

        Raises:
            InvalidPositionTokenError: If the resume token does not belong to this search
        """
        spec = self.spec
        resume_after = None if resume_token is None else parse_position_token(resume_token, spec)
        enumerator = SparseEnumerator(spec, resume_after)
        result = SearchResult(spec=spec, last_position=resume_after)

        if enumerator.infeasible:
            return result

        tasks = [(spec, lead, resume_after, self.pruning) for lead in enumerator.blocks()]
        workers = max(1, min(threads, len(tasks)))
        logger.info(
            f"Searching x={spec.base}, k={spec.digits}, M={spec.max_exponent}, degrees={spec.degree_label}: "
            f"{candidate_count(spec)} candidates in {len(tasks)} blocks, {workers} worker(s)"
        )

        started = time.perf_counter()

        # Consume block results in lead order regardless of which worker produced them
        if workers == 1:
            block_results: Iterable[BlockResult] = map(_scan_block, tasks)
            hits = self._collect(block_results, result, checkpoint)
        else:
            with multiprocessing.Pool(processes=workers) as pool:
                hits = self._collect(pool.imap(_scan_block, tasks), result, checkpoint)

        result.hits = sorted(hits, key=lambda hit: hit.value)
        result.elapsed_seconds = time.perf_counter() - started
        logger.info(
            f"Search finished: {result.candidates} candidates, {len(result.hits)} hits "
            f"in {result.elapsed_seconds:.2f}s"
        )
        return result


    def _collect(
        self, block_results: Iterable[BlockResult], result: SearchResult, checkpoint: Optional[SearchCheckpoint]
    ) -> List[SearchHit]:
        """Fold block results into the run totals, writing checkpoints as the interval is reached."""
        hits: List[SearchHit] = []
        since_checkpoint = 0

        for block in block_results:
            hits.extend(block.hits)
            result.candidates += block.candidates
            result.tuples += block.tuples
            if block.last_position is not None:
                result.last_position = block.last_position

            since_checkpoint += block.tuples
            due = since_checkpoint >= self.checkpoint_interval
            if checkpoint is not None and result.last_position is not None and due:
                checkpoint.record(render_position_token(result.last_position))
                since_checkpoint = 0

            logger.debug(f"Block lead={block.lead}: {block.candidates} candidates, {len(block.hits)} hits")

        return hits


def find_sparse_powers(spec: SearchSpec, pruning: bool = True, threads: int = 1) -> List[SearchHit]:
    """
    Return every candidate of the spec that is a perfect power matching the degree filter.

    Args:
        spec: What to search
        pruning: Use the residue sieve; the result is the same either way
        threads: Worker processes; the result is the same for any value

    Returns:
        List[SearchHit]: Hits sorted ascending by value, without duplicates
    """
    return SparseSearch(spec, pruning=pruning).run(threads=threads).hits
