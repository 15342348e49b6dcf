"""
Output records for the Sparse Power Oracle command line.

Every record is a flat mapping with a fixed key order per kind, written as one JSON line. Integers are
rendered as decimal strings so values of any size round-trip exactly; booleans stay JSON booleans and absent
values are null.
"""

import json
import logging
from typing import Any, Dict, Optional, Sequence

from src.models.case_classifier import CaseStatus, CaseTableRow
from src.models.expansion import TermMultiset
from src.models.families import FamilyMember
from src.models.radix import BaseExpansion, PowerWitness, SparseForm, power_divisors
from src.models.sparse_search import SearchHit, SearchResult

logger = logging.getLogger(__name__)

Record = Dict[str, Any]

# Attached to search summaries; a bounded search never proves finiteness
BOUNDED_SEARCH_NOTE = "exhaustive up to max_exponent only: evidence, not proof"


def _dec(value: Optional[int]) -> Optional[str]:
    return None if value is None else str(value)


def _status_fields(status: CaseStatus) -> Record:
    return {
        "status": status.kind.value,
        "label": status.label,
        "citation": status.citation,
        "family": None if status.family_id is None else status.family_id.value,
        "degree": _dec(status.degree),
        "reason": status.reason,
    }


def classification_record(x: int, k: int, square_only: bool, status: CaseStatus) -> Record:
    return {
        "kind": "classification",
        "base": _dec(x),
        "digits": _dec(k),
        "square_only": square_only,
        **_status_fields(status),
    }


def error_status_record(x: int, k: int, square_only: bool, status: CaseStatus, message: str) -> Record:
    """Record printed when a member is requested for a pair without a family."""
    return {
        "kind": "error-status",
        "base": _dec(x),
        "digits": _dec(k),
        "square_only": square_only,
        **_status_fields(status),
        "message": message,
    }


def member_record(member: FamilyMember, verified: bool) -> Record:
    return {
        "kind": "member",
        "family": member.family_id.value,
        "base": _dec(member.base),
        "digits": _dec(member.target_k),
        "t": _dec(member.params.family_index),
        "y": _dec(member.root),
        "d": _dec(member.degree),
        "value": _dec(member.value),
        "sparse": member.sparse.render(),
        "alphas": [_dec(alpha) for alpha in member.params.alphas.entries],
        "max_exponent": _dec(member.max_exponent),
        "verified": verified,
    }


def verification_record(
    value: int,
    expansion: BaseExpansion,
    sparse: SparseForm,
    gcd: int,
    witness: Optional[PowerWitness],
) -> Record:
    """Inspection of one value; power is the smallest-degree representation, max_power the maximal witness."""
    representations = [] if witness is None else power_divisors(witness)
    return {
        "kind": "verification",
        "base": _dec(expansion.base),
        "value": _dec(value),
        "nonzero": _dec(expansion.nonzero_count),
        "digit_list": [_dec(digit) for digit in expansion.digits],
        "sparse": sparse.render(),
        "gcd": _dec(gcd),
        "coprime": gcd == 1,
        "power": None if witness is None else representations[0].render(),
        "max_power": None if witness is None else witness.render(),
        "powers": [representation.render() for representation in representations],
    }


def hit_record(hit: SearchHit) -> Record:
    return {
        "kind": "hit",
        "base": _dec(hit.sparse.base),
        "digits": _dec(len(hit.sparse)),
        "value": _dec(hit.value),
        "y": _dec(hit.witness.root),
        "d": _dec(hit.witness.degree),
        "power": hit.witness.render(),
        "sparse": hit.sparse.render(),
    }


def summary_record(result: SearchResult) -> Record:
    spec = result.spec
    return {
        "kind": "summary",
        "base": _dec(spec.base),
        "digits": _dec(spec.digits),
        "max_exponent": _dec(spec.max_exponent),
        "degree": spec.degree_label,
        "coprime": spec.coprime_only,
        "candidates": _dec(result.candidates),
        "hits": _dec(len(result.hits)),
        "elapsed": f"{result.elapsed_seconds:.3f}",
        "last_position": result.last_token,
        "infeasible": result.infeasible,
        "note": BOUNDED_SEARCH_NOTE,
    }


def table_cell_record(row: CaseTableRow) -> Record:
    return {
        "kind": "table-cell",
        "base": _dec(row.base),
        "digits": _dec(row.digits),
        "status": row.any_power.kind.value,
        "label": row.any_power.label,
        "family": None if row.any_power.family_id is None else row.any_power.family_id.value,
        "degree": _dec(row.any_power.degree),
        "citation": row.any_power.citation,
        "square_status": row.square_only.kind.value,
        "square_label": row.square_only.label,
    }


def expansion_record(
    base: int,
    degree: int,
    alphas: Sequence[int],
    terms: TermMultiset,
    predicted: Optional[int],
    nonzero: int,
) -> Record:
    return {
        "kind": "expansion",
        "base": _dec(base),
        "degree": _dec(degree),
        "alphas": [_dec(alpha) for alpha in alphas],
        "terms": _dec(len(terms)),
        "distinct": _dec(terms.distinct_exponents),
        "collisions": _dec(terms.collisions),
        "predicted": _dec(predicted),
        "value": _dec(terms.evaluate(base)),
        "nonzero": _dec(nonzero),
    }


def to_json_line(record: Record) -> str:
    """Serialize a record as one JSON line, keeping its key order."""
    return json.dumps(record, ensure_ascii=False)
