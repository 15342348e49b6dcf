"""
Sparse Power Oracle command line.

This module is the entry point of the oracle, exposing as subcommands:
1. classify - what is known about a (base, digit count) pair
2. generate - members of the family that proves a pair infinite
3. verify - digit count, coprimality and perfect-power witness of a value
4. search - bounded brute-force search for sparse perfect powers
5. table - the case matrix over a range of bases and digit counts
6. expand - uncarried expansion analysis of a power sum

Records go to stdout as JSON lines, diagnostics to stderr. Exit codes: 0 success, 2 invalid input,
3 no family for the requested pair, 4 internal verification failure.

Usage: python -m src.models.sparse_power_oracle <command> [options]
"""

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from src.models.case_classifier import (
    CaseStatusError,
    InvalidCaseError,
    case_table,
    classify_case,
    first_members,
)
from src.models.expansion import (
    AlphaSequence,
    FamilyError,
    binary_expansion_terms,
    power_expansion_terms,
    predicted_collisions,
    square_expansion_terms,
)
from src.models.families import FamilyVerificationError
from src.models.radix import RadixError, as_perfect_power, count_nonzero, sparse_form, to_expansion
from src.models.search_artifacts import SearchArtifacts, save_case_table
from src.models.sparse_search import (
    InvalidPositionTokenError,
    InvalidSearchSpecError,
    SearchResult,
    SearchSpec,
    SparseSearch,
    candidate_count,
)
from src.utils.configuration import ConfigurationError, load_config
from src.utils.input_validator import InputValidationError, parse_alpha_list, parse_decimal, parse_degree_filter
from src.utils.records import (
    Record,
    classification_record,
    error_status_record,
    expansion_record,
    hit_record,
    member_record,
    summary_record,
    table_cell_record,
    to_json_line,
    verification_record,
)
from src.utils.search_checkpoint import SearchCheckpoint

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_NOT_GENERATABLE = 3
EXIT_VERIFICATION_FAILED = 4


def emit(record: Record) -> None:
    """Write one record to stdout."""
    print(to_json_line(record), file=sys.stdout, flush=True)


def configure_logging(level: str) -> None:
    """Send all diagnostics to stderr at the given level; the handler is installed once."""
    logging.basicConfig(format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(getattr(logging, level, logging.INFO))


# --- Subcommands ---


def cmd_classify(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    status = classify_case(args.base, args.digits, args.square_only)
    emit(classification_record(args.base, args.digits, args.square_only, status))
    return EXIT_OK


def cmd_generate(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    """Emit --count members from --start on, each re-verified independently of its generator."""
    if args.count < 1 or args.start < 0:
        raise InputValidationError(f"--count must be >= 1 and --start >= 0, got {args.count}, {args.start}")

    last_index = args.start + args.count - 1
    if last_index > config["MAX_FAMILY_INDEX"]:
        raise InputValidationError(
            f"Family index {last_index} exceeds MAX_FAMILY_INDEX={config['MAX_FAMILY_INDEX']}"
        )

    for member in first_members(args.base, args.digits, args.count, args.start, args.square_only):
        coprime = math.gcd(member.value, args.base) == 1
        if count_nonzero(member.value, args.base) != args.digits or not coprime:
            raise FamilyVerificationError(
                f"Member t={member.params.family_index} of {member.family_id.value} failed re-verification"
            )
        emit(member_record(member, verified=True))

    logger.info(f"Generated {args.count} member(s) for x={args.base}, k={args.digits}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    value = parse_decimal(args.value, "--value")
    expansion = to_expansion(value, args.base)
    witness = as_perfect_power(value) if value >= 2 else None
    emit(verification_record(value, expansion, sparse_form(value, args.base), math.gcd(value, args.base), witness))
    return EXIT_OK


def _cached_result(spec: SearchSpec, artifacts: SearchArtifacts) -> Optional[SearchResult]:
    """A full-run result rebuilt from the hits file of an earlier search, or None if the file is unusable."""
    try:
        hits = artifacts.load_hits_from_csv(spec)
    except (FileNotFoundError, ValueError) as e:
        logger.warning(f"Ignoring cached hits: {e}")
        return None

    return SearchResult(spec=spec, hits=hits, candidates=candidate_count(spec))


def cmd_search(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    """Run a bounded search and emit one hit record per solution, then a summary record."""
    spec = SearchSpec(
        base=args.base,
        digits=args.digits,
        max_exponent=args.max_exponent,
        degrees=parse_degree_filter(args.degree),
        coprime_only=args.coprime,
    )
    threads = args.threads if args.threads is not None else config["THREADS"]
    if threads < 1:
        raise InputValidationError(f"--threads must be >= 1, got {threads}")

    pruning = config["RESIDUE_PRUNING"] and not args.no_pruning
    artifacts = SearchArtifacts(Path(args.output_dir or config["OUTPUT_DIR"]))
    checkpoint = SearchCheckpoint(Path(args.checkpoint_file)) if args.checkpoint_file else None

    # Resume from an explicit token first, then from a stored checkpoint
    resume_token = args.resume
    if resume_token is None and checkpoint is not None:
        resume_token = checkpoint.load()

    result: Optional[SearchResult] = None
    if args.use_cached and resume_token is None and artifacts.has_existing_hits(spec):
        logger.info(f"Using cached hits from {artifacts.get_search_directory(spec)}")
        result = _cached_result(spec, artifacts)

    fresh = result is None
    if result is None:
        search = SparseSearch(spec, pruning=pruning, checkpoint_interval=config["CHECKPOINT_INTERVAL"])
        result = search.run(threads=threads, resume_token=resume_token, checkpoint=checkpoint)

        if checkpoint is not None:
            checkpoint.reset()

    for hit in result.hits:
        emit(hit_record(hit))
    emit(summary_record(result))

    # A resumed run only holds the hits after its token
    if resume_token is not None:
        logger.warning("Resumed search: hits cover only the tuples after the resume token, not saved")
    elif fresh and not result.infeasible:
        try:
            artifacts.save_hits(result)
        except OSError as e:
            logger.error(f"Could not save hits to {artifacts.get_search_directory(spec)}: {e}")

    return EXIT_OK


def cmd_table(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    rows = case_table(args.max_base, args.max_digits)
    for row in rows:
        emit(table_cell_record(row))

    if args.csv:
        save_case_table(rows, Path(args.csv))
    return EXIT_OK


def cmd_expand(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    """Analyse the uncarried expansion of (1 + x^a1 + ... )^degree."""
    alphas = AlphaSequence(entries=parse_alpha_list(args.alphas))

    if args.degree == 2:
        binary = args.base == 2
        terms = binary_expansion_terms(alphas) if binary else square_expansion_terms(alphas, args.base)
        predicted: Optional[int] = predicted_collisions(alphas, binary=binary)
    else:
        terms = power_expansion_terms(alphas, args.degree, args.base)
        predicted = None

    nonzero = count_nonzero(terms.evaluate(args.base), args.base)
    emit(expansion_record(args.base, args.degree, alphas.entries, terms, predicted, nonzero))
    return EXIT_OK


# --- Argument Parsing ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparse-power-oracle",
        description="Perfect powers with a prescribed number of non-zero digits",
    )
    parser.add_argument("--config", type=str, default=None, help="Path to config.toml")
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable DEBUG-level logging to stderr")
    subparsers = parser.add_subparsers(dest="command", required=True)


    def add_pair(subparser: argparse.ArgumentParser) -> None:
        subparser.add_argument("--base", type=int, required=True, help="Base x >= 2")
        subparser.add_argument("--digits", type=int, required=True, help="Number k of non-zero digits")


    classify_parser = subparsers.add_parser("classify", help="Classify a (base, digits) pair")
    add_pair(classify_parser)
    classify_parser.add_argument("--square-only", action="store_true", help="Restrict to perfect squares")
    classify_parser.set_defaults(handler=cmd_classify)

    generate_parser = subparsers.add_parser("generate", help="Generate family members")
    add_pair(generate_parser)
    generate_parser.add_argument("--count", type=int, default=1, help="Number of members")
    generate_parser.add_argument("--start", type=int, default=0, help="First family index t")
    generate_parser.add_argument("--square-only", action="store_true", help="Restrict to perfect squares")
    generate_parser.set_defaults(handler=cmd_generate)

    verify_parser = subparsers.add_parser("verify", help="Inspect a value in a base")
    verify_parser.add_argument("--base", type=int, required=True, help="Base x >= 2")
    verify_parser.add_argument("--value", type=str, required=True, help="Decimal value of any size")
    verify_parser.set_defaults(handler=cmd_verify)

    search_parser = subparsers.add_parser("search", help="Bounded brute-force search")
    add_pair(search_parser)
    search_parser.add_argument("--max-exponent", type=int, required=True, help="Largest exponent M")
    search_parser.add_argument("--degree", type=str, default="any", help="`any` or comma-separated degrees")
    search_parser.add_argument(
        "--coprime", action=argparse.BooleanOptionalAction, default=True, help="Require a non-zero last digit"
    )
    search_parser.add_argument("--resume", type=str, default=None, help="Position token to resume after")
    search_parser.add_argument("--threads", type=int, default=None, help="Worker processes")
    search_parser.add_argument("--no-pruning", action="store_true", help="Disable residue pruning")
    search_parser.add_argument("--output-dir", type=str, default=None, help="Directory for hit artifacts")
    search_parser.add_argument("--checkpoint-file", type=str, default=None, help="File holding the position")
    search_parser.add_argument("--use-cached", action="store_true", help="Reuse hits of an earlier run")
    search_parser.set_defaults(handler=cmd_search)

    table_parser = subparsers.add_parser("table", help="Case matrix")
    table_parser.add_argument("--max-base", type=int, required=True, help="Largest base")
    table_parser.add_argument("--max-digits", type=int, required=True, help="Largest digit count")
    table_parser.add_argument("--csv", type=str, default=None, help="Also write the matrix as CSV")
    table_parser.set_defaults(handler=cmd_table)

    expand_parser = subparsers.add_parser("expand", help="Uncarried expansion analysis")
    expand_parser.add_argument("--alphas", type=str, required=True, help="Comma-separated a1 < a2 < ...")
    expand_parser.add_argument("--base", type=int, default=2, help="Base x >= 2")
    expand_parser.add_argument("--degree", type=int, default=2, help="Power d >= 2")
    expand_parser.set_defaults(handler=cmd_expand)

    return parser


# --- Entry Point ---


INVALID_INPUT_ERRORS = (
    InputValidationError,
    RadixError,
    InvalidCaseError,
    InvalidSearchSpecError,
    InvalidPositionTokenError,
    FamilyError,
    ConfigurationError,
)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse the command line, run one subcommand and return its exit code.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:]

    Returns:
        int: 0 success, 2 invalid input, 3 no family for the pair, 4 verification failure
    """
    # Values of any size are rendered in full
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID_INPUT

    configure_logging("DEBUG" if args.verbose else "INFO")
    handler: Callable[[argparse.Namespace, Dict[str, Any]], int] = args.handler

    try:
        config = load_config(args.config)
        if not args.verbose:
            configure_logging(config["LOG_LEVEL"])
        return handler(args, config)

    except CaseStatusError as e:
        emit(error_status_record(e.x, e.k, getattr(args, "square_only", False), e.status, str(e)))
        logger.error(str(e))
        return EXIT_NOT_GENERATABLE

    except FamilyVerificationError as e:
        logger.critical(f"Verification failed: {e}", exc_info=True)
        return EXIT_VERIFICATION_FAILED

    except INVALID_INPUT_ERRORS as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_INVALID_INPUT

    except Exception as e:
        logger.critical(f"{args.command} failed: {e}", exc_info=True)
        return EXIT_VERIFICATION_FAILED


if __name__ == "__main__":
    sys.exit(main())
