"""
Search artifact module for the Sparse Power Oracle.

This module keeps the results of completed searches and the case matrix on disk. It handles:
- Writing hit lists to CSV, one directory per search, validated against a schema.
- Reloading hit lists so a finished search does not have to run again.
- Exporting the case matrix as a pivot table.
"""

import logging
from pathlib import Path
from typing import List, Sequence

import pandas as pd
import pandera.pandas as pa
from pandera.errors import SchemaError
from pandera.typing import DataFrame, Series

from src.models.case_classifier import CaseTableRow
from src.models.radix import PowerWitness, sparse_form
from src.models.sparse_search import SearchHit, SearchResult, SearchSpec

logger = logging.getLogger(__name__)

HITS_FILENAME = "hits.csv"
DECIMAL = r"^[0-9]+$"


class HitSchema(pa.DataFrameModel):
    """Hits as decimal strings, so values of any size survive the CSV round trip."""

    value: Series[str] = pa.Field(str_matches=DECIMAL)
    root: Series[str] = pa.Field(str_matches=DECIMAL)
    degree: Series[str] = pa.Field(str_matches=DECIMAL)
    sparse: Series[str]

    class Config:
        strict = True
        ordered = True
        coerce = True


class SearchArtifacts:
    """Handles the files written for completed searches."""

    def __init__(self, output_dir: Path):
        """
        Initialize the artifact store.

        Args:
            output_dir: Directory holding one subdirectory per search
        """
        self.output_dir = output_dir


    def get_search_directory(self, spec: SearchSpec) -> Path:
        """
        Directory of a search, named `<x>-<k>-<M>-<degree>`.

        Degree lists are joined with underscores; searches without the coprime restriction get a
        `-noncoprime` suffix.
        """
        name = f"{spec.base}-{spec.digits}-{spec.max_exponent}-{spec.degree_label.replace(',', '_')}"
        if not spec.coprime_only:
            name += "-noncoprime"
        return self.output_dir / name


    def hits_frame(self, hits: Sequence[SearchHit]) -> DataFrame[HitSchema]:
        """Build the validated hit table."""
        df = pd.DataFrame(
            [
                {
                    "value": str(hit.value),
                    "root": str(hit.witness.root),
                    "degree": str(hit.witness.degree),
                    "sparse": hit.sparse.render(),
                }
                for hit in hits
            ],
            columns=["value", "root", "degree", "sparse"],
        )
        return HitSchema.validate(df)


    def save_hits(self, result: SearchResult) -> Path:
        """
        Save the hits of a completed search to CSV.

        Args:
            result: A finished search

        Returns:
            Path: The written hits file
        """
        search_dir = self.get_search_directory(result.spec)
        search_dir.mkdir(exist_ok=True, parents=True)

        hits_path = search_dir / HITS_FILENAME
        self.hits_frame(result.hits).to_csv(hits_path, index=False)
        logger.info(f"Saved {len(result.hits)} hits to: {hits_path}")
        return hits_path


    def has_existing_hits(self, spec: SearchSpec) -> bool:
        """True if a non-empty hits file exists for the search."""
        hits_path = self.get_search_directory(spec) / HITS_FILENAME
        try:
            return hits_path.exists() and hits_path.stat().st_size > 0
        except (FileNotFoundError, OSError):
            logger.debug(f"File {hits_path} disappeared during existence check")
            return False


    def load_hits_from_csv(self, spec: SearchSpec) -> List[SearchHit]:
        """
        Load the hits of an earlier search.

        Args:
            spec: The search whose hits to load

        Returns:
            List[SearchHit]: The hits in file order

        Raises:
            FileNotFoundError: If the hits file doesn't exist
            ValueError: If the file fails the schema or a row is not a valid hit of the search
        """
        hits_path = self.get_search_directory(spec) / HITS_FILENAME
        if not hits_path.exists():
            raise FileNotFoundError(f"Hits CSV not found: {hits_path}")

        try:
            df = HitSchema.validate(pd.read_csv(hits_path, dtype=str, keep_default_na=False))
        except (SchemaError, pd.errors.ParserError) as e:
            raise ValueError(f"Error reading CSV file {hits_path}: {e}") from e

        hits = []
        for row in df.itertuples(index=False):
            value = int(row.value)
            witness = PowerWitness(root=int(row.root), degree=int(row.degree))
            form = sparse_form(value, spec.base)

            # Each row must still describe the value it claims
            if witness.value != value or form.render() != row.sparse:
                raise ValueError(f"Row for value {row.value} in {hits_path} is inconsistent")

            hits.append(SearchHit(value=value, witness=witness, sparse=form))

        logger.info(f"Loaded {len(hits)} hits from cached CSV {hits_path}")
        return hits


def case_table_frame(rows: Sequence[CaseTableRow], square_only: bool = False) -> pd.DataFrame:
    """Pivot the case matrix: one row per base x, one column per digit count k, labels as cells."""
    long_df = pd.DataFrame(
        [
            {
                "x": row.base,
                "k": row.digits,
                "label": (row.square_only if square_only else row.any_power).label,
            }
            for row in rows
        ]
    )
    return long_df.pivot(index="x", columns="k", values="label")


def save_case_table(rows: Sequence[CaseTableRow], path: Path) -> Path:
    """Write the any-power case matrix to CSV, with a second block for the square-only statuses."""
    path.parent.mkdir(exist_ok=True, parents=True)

    combined = pd.concat(
        {"any": case_table_frame(rows), "square": case_table_frame(rows, square_only=True)}, names=["power"]
    )
    combined.to_csv(path)
    logger.info(f"Saved case table with {len(rows)} cells to: {path}")
    return path
