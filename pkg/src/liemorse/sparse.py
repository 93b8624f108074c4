"""
Sparse exact matrices stored as a dict of columns.

Boundary matrices are built one column (one wedge) at a time, so columns are
the primary index: columns[c] maps row -> nonzero scalar.
"""

import logging
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

from liemorse.ring import CoefficientRing, Scalar

logger = logging.getLogger(__name__)


@dataclass
class SparseMatrix:
    """
    Sparse matrix with exact scalar entries.

    Attributes:
        rows: Number of rows
        cols: Number of columns
        columns: Column index -> {row index -> nonzero entry}
    """

    rows: int
    cols: int
    columns: dict[int, dict[int, Scalar]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for c, column in self.columns.items():
            if not 0 <= c < self.cols:
                raise IndexError(f"Column {c} out of range for {self.shape}")
            for r in column:
                if not 0 <= r < self.rows:
                    raise IndexError(f"Row {r} out of range for {self.shape}")
        self.columns = {c: column for c, column in self.columns.items() if column}

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    @classmethod
    def from_entries(
        cls,
        rows: int,
        cols: int,
        entries: Iterable[tuple[int, int, Scalar]],
        ring: CoefficientRing | None = None,
    ) -> "SparseMatrix":
        """Build from (row, col, value) triples, summing duplicates and dropping zeros."""
        columns: dict[int, dict[int, Scalar]] = defaultdict(dict)
        for r, c, v in entries:
            columns[c][r] = columns[c].get(r, 0) + v
        return cls(rows, cols, _cleaned(columns, ring))

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[Scalar]]) -> "SparseMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls.from_entries(
            rows, cols, ((r, c, v) for r, row in enumerate(dense) for c, v in enumerate(row) if v)
        )

    def get(self, r: int, c: int) -> Scalar:
        return self.columns.get(c, {}).get(r, 0)

    def column(self, c: int) -> dict[int, Scalar]:
        return self.columns.get(c, {})

    @property
    def nnz(self) -> int:
        return sum(len(column) for column in self.columns.values())

    def is_zero(self) -> bool:
        return not self.columns

    def entries(self) -> list[tuple[int, int, Scalar]]:
        """Nonzero entries as (row, col, value), sorted by row then column."""
        return sorted((r, c, v) for c, column in self.columns.items() for r, v in column.items())

    def to_rows(self) -> dict[int, dict[int, Scalar]]:
        """Row index -> {col -> value}."""
        rows: dict[int, dict[int, Scalar]] = defaultdict(dict)
        for c, column in self.columns.items():
            for r, v in column.items():
                rows[r][c] = v
        return dict(rows)

    def to_dense(self) -> list[list[Scalar]]:
        dense: list[list[Scalar]] = [[0] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries():
            dense[r][c] = v
        return dense

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, self.to_rows())

    def reduced(self, ring: CoefficientRing) -> "SparseMatrix":
        """Copy with entries normalized into the ring and zeros dropped."""
        return SparseMatrix(self.rows, self.cols, _cleaned(self.columns, ring))

    def matmul(self, other: "SparseMatrix", ring: CoefficientRing | None = None) -> "SparseMatrix":
        """Product self @ other."""
        if self.cols != other.rows:
            raise ValueError(f"Shape mismatch: {self.shape} @ {other.shape}")

        columns: dict[int, dict[int, Scalar]] = {}
        for c, other_column in other.columns.items():
            accumulated: dict[int, Scalar] = defaultdict(int)
            for k, b in other_column.items():
                for r, a in self.column(k).items():
                    accumulated[r] += a * b
            columns[c] = dict(accumulated)
        return SparseMatrix(self.rows, other.cols, _cleaned(columns, ring))

    def submatrix(self, keep_rows: Sequence[int], keep_cols: Sequence[int]) -> "SparseMatrix":
        """Restrict to the given rows and columns, renumbered in the given order."""
        row_position = {r: i for i, r in enumerate(keep_rows)}
        columns: dict[int, dict[int, Scalar]] = {}
        for j, c in enumerate(keep_cols):
            kept = {row_position[r]: v for r, v in self.column(c).items() if r in row_position}
            if kept:
                columns[j] = kept
        return SparseMatrix(len(keep_rows), len(keep_cols), columns)

    def to_dict(self) -> dict[str, Any]:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[r, c, str(v)] for r, c, v in self.entries()],
        }


def _cleaned(
    columns: dict[int, dict[int, Scalar]], ring: CoefficientRing | None
) -> dict[int, dict[int, Scalar]]:
    cleaned: dict[int, dict[int, Scalar]] = {}
    for c, column in columns.items():
        kept = {}
        for r, v in column.items():
            value = ring.normalize(v) if ring is not None else v
            if value:
                kept[r] = value
        if kept:
            cleaned[c] = kept
    return cleaned


__all__ = ["SparseMatrix"]
