"""
Algebraic Morse theory on chain complexes.

A Morse matching pairs a wedge u in degree k with a wedge l in degree k-1
such that the boundary entry d_k[l, u] is a unit, no wedge is used twice and
the zig-zag graph (boundary edges downward, matched edges reversed) has no
directed cycles. The complex then reduces to its unmatched (critical) wedges.

Example usage:
    from liemorse.chain import build_ce_complex
    from liemorse.lie import sol
    from liemorse.morse import normalization_matching, normalization_reduce
    from liemorse.ring import INTEGERS

    complex_ = build_ce_complex(sol(3), INTEGERS)
    matching = normalization_matching(complex_)
    reduced = normalization_reduce(complex_)
    reduced.dimensions()
"""

import logging
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import networkx as nx

from liemorse.chain import (
    Cell,
    ChainComplex,
    UnsupportedBasis,
    ce_boundary,
    matrix_weights,
    support,
    wedge_from_indices,
    wedge_indices,
)
from liemorse.lie import LabelKind
from liemorse.ring import CoefficientRing, Scalar
from liemorse.sparse import SparseMatrix

logger = logging.getLogger(__name__)


class MissingDiagonals(ValueError):
    """Raised when the normalization matching needs a diagonal e_xx the algebra lacks."""

    pass


class MorseMatchingError(RuntimeError):
    """Raised when a matching that fails validation is used for reduction."""

    pass


class MatchingStatus(str, Enum):
    """Validation state of a matching."""

    UNCHECKED = "unchecked"
    VALID = "valid"
    INVALID = "invalid"


@dataclass(frozen=True)
class MatchedPair:
    """Edge upper -> lower with upper in degree `degree` and lower in degree-1."""

    upper: Cell
    lower: Cell
    degree: int


@dataclass
class Matching:
    """
    A set of matched pairs with its validation status.

    Attributes:
        pairs: Matched pairs, in construction order
        status: Result of the last validate_matching call
        reason: Why the matching is invalid
        external: (degree, cell) of wedges matched with a partner outside the
            degrees that were built; they are not critical
    """

    pairs: list[MatchedPair] = field(default_factory=list)
    status: MatchingStatus = MatchingStatus.UNCHECKED
    reason: str | None = None
    external: set[tuple[int, Cell]] = field(default_factory=set)

    def __len__(self) -> int:
        return len(self.pairs)

    def matched_cells(self) -> set[tuple[int, Cell]]:
        cells = set(self.external)
        for pair in self.pairs:
            cells.add((pair.degree, pair.upper))
            cells.add((pair.degree - 1, pair.lower))
        return cells

    def by_degree(self) -> dict[int, list[MatchedPair]]:
        grouped: dict[int, list[MatchedPair]] = defaultdict(list)
        for pair in self.pairs:
            grouped[pair.degree].append(pair)
        return dict(grouped)

    def to_lines(self, complex_: ChainComplex) -> list[str]:
        """
        Render as "k upper_bits lower_bits" lines.

        Bits are a 0/1 string over the basis positions of the complex,
        position 0 first.
        """
        width = len(complex_.labels)
        return [
            f"{pair.degree} {_bits(pair.upper, width)} {_bits(pair.lower, width)}"
            for pair in self.pairs
        ]

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "Matching":
        pairs = []
        for line in lines:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"Expected 'k upper_bits lower_bits', got '{line}'")
            degree, upper, lower = parts
            pairs.append(MatchedPair(_from_bits(upper), _from_bits(lower), int(degree)))
        return cls(pairs=pairs)


def _bits(cell: Cell, width: int) -> str:
    return "".join("1" if cell >> i & 1 else "0" for i in range(width))  # type: ignore[operator]


def _from_bits(text: str) -> int:
    if set(text) - {"0", "1"}:
        raise ValueError(f"Not a bit string: '{text}'")
    return wedge_from_indices(i for i, bit in enumerate(text) if bit == "1")


@dataclass
class CriticalSet:
    """Unmatched cells per degree, in basis order."""

    cells: dict[int, list[Cell]]

    def counts(self) -> dict[int, int]:
        return {k: len(cells) for k, cells in sorted(self.cells.items())}

    def total(self) -> int:
        return sum(len(cells) for cells in self.cells.values())


@dataclass
class ReductionStats:
    """Basis sizes before and after a Morse reduction."""

    original: dict[int, int]
    critical: dict[int, int]

    @property
    def ratio(self) -> float:
        """Critical cells over all cells."""
        total = sum(self.original.values())
        return sum(self.critical.values()) / total if total else 0.0

    @property
    def compression(self) -> float:
        """All cells over critical cells; inf when nothing is critical."""
        critical = sum(self.critical.values())
        return sum(self.original.values()) / critical if critical else float("inf")

    def to_frame(self) -> Any:
        import pandas as pd

        return pd.DataFrame(
            [
                {"k": k, "wedges": self.original[k], "critical": self.critical.get(k, 0)}
                for k in sorted(self.original)
            ]
        )


# ============================================================================
# Validation and critical cells
# ============================================================================


def _entry(complex_: ChainComplex, pair: MatchedPair) -> Scalar:
    matrix = complex_.boundary(pair.degree)
    return matrix.get(
        complex_.index_of(pair.degree - 1, pair.lower), complex_.index_of(pair.degree, pair.upper)
    )


def _invalid(matching: Matching, reason: str) -> MatchingStatus:
    matching.status = MatchingStatus.INVALID
    matching.reason = reason
    logger.info(f"Matching invalid: {reason}")
    return matching.status


def validate_matching(complex_: ChainComplex, matching: Matching) -> MatchingStatus:
    """
    Check the three Morse conditions and record the outcome on the matching.

    (1) No cell occurs in two pairs, and every cell exists in the complex.
    (2) Every matched entry d_k[lower, upper] is a unit of the ring.
    (3) For each degree k the zig-zag graph on degrees k, k-1 is acyclic.

    Returns:
        MatchingStatus.VALID or MatchingStatus.INVALID; matching.reason holds
        the first violated condition
    """
    seen: set[tuple[int, Cell]] = set()
    for pair in matching.pairs:
        for degree, cell in ((pair.degree, pair.upper), (pair.degree - 1, pair.lower)):
            if not complex_.contains(degree, cell):
                return _invalid(
                    matching, f"{complex_.wedge_name(cell)} is not a cell of degree {degree}"
                )
            if (degree, cell) in seen:
                return _invalid(
                    matching, f"common endpoint {complex_.wedge_name(cell)} in degree {degree}"
                )
            seen.add((degree, cell))

    for pair in matching.pairs:
        entry = _entry(complex_, pair)
        if not complex_.ring.is_unit(entry):
            return _invalid(
                matching,
                f"non-unit entry {entry} between {complex_.wedge_name(pair.upper)} "
                f"and {complex_.wedge_name(pair.lower)}",
            )

    for k, pairs in sorted(matching.by_degree().items()):
        cycle = _zigzag_cycle(complex_, k, pairs)
        if cycle:
            names = " -> ".join(complex_.wedge_name(cell) for _, cell in cycle)
            return _invalid(matching, f"cycle in degrees {k}/{k - 1}: {names}")

    matching.status = MatchingStatus.VALID
    matching.reason = None
    logger.debug(f"Matching with {len(matching)} pairs is valid")
    return matching.status


def _zigzag_cycle(
    complex_: ChainComplex, k: int, pairs: Sequence[MatchedPair]
) -> list[tuple[str, Cell]] | None:
    matched = {(pair.upper, pair.lower) for pair in pairs}
    matched_lowers = {pair.lower for pair in pairs}
    lower_basis, upper_basis = complex_.bases[k - 1], complex_.bases[k]

    graph = nx.DiGraph()
    # a cycle has to climb through matched edges, so only matched lowers matter
    for r, c, _ in complex_.boundary(k).entries():
        lower, upper = lower_basis[r], upper_basis[c]
        if lower not in matched_lowers:
            continue
        if (upper, lower) in matched:
            graph.add_edge(("l", lower), ("u", upper))
        else:
            graph.add_edge(("u", upper), ("l", lower))

    if nx.is_directed_acyclic_graph(graph):
        return None
    return [edge[0] for edge in nx.find_cycle(graph)]


def critical_vertices(complex_: ChainComplex, matching: Matching) -> CriticalSet:
    """Cells of the complex that no pair uses, per degree in basis order."""
    matched = matching.matched_cells()
    return CriticalSet(
        {
            k: [cell for cell in basis if (k, cell) not in matched]
            for k, basis in sorted(complex_.bases.items())
        }
    )


# ============================================================================
# Reduction
# ============================================================================


def _elimination_key(complex_: ChainComplex) -> Any:
    g = complex_.algebra

    def key(pair: MatchedPair) -> tuple[int, int]:
        size = len(support(g, pair.upper)) if g is not None else 0  # type: ignore[arg-type]
        return -size, complex_.index_of(pair.degree, pair.upper)

    return key


def reduce_by_matching(
    complex_: ChainComplex,
    matching: Matching,
    order: Sequence[MatchedPair] | None = None,
) -> ChainComplex:
    """
    Reduce a complex to its critical cells.

    Each matched pair is eliminated from its boundary matrix d_k as a pivot,
    updating the remaining entries by the rank-one correction
    M[r, c] -= M[r, u] * a^-1 * M[l, c]. Rows and columns of cells matched in
    other degrees are dropped.

    Args:
        complex_: Complex to reduce
        matching: Morse matching; validated first when unchecked
        order: Elimination order (default: decreasing support size, then basis order)

    Returns:
        ChainComplex on the critical cells

    Raises:
        MorseMatchingError: If the matching is invalid
    """
    if matching.status == MatchingStatus.UNCHECKED:
        validate_matching(complex_, matching)
    if matching.status != MatchingStatus.VALID:
        raise MorseMatchingError(f"Cannot reduce with an invalid matching: {matching.reason}")

    ring = complex_.ring
    critical = critical_vertices(complex_, matching).cells
    matched = matching.matched_cells()

    if order is None:
        order = sorted(matching.pairs, key=_elimination_key(complex_))
    pivots: dict[int, list[MatchedPair]] = defaultdict(list)
    for pair in order:
        pivots[pair.degree].append(pair)

    boundaries = {}
    for k, matrix in complex_.boundaries.items():
        in_pivots = {(pair.upper, pair.lower) for pair in pivots.get(k, [])}
        lowers = {lower for _, lower in in_pivots}
        uppers = {upper for upper, _ in in_pivots}
        keep_rows = [
            i
            for i, cell in enumerate(complex_.bases[k - 1])
            if (k - 1, cell) not in matched or cell in lowers
        ]
        keep_cols = [
            j
            for j, cell in enumerate(complex_.bases[k])
            if (k, cell) not in matched or cell in uppers
        ]
        rows = {complex_.bases[k - 1][i]: position for position, i in enumerate(keep_rows)}
        cols = {complex_.bases[k][j]: position for position, j in enumerate(keep_cols)}

        eliminated = _eliminate(
            matrix.submatrix(keep_rows, keep_cols),
            [(rows[pair.lower], cols[pair.upper]) for pair in pivots.get(k, [])],
            ring,
        )

        final_rows = [rows[cell] for cell in critical[k - 1]]
        final_cols = [cols[cell] for cell in critical[k]]
        boundaries[k] = eliminated.submatrix(final_rows, final_cols)

    logger.info(
        f"Reduced {complex_.name or 'complex'}: {complex_.total_size()} -> "
        f"{sum(len(cells) for cells in critical.values())} cells"
    )
    return ChainComplex(
        ring=ring,
        bases=critical,
        boundaries=boundaries,
        top_degree=complex_.top_degree,
        labels=complex_.labels,
        algebra=complex_.algebra,
        kind=complex_.kind,
        name=complex_.name,
        degree_offset=complex_.degree_offset,
        dual=complex_.dual,
        factors=complex_.factors,
    )


def _eliminate(
    matrix: SparseMatrix, pivots: Sequence[tuple[int, int]], ring: CoefficientRing
) -> SparseMatrix:
    rows = matrix.to_rows()
    cols: dict[int, dict[int, Scalar]] = {c: dict(column) for c, column in matrix.columns.items()}

    for r0, c0 in pivots:
        a = rows.get(r0, {}).get(c0, 0)
        if not ring.is_unit(a):
            raise MorseMatchingError(f"Pivot ({r0}, {c0}) = {a} is not a unit")
        inverse = ring.inverse(a)

        pivot_row = {c: v for c, v in rows.pop(r0, {}).items() if c != c0}
        pivot_col = {r: v for r, v in cols.pop(c0, {}).items() if r != r0}
        for c in pivot_row:
            cols[c].pop(r0, None)
        for r in pivot_col:
            rows[r].pop(c0, None)

        for r, left in pivot_col.items():
            factor = left * inverse
            row = rows.setdefault(r, {})
            for c, right in pivot_row.items():
                value = ring.normalize(row.get(c, 0) - factor * right)
                if value:
                    row[c] = value
                    cols.setdefault(c, {})[r] = value
                else:
                    row.pop(c, None)
                    cols.get(c, {}).pop(r, None)

    return SparseMatrix(matrix.rows, matrix.cols, cols)


def gradient_path_sum(
    complex_: ChainComplex, matching: Matching, source: Cell, target: Cell
) -> tuple[list[Scalar], Scalar]:
    """
    Enumerate the zig-zag paths from a critical cell to a critical cell one degree lower.

    A path goes down a boundary entry, and while it sits on a matched lower
    cell it climbs to its partner (weight -1/entry) and goes down again.

    Args:
        complex_: The unreduced complex
        matching: A valid matching
        source: Critical cell of degree k
        target: Critical cell of degree k-1

    Returns:
        (values of the individual paths, their sum)
    """
    k = next(d for d, basis in complex_.bases.items() if complex_.contains(d, source))
    ring = complex_.ring
    matrix = complex_.boundary(k)
    lower_basis = complex_.bases[k - 1]
    partner = {pair.lower: pair.upper for pair in matching.pairs if pair.degree == k}

    values: list[Scalar] = []

    def walk(cell: Cell, value: Scalar) -> None:
        column = matrix.column(complex_.index_of(k, cell))
        for r, entry in sorted(column.items()):
            lower = lower_basis[r]
            if lower == target:
                values.append(ring.normalize(value * entry))
            elif lower in partner and partner[lower] != cell:
                upper = partner[lower]
                up = ring.normalize(-ring.inverse(_entry_at(complex_, k, lower, upper)))
                walk(upper, value * entry * up)

    walk(source, ring.normalize(1))
    total = ring.normalize(sum(values)) if values else ring.normalize(0)
    return values, total


def _entry_at(complex_: ChainComplex, k: int, lower: Cell, upper: Cell) -> Scalar:
    return complex_.boundary(k).get(complex_.index_of(k - 1, lower), complex_.index_of(k, upper))


def reduction_stats(complex_: ChainComplex, reduced: ChainComplex) -> ReductionStats:
    stats = ReductionStats(
        original={k: len(basis) for k, basis in sorted(complex_.bases.items())},
        critical={k: len(basis) for k, basis in sorted(reduced.bases.items())},
    )
    logger.info(f"Reduction ratio for {complex_.name or 'complex'}: {stats.ratio:.4f}")
    return stats


# ============================================================================
# Specific matchings
# ============================================================================


def _diagonal_lookup(complex_: ChainComplex) -> dict[int, int]:
    g = complex_.algebra
    if g is None:
        raise UnsupportedBasis("Normalization matching needs a Chevalley-Eilenberg complex")
    diagonals = {}
    for label in g.labels:
        if label.kind == LabelKind.MATRIX and label.row == label.col:
            diagonals[label.row] = g.index_of(label)
    return diagonals


def _matched_diagonal(complex_: ChainComplex, w: int, diagonals: dict[int, int]) -> int | None:
    """Bit of the diagonal e_xx used to match w, or None when w is critical."""
    g = complex_.algebra
    ring = complex_.ring
    indices = support(g, w)  # type: ignore[arg-type]
    missing = [x for x in indices if x not in diagonals]
    if missing:
        raise MissingDiagonals(f"{g.name} has no diagonal e_{missing[0]}{missing[0]}")  # type: ignore[union-attr]

    weights = matrix_weights(g, w) if g.has_matrix_units else None  # type: ignore[union-attr]
    for x in indices:
        bit = 1 << diagonals[x]
        upper = w | bit
        if weights is not None:
            weight = weights.get(x, 0)
            if not ring.is_unit(ring.normalize(weight)):
                continue
            entry = ring.normalize(ce_boundary(g, upper).get(upper & ~bit, 0))  # type: ignore[arg-type]
            if entry not in (ring.normalize(weight), ring.normalize(-weight)):
                raise MorseMatchingError(
                    f"Entry {entry} at e_{x}{x} does not match weight {weight} for "
                    f"{complex_.wedge_name(upper)}"
                )
            return bit
        entry = ring.normalize(ce_boundary(g, upper).get(upper & ~bit, 0))  # type: ignore[arg-type]
        if ring.is_unit(entry):
            return bit
    return None


def normalization_matching(complex_: ChainComplex) -> Matching:
    """
    Pair each wedge with the wedge differing by the first diagonal e_xx of unit weight.

    For a wedge v, x runs over the indices of its nondiagonal factors in
    increasing order; the first x whose weight (column count minus row count)
    is a unit of the ring decides the pair v <-> v ^ e_xx. Wedges without
    such an x are critical. For skew bases the weight is read from the
    boundary entry directly.

    Raises:
        MissingDiagonals: If some nondiagonal factor uses an index with no diagonal
    """
    diagonals = _diagonal_lookup(complex_)
    matching = Matching()

    for k in complex_.degrees:
        for w in complex_.bases[k]:
            bit = _matched_diagonal(complex_, w, diagonals)  # type: ignore[arg-type]
            if bit is None or not w & bit:  # type: ignore[operator]
                if bit is not None and not complex_.contains(k + 1, w | bit):  # type: ignore[operator]
                    matching.external.add((k, w))
                continue
            lower = w & ~bit  # type: ignore[operator]
            if complex_.contains(k - 1, lower):
                matching.pairs.append(MatchedPair(w, lower, k))
            else:
                matching.external.add((k, w))

    critical = sum(len(b) for b in complex_.bases.values()) - 2 * len(matching) - len(
        matching.external
    )
    logger.info(
        f"Normalization matching on {complex_.name} over {complex_.ring}: "
        f"{len(matching)} pairs, {critical} critical"
    )
    return matching


def normalization_reduce(complex_: ChainComplex) -> ChainComplex:
    """
    Reduce with the normalization matching by deleting matched rows and columns.

    No Schur updates are needed: no gradient path leaves a matched pair, so
    the reduced boundary is the restriction of the original one.
    """
    matching = normalization_matching(complex_)
    critical = critical_vertices(complex_, matching)
    reduced = complex_.restrict(critical.cells)
    logger.info(
        f"Normalization reduce of {complex_.name}: {complex_.total_size()} -> "
        f"{reduced.total_size()} wedges"
    )
    return reduced


def star_matching(complex_: ChainComplex, vertex: str) -> Matching:
    """
    Cone matching sigma u {v} -> sigma for every sigma missing v.

    The empty simplex takes part in reduced complexes. The result is only a
    Morse matching when v is a cone point; run validate_matching otherwise.
    """
    if vertex not in complex_.labels:
        raise ValueError(f"Unknown vertex '{vertex}'")
    bit = 1 << complex_.labels.index(vertex)
    matching = Matching()
    for k in complex_.degrees:
        for cell in complex_.bases[k]:
            if cell & bit:  # type: ignore[operator]
                continue
            if complex_.contains(k + 1, cell | bit):  # type: ignore[operator]
                matching.pairs.append(MatchedPair(cell | bit, cell, k + 1))  # type: ignore[operator]
    return matching


def simplex(complex_: ChainComplex, vertices: Iterable[str]) -> int:
    """Bitset of the simplex on the named vertices."""
    return wedge_from_indices(complex_.labels.index(v) for v in vertices)


def matching_from_names(
    complex_: ChainComplex, edges: Iterable[tuple[Iterable[str], Iterable[str]]]
) -> Matching:
    """Matching from (upper vertices, lower vertices) pairs of a simplicial complex."""
    pairs = []
    for upper, lower in edges:
        upper_cell = simplex(complex_, upper)
        degree = len(wedge_indices(upper_cell)) - 1 + complex_.degree_offset
        pairs.append(MatchedPair(upper_cell, simplex(complex_, lower), degree))
    return Matching(pairs=pairs)


__all__ = [
    "CriticalSet",
    "MatchedPair",
    "Matching",
    "MatchingStatus",
    "MissingDiagonals",
    "MorseMatchingError",
    "ReductionStats",
    "critical_vertices",
    "gradient_path_sum",
    "matching_from_names",
    "normalization_matching",
    "normalization_reduce",
    "reduce_by_matching",
    "reduction_stats",
    "simplex",
    "star_matching",
    "validate_matching",
]
