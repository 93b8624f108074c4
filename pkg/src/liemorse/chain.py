"""
Chain complexes: Chevalley-Eilenberg complexes of Lie algebras and Poincare
complexes of simplicial complexes.

Wedges and simplices are int bitsets over an ordered basis (bit i set means
basis element i is a factor). The canonical form lists factors in increasing
basis order; any other factor order differs by the permutation sign.

Example usage:
    from liemorse.chain import build_ce_complex
    from liemorse.lie import sol
    from liemorse.ring import INTEGERS

    complex_ = build_ce_complex(sol(3), INTEGERS)
    complex_.dimensions()   # [1, 6, 15, 20, 15, 6, 1]
"""

import logging
import re
from collections import defaultdict
from collections.abc import Callable, Hashable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import comb
from pathlib import Path

from tqdm import tqdm

from liemorse.lie import LabelKind, LieAlgebra
from liemorse.ring import INTEGERS, CoefficientRing, Scalar
from liemorse.sparse import SparseMatrix

logger = logging.getLogger(__name__)

Wedge = int
Cell = Hashable

DEFAULT_MAX_WEDGES = 2**24

_DUMP_HEADER = re.compile(r"^deg\s+(-?\d+):\s+(\d+)\s+wedges$")


class ComplexTooLarge(RuntimeError):
    """Raised when a complex would exceed the configured wedge cap."""

    pass


class UnsupportedBasis(ValueError):
    """Raised when an operation needs matrix units but the basis has other labels."""

    pass


class SubcomplexError(RuntimeError):
    """Raised when a wedge filter is not stable under the boundary."""

    pass


class ComplexKind(str, Enum):
    """Where a complex came from; decides how cells are named."""

    CHEVALLEY_EILENBERG = "ce"
    SIMPLICIAL = "simplicial"
    TENSOR = "tensor"


# ============================================================================
# Wedge helpers
# ============================================================================


def wedge_indices(w: Wedge) -> list[int]:
    """Basis positions of the factors, increasing."""
    indices = []
    position = 0
    while w:
        if w & 1:
            indices.append(position)
        w >>= 1
        position += 1
    return indices


def wedge_from_indices(indices: Iterable[int]) -> Wedge:
    w = 0
    for i in indices:
        w |= 1 << i
    return w


def canonical_reordering_sign(a_bits: Wedge, b_bits: Wedge) -> int:
    """
    Sign of a ^ b relative to the canonical wedge a | b.

    Counts pairs (i in a, j in b) with i > j.
    """
    a_bits >>= 1
    swaps = 0
    while a_bits:
        swaps += (a_bits & b_bits).bit_count()
        a_bits >>= 1
    return -1 if swaps & 1 else 1


def canonicalize(factors: Sequence[int]) -> tuple[int, Wedge]:
    """
    Canonical form of a wedge given as a factor list.

    Returns:
        (sign, wedge); sign is 0 when a factor repeats

    Example:
        >>> canonicalize([2, 0, 1])
        (1, 7)
    """
    if len(set(factors)) != len(factors):
        return 0, 0
    inversions = sum(1 for i, j in combinations(range(len(factors)), 2) if factors[i] > factors[j])
    return (-1 if inversions & 1 else 1), wedge_from_indices(factors)


def ce_boundary(g: LieAlgebra, w: Wedge) -> dict[Wedge, int]:
    """
    Chevalley-Eilenberg boundary of one wedge, over Z.

    d(x_1 ^ ... ^ x_k) = sum_{r<s} (-1)^(r+s) [x_r, x_s] ^ x_1 ... x_r^ ... x_s^ ... x_k,
    with the bracket prepended and then moved into place.
    """
    indices = wedge_indices(w)
    result: dict[Wedge, int] = defaultdict(int)

    for r, s in combinations(range(len(indices)), 2):
        terms = g.bracket(indices[r], indices[s])
        if not terms:
            continue
        rest = w & ~(1 << indices[r]) & ~(1 << indices[s])
        sign = -1 if (r + s) & 1 else 1
        for t, c in terms:
            bit = 1 << t
            if rest & bit:
                continue
            # moving x_t past the factors of rest that precede it
            if (rest & (bit - 1)).bit_count() & 1:
                result[rest | bit] -= sign * c
            else:
                result[rest | bit] += sign * c

    return {target: c for target, c in result.items() if c}


def simplex_boundary(w: Wedge) -> dict[Wedge, int]:
    """d{v_0..v_k} = sum_i (-1)^i {v_0..v_i^..v_k}."""
    return {w & ~(1 << v): (-1 if i & 1 else 1) for i, v in enumerate(wedge_indices(w))}


# ============================================================================
# Chain complexes
# ============================================================================


@dataclass
class ChainComplex:
    """
    Per-degree ordered bases with sparse boundary matrices.

    boundaries[k] maps degree k to degree k-1 (rows: basis k-1, columns: basis k).
    A window complex only carries some degrees; top_degree still records where
    the full complex ends so that zero maps past the ends are known.

    Attributes:
        ring: Coefficient ring of the entries
        bases: degree -> ordered cells (wedge bitsets for CE/simplicial complexes)
        boundaries: degree -> SparseMatrix
        top_degree: Highest degree of the full complex
        labels: Names of the basis elements (Lie basis or vertices)
        algebra: The Lie algebra for CE complexes
        kind: Origin of the complex
        degree_offset: Stored degree minus geometric degree (1 for reduced simplicial)
        factors: The two operands of a tensor complex
    """

    ring: CoefficientRing
    bases: dict[int, list[Cell]]
    boundaries: dict[int, SparseMatrix]
    top_degree: int
    labels: tuple[str, ...] = ()
    algebra: LieAlgebra | None = field(default=None, repr=False)
    kind: ComplexKind = ComplexKind.CHEVALLEY_EILENBERG
    name: str = ""
    degree_offset: int = 0
    dual: bool = False
    factors: tuple["ChainComplex", "ChainComplex"] | None = field(default=None, repr=False)
    _positions: dict[int, dict[Cell, int]] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    @property
    def degrees(self) -> list[int]:
        return sorted(self.bases)

    def dimensions(self) -> list[int]:
        """Basis sizes for degrees 0..top_degree (unbuilt degrees count as 0)."""
        return [len(self.bases.get(k, ())) for k in range(self.top_degree + 1)]

    def total_size(self) -> int:
        return sum(len(basis) for basis in self.bases.values())

    def index_of(self, k: int, cell: Cell) -> int:
        if k not in self._positions:
            self._positions[k] = {c: i for i, c in enumerate(self.bases[k])}
        return self._positions[k][cell]

    def contains(self, k: int, cell: Cell) -> bool:
        if k not in self.bases:
            return False
        if k not in self._positions:
            self._positions[k] = {c: i for i, c in enumerate(self.bases[k])}
        return cell in self._positions[k]

    def boundary(self, k: int) -> SparseMatrix:
        """
        Boundary map out of degree k.

        Raises:
            KeyError: If degree k or k-1 lies inside the complex but was not built
        """
        if k in self.boundaries:
            return self.boundaries[k]
        inside = [d for d in (k - 1, k) if 0 <= d <= self.top_degree]
        missing = [d for d in inside if d not in self.bases]
        if missing:
            raise KeyError(f"Degree {missing[0]} not built in this complex")
        if len(inside) == 2:
            raise KeyError(f"Boundary d_{k} not built in this complex")
        return SparseMatrix.zero(len(self.bases.get(k - 1, ())), len(self.bases.get(k, ())))

    def wedge_name(self, cell: Cell) -> str:
        """
        Human-readable name of a cell.

        The cell need not belong to the complex. Bits at or beyond the number
        of labels have no label and are written as "#i" with i the bit
        position, so naming never fails on foreign cells.
        """
        if self.kind == ComplexKind.TENSOR and self.factors is not None:
            _, left, right = cell  # type: ignore[misc]
            return f"{self.factors[0].wedge_name(left)} (x) {self.factors[1].wedge_name(right)}"
        names = [
            str(self.labels[i]) if i < len(self.labels) else (f"#{i}" if self.labels else str(i))
            for i in wedge_indices(cell)  # type: ignore[arg-type]
        ]
        if self.kind == ComplexKind.SIMPLICIAL:
            return "{" + ",".join(names) + "}"
        return "^".join(names) if names else "1"

    def restrict(self, keep: dict[int, Iterable[Cell]]) -> "ChainComplex":
        """Subspace spanned by the kept cells, in their original order, with restricted maps."""
        kept_sets = {k: set(cells) for k, cells in keep.items()}
        bases = {k: [c for c in self.bases[k] if c in kept_sets.get(k, ())] for k in self.bases}
        boundaries = {}
        for k, matrix in self.boundaries.items():
            rows = [self.index_of(k - 1, c) for c in bases[k - 1]]
            cols = [self.index_of(k, c) for c in bases[k]]
            boundaries[k] = matrix.submatrix(rows, cols)
        return replace(self, bases=bases, boundaries=boundaries)


def _window(degrees: Iterable[int] | None, top: int) -> list[int]:
    if degrees is None:
        return list(range(top + 1))
    wanted = set()
    for k in degrees:
        wanted.update(d for d in (k - 1, k, k + 1) if 0 <= d <= top)
    return sorted(wanted)


def build_ce_complex(
    g: LieAlgebra,
    ring: CoefficientRing,
    degrees: Iterable[int] | None = None,
    wedge_filter: Callable[[Wedge], bool] | None = None,
    max_wedges: int = DEFAULT_MAX_WEDGES,
    threads: int = 1,
    progress: bool = False,
) -> ChainComplex:
    """
    Build the Chevalley-Eilenberg chain complex of g over a ring.

    Args:
        g: Lie algebra (structure constants over Z)
        ring: Coefficient ring; entries are reduced into it
        degrees: Degrees whose homology is wanted; neighbours are added.
            None builds all degrees 0..rank.
        wedge_filter: Keep only wedges passing the predicate (a subcomplex)
        max_wedges: Cap on the number of wedges enumerated
        threads: Worker threads for building boundary matrices
        progress: Show a tqdm progress bar

    Returns:
        ChainComplex

    Raises:
        ComplexTooLarge: If the enumerated wedges exceed max_wedges
        SubcomplexError: If a boundary term leaves the filtered wedges
    """
    rank = g.rank
    wanted = _window(degrees, rank)
    size = sum(comb(rank, k) for k in wanted)
    if size > max_wedges:
        raise ComplexTooLarge(
            f"{g.name} needs {size} wedges in degrees {wanted[0]}..{wanted[-1]}, cap is {max_wedges}"
        )

    logger.info(f"Building CE complex of {g.name} over {ring}: rank {rank}, {size} wedges")

    bases: dict[int, list[Cell]] = {}
    for k in wanted:
        wedges = (wedge_from_indices(c) for c in combinations(range(rank), k))
        bases[k] = [w for w in wedges if wedge_filter is None or wedge_filter(w)]

    positions = {k: {w: i for i, w in enumerate(basis)} for k, basis in bases.items()}

    def build(k: int) -> tuple[int, SparseMatrix]:
        rows = positions[k - 1]
        columns: dict[int, dict[int, Scalar]] = {}
        for j, w in enumerate(bases[k]):
            column: dict[int, Scalar] = {}
            for target, c in ce_boundary(g, w).items():
                value = ring.normalize(c)
                if not value:
                    continue
                if target not in rows:
                    raise SubcomplexError(
                        f"Boundary of {_name(g, w)} leaves the subcomplex at {_name(g, target)}"
                    )
                column[rows[target]] = value
            if column:
                columns[j] = column
        logger.debug(f"d_{k}: {len(bases[k - 1])} x {len(bases[k])}")
        return k, SparseMatrix(len(bases[k - 1]), len(bases[k]), columns)

    targets = [k for k in wanted if k >= 1 and k - 1 in bases]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        built = list(
            tqdm(
                pool.map(build, targets),
                total=len(targets),
                desc=f"Boundaries of {g.name}",
                disable=not progress,
            )
        )

    return ChainComplex(
        ring=ring,
        bases=bases,
        boundaries=dict(built),
        top_degree=rank,
        labels=tuple(g.label_names()),
        algebra=g,
        kind=ComplexKind.CHEVALLEY_EILENBERG,
        name=g.name,
    )


def _name(g: LieAlgebra, w: Wedge) -> str:
    return "^".join(str(g.labels[i]) for i in wedge_indices(w)) or "1"


def boundary_squared_is_zero(complex_: ChainComplex) -> bool:
    """Check d_{k} o d_{k+1} = 0 wherever both maps are built."""
    for k, upper in complex_.boundaries.items():
        lower = complex_.boundaries.get(k - 1)
        if lower is not None and not lower.matmul(upper, complex_.ring).is_zero():
            logger.info(f"d_{k - 1} o d_{k} is nonzero in {complex_.name}")
            return False
    return True


def weight_vector(complex_: ChainComplex, w: Wedge) -> dict[int, int]:
    """
    Weights w_x = r_x - s_x of a wedge over a matrix-unit basis.

    r_x counts nondiagonal factors e_ax (x is the column), s_x counts e_xb.

    Raises:
        UnsupportedBasis: For complexes without matrix-unit labels
    """
    g = complex_.algebra
    if g is None or not g.has_matrix_units:
        raise UnsupportedBasis(f"{complex_.name or 'complex'} has no matrix-unit basis")
    return matrix_weights(g, w)


def matrix_weights(g: LieAlgebra, w: Wedge) -> dict[int, int]:
    weights: dict[int, int] = defaultdict(int)
    for i in wedge_indices(w):
        label = g.labels[i]
        if label.row == label.col:
            continue
        weights[label.col] += 1
        weights[label.row] -= 1
    return dict(sorted(weights.items()))


def support(g: LieAlgebra, w: Wedge) -> list[int]:
    """Indices occurring in nondiagonal factors, increasing."""
    indices: set[int] = set()
    for i in wedge_indices(w):
        label = g.labels[i]
        if label.kind == LabelKind.SKEW or label.row != label.col:
            indices.update((label.row, label.col))
    return sorted(indices)


# ============================================================================
# Simplicial complexes
# ============================================================================


def simplicial_chain_complex(
    facets: Sequence[Sequence[str]],
    reduced: bool = False,
    ring: CoefficientRing = INTEGERS,
) -> ChainComplex:
    """
    Poincare chain complex of the simplicial complex generated by facets.

    Vertices are numbered by first appearance. With reduced=True the empty
    simplex is added in stored degree 0 and every simplex of dimension d sits
    in stored degree d+1.

    Example:
        >>> simplicial_chain_complex([["a", "b"], ["b", "c"], ["c", "a"]]).dimensions()
        [3, 3]
    """
    if not facets or any(len(facet) == 0 for facet in facets):
        raise ValueError("Simplicial complex needs nonempty facets")

    vertex_ids: dict[str, int] = {}
    for facet in facets:
        for vertex in facet:
            vertex_ids.setdefault(vertex, len(vertex_ids))

    simplices: set[Wedge] = set()
    for facet in facets:
        full = wedge_from_indices(vertex_ids[v] for v in facet)
        subset = full
        while subset:
            simplices.add(subset)
            subset = (subset - 1) & full

    offset = 1 if reduced else 0
    if reduced:
        simplices.add(0)

    top = max(s.bit_count() for s in simplices) - 1 + offset
    bases: dict[int, list[Cell]] = {k: [] for k in range(top + 1)}
    for s in sorted(simplices, key=wedge_indices):
        bases[s.bit_count() - 1 + offset].append(s)

    boundaries = {}
    for k in range(1, top + 1):
        rows = {s: i for i, s in enumerate(bases[k - 1])}
        columns = {
            j: {rows[face]: ring.normalize(c) for face, c in simplex_boundary(s).items()}  # type: ignore[arg-type]
            for j, s in enumerate(bases[k])
        }
        boundaries[k] = SparseMatrix(len(bases[k - 1]), len(bases[k]), columns).reduced(ring)

    logger.info(f"Simplicial complex: {len(vertex_ids)} vertices, sizes {[len(b) for b in bases.values()]}")
    return ChainComplex(
        ring=ring,
        bases=bases,
        boundaries=boundaries,
        top_degree=top,
        labels=tuple(vertex_ids),
        kind=ComplexKind.SIMPLICIAL,
        name="simplicial",
        degree_offset=offset,
    )


def parse_facets_text(text: str) -> list[list[str]]:
    """
    Parse facets, one per line.

    Vertices are separated by whitespace or commas; a line without separators
    is read as single-letter vertices ("efg" -> e, f, g).
    """
    facets = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if re.search(r"[\s,]", line):
            facets.append([v for v in re.split(r"[\s,]+", line) if v])
        else:
            facets.append(list(line))
    return facets


def load_facets_file(path: str | Path) -> list[list[str]]:
    path = Path(path).expanduser()
    if not path.exists():
        raise FileNotFoundError(f"Facets file not found: {path}")
    return parse_facets_text(path.read_text(encoding="utf-8"))


# ============================================================================
# Duality and dumps
# ============================================================================


def dualize(complex_: ChainComplex) -> ChainComplex:
    """
    Cochain complex written as a chain complex.

    Degree k moves to top_degree - k and every boundary is transposed, so the
    homology of the result in degree top-k is the cohomology of the input in
    degree k. Applying it twice returns the original matrices.
    """
    top = complex_.top_degree
    bases = {top - k: basis for k, basis in complex_.bases.items()}
    boundaries = {
        top - k + 1: matrix.transpose() for k, matrix in complex_.boundaries.items()
    }
    return replace(complex_, bases=bases, boundaries=boundaries, dual=not complex_.dual)


def dump_complex(complex_: ChainComplex) -> str:
    """
    Plain-text dump: per degree "deg k: m wedges", then "r c v" lines of d_k.
    """
    lines = []
    for k in complex_.degrees:
        lines.append(f"deg {k}: {len(complex_.bases[k])} wedges")
        matrix = complex_.boundaries.get(k)
        if matrix is not None:
            lines.extend(f"{r} {c} {v}" for r, c, v in matrix.entries())
    return "\n".join(lines) + "\n"


def parse_dump(text: str, ring: CoefficientRing = INTEGERS) -> tuple[dict[int, int], dict[int, SparseMatrix]]:
    """Read a dump back into degree sizes and boundary matrices."""
    sizes: dict[int, int] = {}
    entries: dict[int, list[tuple[int, int, Scalar]]] = defaultdict(list)
    current: int | None = None

    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        header = _DUMP_HEADER.match(line)
        if header:
            current = int(header.group(1))
            sizes[current] = int(header.group(2))
            continue
        if current is None:
            raise ValueError(f"Entry before any degree header: '{line}'")
        r, c, v = line.split()
        value = ring.normalize(Fraction(v)) if "/" in v else int(v)
        entries[current].append((int(r), int(c), value))

    boundaries = {
        k: SparseMatrix.from_entries(sizes[k - 1], sizes[k], entries.get(k, []), ring)
        for k in sizes
        if k - 1 in sizes
    }
    return sizes, boundaries


__all__ = [
    "Cell",
    "ChainComplex",
    "ComplexKind",
    "ComplexTooLarge",
    "DEFAULT_MAX_WEDGES",
    "SubcomplexError",
    "UnsupportedBasis",
    "Wedge",
    "boundary_squared_is_zero",
    "build_ce_complex",
    "canonical_reordering_sign",
    "canonicalize",
    "ce_boundary",
    "dualize",
    "dump_complex",
    "load_facets_file",
    "matrix_weights",
    "parse_dump",
    "parse_facets_text",
    "simplex_boundary",
    "simplicial_chain_complex",
    "support",
    "wedge_from_indices",
    "wedge_indices",
    "weight_vector",
]
