"""
Lie algebras presented by a finite basis and integer structure constants.

Structure constants are stored over Z and reduced into whatever coefficient
ring a chain complex is built over, so one algebra object serves all rings.
Constructors cover matrix-unit subalgebras of gl_n (the poset families sol_n,
nil_n, dgn_n and the full gl_n) and so_n in characteristic 2.

Example usage:
    from liemorse.lie import sol, validate_lie

    g = sol(3)
    g.label_names()   # ['e11', 'e12', 'e13', 'e22', 'e23', 'e33']
    validate_lie(g)   # True
"""

import logging
from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations

from liemorse.poset import Poset, antichain, chain
from liemorse.ring import INTEGERS, CoefficientRing

logger = logging.getLogger(__name__)

# Sparse vector: basis index -> integer coefficient
Vector = dict[int, int]
BracketTerms = tuple[tuple[int, int], ...]


class NotClosed(ValueError):
    """Raised when a set of matrix units is not closed under the bracket."""

    pass


class LabelKind(str, Enum):
    """Kind of basis element."""

    MATRIX = "matrix"
    SKEW = "skew"


@dataclass(frozen=True, order=True)
class BasisLabel:
    """Matrix unit e_ij, or skew unit e'_ab = e_ab - e_ba with a < b."""

    row: int
    col: int
    kind: LabelKind = LabelKind.MATRIX

    @property
    def is_diagonal(self) -> bool:
        return self.kind == LabelKind.MATRIX and self.row == self.col

    def __str__(self) -> str:
        prefix = "e'" if self.kind == LabelKind.SKEW else "e"
        if self.row < 10 and self.col < 10:
            return f"{prefix}{self.row}{self.col}"
        return f"{prefix}({self.row},{self.col})"


@dataclass
class LieAlgebra:
    """
    A Lie algebra with basis labels and a sparse integer bracket table.

    Attributes:
        name: Display name, e.g. "sol_3"
        n: Matrix size the labels refer to
        labels: Ordered basis; wedge signs depend on this order
        brackets: (i, j) with i < j -> ((k, c), ...) meaning [x_i, x_j] = sum c x_k
    """

    name: str
    n: int
    labels: tuple[BasisLabel, ...]
    brackets: dict[tuple[int, int], BracketTerms] = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.labels)

    @cached_property
    def _index(self) -> dict[BasisLabel, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index_of(self, label: BasisLabel) -> int:
        return self._index[label]

    def diagonal_index(self, x: int) -> int | None:
        """Basis position of e_xx, or None when the algebra lacks it."""
        return self._index.get(BasisLabel(x, x))

    @property
    def has_matrix_units(self) -> bool:
        return all(label.kind == LabelKind.MATRIX for label in self.labels)

    def label_names(self) -> list[str]:
        return [str(label) for label in self.labels]

    def bracket(self, i: int, j: int) -> BracketTerms:
        """[x_i, x_j] as ((k, c), ...), using antisymmetry for i > j."""
        if i == j:
            return ()
        if i < j:
            return self.brackets.get((i, j), ())
        return tuple((k, -c) for k, c in self.brackets.get((j, i), ()))

    def bracket_vectors(self, u: Vector, v: Vector) -> Vector:
        """Bilinear extension of the bracket to sparse vectors."""
        result: dict[int, int] = defaultdict(int)
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.bracket(i, j):
                    result[k] += a * b * c
        return {k: c for k, c in result.items() if c}


def _collect(terms: Iterable[tuple[int, int]]) -> BracketTerms:
    totals: dict[int, int] = defaultdict(int)
    for k, c in terms:
        totals[k] += c
    return tuple(sorted((k, c) for k, c in totals.items() if c))


def matrix_unit_algebra(n: int, units: Iterable[tuple[int, int]], name: str) -> LieAlgebra:
    """
    Subalgebra of gl_n spanned by the given matrix units.

    Bracket: [e_ab, e_cd] = delta_bc e_ad - delta_ad e_cb.

    Args:
        n: Matrix size
        units: Pairs (i, j) naming the units e_ij
        name: Display name

    Returns:
        LieAlgebra with labels in lexicographic (i, j) order

    Raises:
        NotClosed: If some bracket leaves the span of the units
    """
    labels = tuple(sorted({BasisLabel(i, j) for i, j in units}))
    index = {(label.row, label.col): k for k, label in enumerate(labels)}
    brackets: dict[tuple[int, int], BracketTerms] = {}

    for p, q in combinations(range(len(labels)), 2):
        a, b = labels[p].row, labels[p].col
        c, d = labels[q].row, labels[q].col
        terms = []
        if b == c:
            terms.append(((a, d), 1))
        if a == d:
            terms.append(((c, b), -1))

        resolved = []
        for unit, coefficient in terms:
            if unit not in index:
                raise NotClosed(f"[{labels[p]}, {labels[q]}] leaves the span: e{unit}")
            resolved.append((index[unit], coefficient))

        collected = _collect(resolved)
        if collected:
            brackets[(p, q)] = collected

    logger.debug(f"Built {name}: rank {len(labels)}, {len(brackets)} nonzero brackets")
    return LieAlgebra(name=name, n=n, labels=labels, brackets=brackets)


def gl_poset(poset: Poset, strict: bool = False) -> LieAlgebra:
    """
    The Lie algebra of matrices supported on a partial order.

    Basis {e_ij : i <= j} (strict: i < j) with the matrix commutator.

    Example:
        >>> g = gl_poset(chain(3))
        >>> g.bracket(g.index_of(BasisLabel(1, 2)), g.index_of(BasisLabel(2, 3)))
        ((2, 1),)
    """
    units = poset.strict_pairs() if strict else poset.relations()
    suffix = "<" if strict else "<="
    return matrix_unit_algebra(poset.n, units, name=f"gl^{suffix}_{poset.n}")


def gl_full(n: int) -> LieAlgebra:
    """The full matrix algebra gl_n."""
    units = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    return matrix_unit_algebra(n, units, name=f"gl_{n}")


def sol(n: int) -> LieAlgebra:
    """Upper triangular n x n matrices."""
    g = gl_poset(chain(n))
    g.name = f"sol_{n}"
    return g


def nil(n: int) -> LieAlgebra:
    """Strictly upper triangular n x n matrices."""
    g = gl_poset(chain(n), strict=True)
    g.name = f"nil_{n}"
    return g


def dgn(n: int) -> LieAlgebra:
    """Diagonal n x n matrices (abelian)."""
    g = gl_poset(antichain(n))
    g.name = f"dgn_{n}"
    return g


def _skew(a: int, b: int) -> tuple[BasisLabel, int] | None:
    # e'_ba = -e'_ab and e'_aa = 0
    if a == b:
        return None
    if a < b:
        return BasisLabel(a, b, LabelKind.SKEW), 1
    return BasisLabel(b, a, LabelKind.SKEW), -1


def _so_bracket(x: BasisLabel, y: BasisLabel) -> list[tuple[BasisLabel, int]]:
    if x.kind == LabelKind.MATRIX and y.kind == LabelKind.MATRIX:
        return []
    if x.kind == LabelKind.MATRIX:
        return [(label, -c) for label, c in _so_bracket(y, x)]

    a, b = x.row, x.col
    raw: list[tuple[tuple[int, int], int]] = []
    if y.kind == LabelKind.SKEW:
        c, d = y.row, y.col
        if b == c:
            raw.append(((a, d), 1))
        if a == d:
            raw.append(((b, c), 1))
        if b == d:
            raw.append(((a, c), -1))
        if a == c:
            raw.append(((b, d), -1))
    else:
        c = y.row
        if b == c:
            raw.append(((a, c), 1))
        if a == c:
            raw.append(((b, c), 1))

    terms = []
    for (i, j), coefficient in raw:
        normalized = _skew(i, j)
        if normalized is not None:
            label, sign = normalized
            terms.append((label, sign * coefficient))
    return terms


def so_char2(n: int) -> LieAlgebra:
    """
    Skew-symmetric matrices in characteristic 2.

    Basis {e'_ab : a < b} together with the diagonals e_cc. The table is only
    a Lie algebra after reduction mod 2.
    """
    labels = tuple(
        sorted(
            [BasisLabel(a, b, LabelKind.SKEW) for a, b in combinations(range(1, n + 1), 2)]
            + [BasisLabel(c, c) for c in range(1, n + 1)]
        )
    )
    index = {label: k for k, label in enumerate(labels)}
    brackets: dict[tuple[int, int], BracketTerms] = {}

    for p, q in combinations(range(len(labels)), 2):
        terms = _collect(
            (index[label], c) for label, c in _so_bracket(labels[p], labels[q])
        )
        if terms:
            brackets[(p, q)] = terms

    return LieAlgebra(name=f"so_{n}", n=n, labels=labels, brackets=brackets)


def validate_lie(g: LieAlgebra, ring: CoefficientRing | None = None) -> bool:
    """
    Check the Jacobi identity on all basis triples.

    Args:
        g: Algebra to check
        ring: Ring to reduce structure constants into (default Z)

    Returns:
        True iff [[x,y],z] + [[y,z],x] + [[z,x],y] = 0 for every triple
    """
    ring = ring or INTEGERS
    failures = []

    for i, j, k in combinations(range(g.rank), 3):
        xi, xj, xk = {i: 1}, {j: 1}, {k: 1}
        total: dict[int, int] = defaultdict(int)
        for first, second, third in ((xi, xj, xk), (xj, xk, xi), (xk, xi, xj)):
            for index, c in g.bracket_vectors(g.bracket_vectors(first, second), third).items():
                total[index] += c
        if any(not ring.is_zero(c) for c in total.values()):
            failures.append((i, j, k))

    if failures:
        i, j, k = failures[0]
        logger.info(
            f"Jacobi identity fails for {g.name} on {len(failures)} triples, "
            f"first ({g.labels[i]}, {g.labels[j]}, {g.labels[k]})"
        )
        return False
    return True


__all__ = [
    "BasisLabel",
    "LabelKind",
    "LieAlgebra",
    "NotClosed",
    "dgn",
    "gl_full",
    "gl_poset",
    "matrix_unit_algebra",
    "nil",
    "so_char2",
    "sol",
    "validate_lie",
]
