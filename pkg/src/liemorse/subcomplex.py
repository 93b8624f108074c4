"""
p-weight subcomplexes and their tensor factorization.

The weights of a wedge (column count minus row count per index) are
preserved by the boundary, so the wedges whose weights are all divisible by
p span a subcomplex. Over Z/p it is what survives the normalization
matching, and it splits as the p-subcomplex of the strict algebra tensored
with the exterior algebra on the diagonals.

Example usage:
    from liemorse.poset import chain
    from liemorse.subcomplex import predicted_mod_p_dims

    predicted_mod_p_dims(chain(4), 2)   # [1, 4, 6, 7, 15, 26, 24, 11, 2, 0, 0]
"""

import logging
from collections import Counter
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from math import comb

from liemorse.chain import (
    DEFAULT_MAX_WEDGES,
    Cell,
    ChainComplex,
    ComplexKind,
    SubcomplexError,
    UnsupportedBasis,
    Wedge,
    build_ce_complex,
    canonical_reordering_sign,
    matrix_weights,
    wedge_from_indices,
    wedge_indices,
)
from liemorse.homology import (
    HomologyModule,
    HomologyTable,
    homology_over_field,
    homology_over_Z,
    kunneth_field_dims,
)
from liemorse.lie import BasisLabel, LieAlgebra, gl_poset, matrix_unit_algebra
from liemorse.morse import normalization_reduce
from liemorse.poset import Poset
from liemorse.ring import INTEGERS, CoefficientRing, Scalar, modular
from liemorse.sparse import SparseMatrix

logger = logging.getLogger(__name__)


@dataclass
class FactorizationReport:
    """Outcome of comparing a p-subcomplex with its tensor factorization."""

    p: int
    checked_entries: int = 0
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


@dataclass(frozen=True)
class TorsionWitness:
    """
    Critical wedge of an interval [a, b] with t+1 elements.

    Attributes:
        wedge: Bitset in the basis of gl on the poset
        name: Display name of the wedge
        degree: 2t - 1
        order: t, the order of the torsion class it carries
    """

    wedge: Wedge
    name: str
    degree: int
    order: int


# ============================================================================
# Building p-subcomplexes
# ============================================================================


def weight_filter(g: LieAlgebra, p: int) -> Callable[[Wedge], bool]:
    """Predicate: every weight of the wedge is divisible by p."""
    if not g.has_matrix_units:
        raise UnsupportedBasis(f"{g.name} has no matrix-unit basis")

    def keep(w: Wedge) -> bool:
        return all(weight % p == 0 for weight in matrix_weights(g, w).values())

    return keep


def build_p_subcomplex(
    g: LieAlgebra,
    ring: CoefficientRing,
    p: int,
    degrees: Sequence[int] | None = None,
    max_wedges: int = DEFAULT_MAX_WEDGES,
    threads: int = 1,
    progress: bool = False,
) -> ChainComplex:
    """Build C_(.,p)(g) directly from the algebra without the full complex."""
    complex_ = build_ce_complex(
        g,
        ring,
        degrees=degrees,
        wedge_filter=weight_filter(g, p),
        max_wedges=max_wedges,
        threads=threads,
        progress=progress,
    )
    complex_.name = f"C_p={p}({g.name})"
    logger.info(f"p-subcomplex of {g.name} for p={p}: sizes {complex_.dimensions()}")
    return complex_


def p_subcomplex(complex_: ChainComplex, p: int) -> ChainComplex:
    """
    Restrict a CE complex to the wedges whose weights are all divisible by p.

    Raises:
        UnsupportedBasis: For complexes without matrix units
        SubcomplexError: If a boundary entry leaves the kept wedges
    """
    if complex_.algebra is None:
        raise UnsupportedBasis("p-subcomplexes need a Chevalley-Eilenberg complex")
    keep = weight_filter(complex_.algebra, p)
    kept = {k: [w for w in basis if keep(w)] for k, basis in complex_.bases.items()}  # type: ignore[arg-type]

    for k, matrix in complex_.boundaries.items():
        kept_rows = {complex_.index_of(k - 1, w) for w in kept[k - 1]}
        for w in kept[k]:
            for r in matrix.column(complex_.index_of(k, w)):
                if r not in kept_rows:
                    raise SubcomplexError(
                        f"Boundary of {complex_.wedge_name(w)} leaves the p={p} subcomplex"
                    )

    restricted = complex_.restrict(kept)
    restricted.name = f"C_p={p}({complex_.name})"
    return restricted


# ============================================================================
# Tensor products
# ============================================================================


def tensor_complex(left: ChainComplex, right: ChainComplex) -> ChainComplex:
    """
    Tensor product with d(a (x) b) = da (x) b + (-1)^|a| a (x) db.

    Cells are (left degree, left cell, right cell), ordered by left degree,
    then left index, then right index.
    """
    if left.ring != right.ring:
        raise ValueError(f"Rings differ: {left.ring} and {right.ring}")
    ring = left.ring
    top = left.top_degree + right.top_degree

    bases: dict[int, list[Cell]] = {}
    for k in range(top + 1):
        bases[k] = [
            (i, a, b)
            for i in range(max(0, k - right.top_degree), min(k, left.top_degree) + 1)
            for a in left.bases.get(i, [])
            for b in right.bases.get(k - i, [])
        ]

    boundaries: dict[int, SparseMatrix] = {}
    for k in range(1, top + 1):
        rows = {cell: r for r, cell in enumerate(bases[k - 1])}
        entries: list[tuple[int, int, Scalar]] = []
        for c, (i, a, b) in enumerate(bases[k]):
            j = k - i
            if i > 0:
                for r, v in left.boundary(i).column(left.index_of(i, a)).items():
                    entries.append((rows[(i - 1, left.bases[i - 1][r], b)], c, v))
            if j > 0:
                sign = -1 if i & 1 else 1
                for r, v in right.boundary(j).column(right.index_of(j, b)).items():
                    entries.append((rows[(i, a, right.bases[j - 1][r])], c, sign * v))
        boundaries[k] = SparseMatrix.from_entries(len(bases[k - 1]), len(bases[k]), entries, ring)

    return ChainComplex(
        ring=ring,
        bases=bases,
        boundaries=boundaries,
        top_degree=top,
        kind=ComplexKind.TENSOR,
        name=f"{left.name} (x) {right.name}",
        factors=(left, right),
    )


def _strict_and_diagonal(poset: Poset) -> tuple[LieAlgebra, LieAlgebra, LieAlgebra]:
    full = gl_poset(poset)
    strict = gl_poset(poset, strict=True)
    diagonal = matrix_unit_algebra(poset.n, [(x, x) for x in poset.elements], name=f"dgn_{poset.n}")
    return full, strict, diagonal


def verify_tensor_factorization(
    poset: Poset, p: int, max_wedges: int = DEFAULT_MAX_WEDGES
) -> FactorizationReport:
    """
    Compare the normalization-reduced complex of gl on the poset over Z/p
    with C_(.,p)(strict) (x) exterior(diagonals).

    The full complex is built and reduced with the normalization matching;
    its critical wedges must be exactly the wedges with all weights divisible
    by p. A wedge w then splits into its nondiagonal part N and diagonal
    part D; w = eps_w * (N ^ D) with eps_w the sign of the shuffle. The check
    is d[w', w] == eps_w * eps_w' * d_T[(N', D'), (N, D)] for every pair of
    critical cells.
    """
    ring = modular(p)
    full, strict, diagonal = _strict_and_diagonal(poset)
    unreduced = build_ce_complex(full, ring, max_wedges=max_wedges)
    subcomplex = normalization_reduce(unreduced)
    left = build_p_subcomplex(strict, ring, p, max_wedges=max_wedges)
    right = build_ce_complex(diagonal, ring)
    tensor = tensor_complex(left, right)

    strict_position = {label: i for i, label in enumerate(strict.labels)}
    diagonal_position = {label: i for i, label in enumerate(diagonal.labels)}

    def split(w: Wedge) -> tuple[int, Cell]:
        nondiagonal, diagonals = 0, 0
        strict_bits, diagonal_bits = [], []
        for i in wedge_indices(w):
            label: BasisLabel = full.labels[i]
            if label.is_diagonal:
                diagonals |= 1 << i
                diagonal_bits.append(diagonal_position[label])
            else:
                nondiagonal |= 1 << i
                strict_bits.append(strict_position[label])
        sign = canonical_reordering_sign(nondiagonal, diagonals)
        cell = (len(strict_bits), wedge_from_indices(strict_bits), wedge_from_indices(diagonal_bits))
        return sign, cell

    report = FactorizationReport(p=p)
    keep = weight_filter(full, p)
    for k in range(unreduced.top_degree + 1):
        divisible = [w for w in unreduced.bases[k] if keep(w)]  # type: ignore[arg-type]
        if subcomplex.bases[k] != divisible:
            report.mismatches.append(
                f"degree {k}: {len(subcomplex.bases[k])} critical wedges vs "
                f"{len(divisible)} wedges with weights divisible by {p}"
            )
    if report.mismatches:
        return report

    for k in range(subcomplex.top_degree + 1):
        if len(subcomplex.bases[k]) != len(tensor.bases[k]):
            report.mismatches.append(
                f"degree {k}: {len(subcomplex.bases[k])} wedges vs {len(tensor.bases[k])} tensor cells"
            )
    if report.mismatches:
        return report

    images = {
        k: [split(w) for w in subcomplex.bases[k]]  # type: ignore[arg-type]
        for k in range(subcomplex.top_degree + 1)
    }
    for k in range(1, subcomplex.top_degree + 1):
        original = subcomplex.boundary(k)
        product = tensor.boundary(k)
        for c, (sign_c, cell_c) in enumerate(images[k]):
            tc = tensor.index_of(k, cell_c)
            expected = {
                r: ring.normalize(v) for r, v in product.column(tc).items()
            }
            actual: dict[int, Scalar] = {}
            for r, v in original.column(c).items():
                sign_r, cell_r = images[k - 1][r]
                actual[tensor.index_of(k - 1, cell_r)] = ring.normalize(sign_c * sign_r * v)
            report.checked_entries += len(expected) + len(actual)
            if actual != expected:
                report.mismatches.append(
                    f"degree {k}: column {subcomplex.wedge_name(subcomplex.bases[k][c])} differs"
                )

    logger.info(
        f"Tensor factorization for p={p} on {poset.n} elements: "
        f"{'ok' if report.ok else f'{len(report.mismatches)} mismatches'}"
    )
    return report


def predicted_mod_p_dims(poset: Poset, p: int, kmax: int | None = None) -> list[int]:
    """
    Dimensions of H_*(gl on the poset; Z/p) from the factorization.

    Homology of C_(.,p)(strict) over Z/p convolved with the binomials C(n, j)
    of the exterior algebra on the n diagonals.
    """
    ring = modular(p)
    _, strict, _ = _strict_and_diagonal(poset)
    left = build_p_subcomplex(strict, ring, p)
    left_dims = homology_over_field(left).dimensions()
    dims = kunneth_field_dims(left_dims, [comb(poset.n, j) for j in range(poset.n + 1)])
    if kmax is not None:
        dims = (dims + [0] * (kmax + 1))[: kmax + 1]
    return dims


def integral_p_complex_homology(
    poset: Poset, p: int, strict: bool = True, threads: int | None = 1
) -> HomologyTable:
    """Integral homology of the p-weight subcomplex of gl on the poset (strict by default)."""
    g = gl_poset(poset, strict=strict)
    return homology_over_Z(build_p_subcomplex(g, INTEGERS, p), threads=threads)


def p_torsion(table: HomologyTable, p: int) -> Counter:
    """p-power primary summands across all degrees, with multiplicities."""
    counts: Counter = Counter()
    for module in table.modules.values():
        for q, m in module.primary_torsion().items():
            if q % p == 0:
                counts[q] += m
    return counts


def shifted_binomial_dims(
    n: int, terms: Sequence[tuple[int, int]], kmax: int | None = None
) -> list[int]:
    """
    Evaluate C(n, k) + sum c * C(n, k - s) over (shift s, coefficient c) terms.

    Example:
        >>> shifted_binomial_dims(3, [(3, 1)])
        [1, 3, 3, 2, 3, 3, 1]
    """
    if kmax is None:
        kmax = n * (n + 1) // 2

    def binomial(k: int) -> int:
        return comb(n, k) if 0 <= k <= n else 0

    return [binomial(k) + sum(c * binomial(k - s) for s, c in terms) for k in range(kmax + 1)]


def first_p_torsion_dim(n: int, p: int) -> int:
    """dim H_(2p-1)(sol_n; Z/p), the lowest degree with p-torsion: C(n, 2p-1) + C(n-p+1, 2)."""
    return comb(n, 2 * p - 1) + comb(max(n - p + 1, 0), 2)


def interval_torsion_witness(poset: Poset, a: int, b: int) -> TorsionWitness:
    """
    The critical wedge of the interval [a, b] = {a, x_1, ..., x_t = b}.

    v = e_(a x_1) ... e_(a x_t) e_(x_1 x_t) ... e_(x_(t-1) x_t); its weights
    are -t at a, t at b and 0 elsewhere.

    Raises:
        NotComparable: If a is not below b
        ValueError: If a == b
    """
    interval = poset.interval(a, b)
    if len(interval) < 2:
        raise ValueError(f"Interval [{a}, {b}] has a single element")
    inner = [x for x in interval if x != a]
    t = len(inner)
    g = gl_poset(poset)
    units = [BasisLabel(a, x) for x in inner] + [BasisLabel(x, b) for x in inner if x != b]
    w = wedge_from_indices(g.index_of(label) for label in units)
    name = "^".join(str(g.labels[i]) for i in wedge_indices(w))
    return TorsionWitness(wedge=w, name=name, degree=2 * t - 1, order=t)


@dataclass
class WitnessHomology:
    """Integral homology of gl on a poset in the degree of a torsion witness."""

    witness: TorsionWitness
    module: HomologyModule
    critical: bool

    @property
    def ok(self) -> bool:
        """The witness survives the reduction and H has a Z_t summand."""
        cyclic = HomologyModule(0, (self.witness.order,))
        return self.critical and self.module.has_summand(cyclic)


def witness_homology(
    poset: Poset,
    a: int,
    b: int,
    threads: int | None = None,
    max_wedges: int = DEFAULT_MAX_WEDGES,
) -> WitnessHomology:
    """
    Compute H_(2t-1)(gl on the poset; Z) for the witness of [a, b].

    Only the window around degree 2t - 1 is built. It is reduced with the
    normalization matching before the Smith normal form.

    Raises:
        NotComparable: If a is not below b
        ComplexTooLarge: If the window exceeds max_wedges
    """
    witness = interval_torsion_witness(poset, a, b)
    k = witness.degree
    complex_ = build_ce_complex(gl_poset(poset), INTEGERS, degrees=[k], max_wedges=max_wedges)
    reduced = normalization_reduce(complex_)
    module = homology_over_Z(reduced, degrees=[k], threads=threads)[k]
    critical = reduced.contains(k, witness.wedge)
    logger.info(f"H_{k} around witness {witness.name}: {module} (critical: {critical})")
    return WitnessHomology(witness, module, critical)


__all__ = [
    "FactorizationReport",
    "TorsionWitness",
    "WitnessHomology",
    "build_p_subcomplex",
    "first_p_torsion_dim",
    "integral_p_complex_homology",
    "interval_torsion_witness",
    "p_subcomplex",
    "p_torsion",
    "predicted_mod_p_dims",
    "shifted_binomial_dims",
    "tensor_complex",
    "verify_tensor_factorization",
    "weight_filter",
    "witness_homology",
]
