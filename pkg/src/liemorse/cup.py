"""
Cup products on Chevalley-Eilenberg cohomology.

Products are evaluated on reduced complexes whose differential vanishes;
there the dual basis of the critical wedges is a basis of cohomology. The
shuffle sum over (i, j)-shuffles is computed as a sum over subsets a of the
target wedge, with the sign of the shuffle equal to the reordering sign of
a ^ (w minus a).

Example usage:
    from liemorse.cup import verify_exterior_algebra
    from liemorse.poset import chain
    from liemorse.ring import RATIONALS

    report = verify_exterior_algebra(chain(3), RATIONALS)
    report.ok   # True
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations

from sympy import isprime

from liemorse.chain import (
    ChainComplex,
    Wedge,
    build_ce_complex,
    canonical_reordering_sign,
    wedge_from_indices,
)
from liemorse.lie import BasisLabel, gl_poset
from liemorse.morse import normalization_reduce
from liemorse.poset import Poset
from liemorse.ring import CoefficientRing, RingKind, Scalar

logger = logging.getLogger(__name__)


class NonzeroDifferential(ValueError):
    """Raised when a dual basis is requested for a complex with nonzero boundary."""

    pass


class PreconditionViolated(ValueError):
    """Raised when the exterior-algebra structure is not available over the ring."""

    pass


@dataclass
class Cochain:
    """A functional on the degree-k cells: cell -> value, zeros omitted."""

    degree: int
    coefficients: dict[Wedge, Scalar] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not self.coefficients

    def scaled(self, factor: Scalar, ring: CoefficientRing) -> "Cochain":
        return Cochain(
            self.degree,
            {
                w: value
                for w, v in self.coefficients.items()
                if (value := ring.normalize(factor * v))
            },
        )


def cup_product(alpha: Cochain, beta: Cochain, complex_: ChainComplex) -> Cochain:
    """
    Cup product of two cochains on the cells of the complex.

    (a u b)(w) = sum over a-cells s inside w of sign(s, w - s) * a(s) * b(w - s),
    evaluated on every cell of degree i + j present in the complex.
    """
    ring = complex_.ring
    k = alpha.degree + beta.degree
    result: dict[Wedge, Scalar] = {}

    for w in complex_.bases.get(k, []):
        total: Scalar = 0
        for a, value in alpha.coefficients.items():
            if a & ~w:  # type: ignore[operator]
                continue
            b = w & ~a  # type: ignore[operator]
            other = beta.coefficients.get(b)
            if other:
                total += canonical_reordering_sign(a, b) * value * other
        total = ring.normalize(total)
        if total:
            result[w] = total  # type: ignore[index]
    return Cochain(k, result)


def graded_commutator_vanishes(alpha: Cochain, beta: Cochain, complex_: ChainComplex) -> bool:
    """Check a u b == (-1)^(ij) b u a."""
    sign = -1 if (alpha.degree * beta.degree) & 1 else 1
    forward = cup_product(alpha, beta, complex_)
    backward = cup_product(beta, alpha, complex_).scaled(sign, complex_.ring)
    return forward.coefficients == backward.coefficients


def cohomology_dual_basis(complex_: ChainComplex) -> dict[int, list[Cochain]]:
    """
    Dual functionals of the cells, one per cell, per degree.

    Raises:
        NonzeroDifferential: If any boundary matrix is nonzero
    """
    for k, matrix in complex_.boundaries.items():
        if not matrix.is_zero():
            raise NonzeroDifferential(
                f"d_{k} of {complex_.name or 'complex'} has {matrix.nnz} nonzero entries"
            )
    one = complex_.ring.normalize(1)
    return {
        k: [Cochain(k, {w: one}) for w in basis]  # type: ignore[dict-item]
        for k, basis in sorted(complex_.bases.items())
    }


# ============================================================================
# Exterior algebra structure
# ============================================================================


@dataclass
class ExteriorAlgebraReport:
    """
    Multiplicative structure of H*(gl on a poset) over a ring.

    Attributes:
        ring: Coefficient ring
        generators: Generator name -> degree (x1..xn, and y when present)
        table: (left, right) -> "+name", "-name" or "0"
        critical_count: Number of critical wedges of the reduced complex
        monomials_checked: Products compared with dual basis elements
        failures: Human-readable descriptions of failed checks
    """

    ring: CoefficientRing
    generators: dict[str, int] = field(default_factory=dict)
    table: dict[tuple[str, str], str] = field(default_factory=dict)
    critical_count: int = 0
    monomials_checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_frame(self):  # type: ignore[no-untyped-def]
        import pandas as pd

        names = list(self.generators)
        return pd.DataFrame(
            [[self.table.get((a, b), "") for b in names] for a in names],
            index=names,
            columns=names,
        )


def _check_ring(poset: Poset, ring: CoefficientRing) -> bool:
    """Return True when the extra generator y is present."""
    n = poset.n
    if ring.kind == RingKind.RATIONALS:
        return False
    if ring.kind == RingKind.MODULAR and isprime(ring.modulus):
        p = ring.modulus
        if p >= n:
            return False
        if p == n - 1:
            return poset.is_bounded()
    raise PreconditionViolated(
        f"Exterior algebra structure needs Q or Z/p with p >= {n} or p = {n - 1}, got {ring}"
    )


def top_interval_wedge(poset: Poset) -> Wedge:
    """e_ab ^ e_ax ^ e_xb over all x strictly between the least a and greatest b."""
    a, b = poset.minimum(), poset.maximum()
    if a is None or b is None:
        raise PreconditionViolated("Poset is not bounded")
    g = gl_poset(poset)
    labels = [BasisLabel(a, b)]
    for x in poset.elements:
        if x not in (a, b):
            labels.extend([BasisLabel(a, x), BasisLabel(x, b)])
    return wedge_from_indices(g.index_of(label) for label in labels)


def _describe(cochain: Cochain, complex_: ChainComplex) -> str:
    if cochain.is_zero():
        return "0"
    if len(cochain.coefficients) > 1:
        return " + ".join(
            f"{v}*{complex_.wedge_name(w)}^*" for w, v in sorted(cochain.coefficients.items())
        )
    ((w, v),) = cochain.coefficients.items()
    ring = complex_.ring
    if v == ring.normalize(1):
        return f"+{complex_.wedge_name(w)}^*"
    if v == ring.normalize(-1):
        return f"-{complex_.wedge_name(w)}^*"
    return f"{v}*{complex_.wedge_name(w)}^*"


def _is_unit_multiple(cochain: Cochain, wedge: Wedge, ring: CoefficientRing) -> bool:
    return set(cochain.coefficients) == {wedge} and ring.is_unit(cochain.coefficients[wedge])


def verify_exterior_algebra(poset: Poset, ring: CoefficientRing) -> ExteriorAlgebraReport:
    """
    Check that cohomology is an exterior algebra on the duals of the diagonals.

    Over Q or Z/p with p >= n the generators are x_i = (e_ii)^*. For a
    bounded poset and p = n - 1 there is one more generator y, dual to the
    wedge of the whole interval, of degree 2p - 1.

    Raises:
        PreconditionViolated: If the ring is outside these cases
    """
    with_y = _check_ring(poset, ring)
    g = gl_poset(poset)
    reduced = normalization_reduce(build_ce_complex(g, ring))
    duals = cohomology_dual_basis(reduced)
    one = ring.normalize(1)

    report = ExteriorAlgebraReport(ring=ring, critical_count=reduced.total_size())

    diagonal_bits = {x: 1 << g.diagonal_index(x) for x in poset.elements}  # type: ignore[operator]
    generators: dict[str, Cochain] = {
        f"x{x}": Cochain(1, {bit: one}) for x, bit in diagonal_bits.items()
    }
    y_wedge = None
    if with_y:
        y_wedge = top_interval_wedge(poset)
        generators["y"] = Cochain(y_wedge.bit_count(), {y_wedge: one})
    report.generators = {name: cochain.degree for name, cochain in generators.items()}

    for name, cochain in generators.items():
        (w,) = cochain.coefficients
        if not reduced.contains(cochain.degree, w):
            report.failures.append(f"{name} is not dual to a critical wedge")
    if report.failures:
        return report

    for left, alpha in generators.items():
        for right, beta in generators.items():
            report.table[(left, right)] = _describe(cup_product(alpha, beta, reduced), reduced)

    expected_count = 2 ** poset.n * (2 if with_y else 1)
    if report.critical_count != expected_count:
        report.failures.append(
            f"{report.critical_count} critical wedges, expected {expected_count}"
        )

    suffixes: list[tuple[str, Wedge, Cochain | None]] = [("", 0, None)]
    if y_wedge is not None:
        suffixes.append(("y", y_wedge, generators["y"]))

    for size in range(poset.n + 1):
        for subset in combinations(poset.elements, size):
            monomial = Cochain(0, {0: one})
            for x in subset:
                monomial = cup_product(monomial, generators[f"x{x}"], reduced)
            base = sum(diagonal_bits[x] for x in subset)
            for suffix, extra, factor in suffixes:
                product = monomial if factor is None else cup_product(monomial, factor, reduced)
                name = "x" + "".join(str(x) for x in subset) + suffix if subset or suffix else "1"
                report.monomials_checked += 1
                if not _is_unit_multiple(product, base | extra, ring):
                    report.failures.append(
                        f"{name} is {_describe(product, reduced)}, "
                        f"expected a unit multiple of {reduced.wedge_name(base | extra)}^*"
                    )

    if y_wedge is not None:
        square = cup_product(generators["y"], generators["y"], reduced)
        if not square.is_zero():
            report.failures.append(f"y^2 = {_describe(square, reduced)}")

    logger.info(
        f"Exterior algebra check for {g.name} over {ring}: "
        f"{report.monomials_checked} monomials, {len(report.failures)} failures"
    )
    return report


__all__ = [
    "Cochain",
    "ExteriorAlgebraReport",
    "NonzeroDifferential",
    "PreconditionViolated",
    "cohomology_dual_basis",
    "cup_product",
    "graded_commutator_vanishes",
    "top_interval_wedge",
    "verify_exterior_algebra",
]
