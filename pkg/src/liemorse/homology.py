"""
Exact homology of chain complexes.

Integral homology comes from a sparse Smith normal form of every boundary
matrix; homology over Q and Z/p from exact ranks computed with sympy's
DomainMatrix. Cross-checks: universal coefficients, Kunneth over a field,
duality between homology and cohomology, Euler characteristics.

Example usage:
    from liemorse.chain import build_ce_complex
    from liemorse.homology import homology_over_Z
    from liemorse.lie import sol
    from liemorse.ring import INTEGERS

    table = homology_over_Z(build_ce_complex(sol(3), INTEGERS))
    print(table.modules[3])   # Z + Z_2
"""

import logging
import os
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from sympy import factorint, isprime
from tqdm import tqdm

from liemorse.chain import ChainComplex, dualize
from liemorse.ring import INTEGERS, CoefficientRing, RingKind, modular
from liemorse.sparse import SparseMatrix

logger = logging.getLogger(__name__)


# ============================================================================
# Homology modules
# ============================================================================


@dataclass(frozen=True)
class HomologyModule:
    """
    A finitely generated abelian group Z^free + Z_d1 + ... + Z_dr with d1 | d2 | ... | dr.

    Over a field only free_rank is used (the dimension).
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError(f"Negative free rank {self.free_rank}")
        if any(d < 2 for d in self.torsion):
            raise ValueError(f"Elementary divisors must be at least 2: {self.torsion}")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError(f"Elementary divisors do not form a chain: {self.torsion}")

    @classmethod
    def from_divisors(cls, free_rank: int, divisors: Iterable[int]) -> "HomologyModule":
        """Module from arbitrary diagonal entries; 1s are dropped."""
        return cls(free_rank, tuple(d for d in invariant_factor_chain(divisors) if d > 1))

    @classmethod
    def from_primary(cls, free_rank: int, primary: Mapping[int, int]) -> "HomologyModule":
        """
        Module from a primary decomposition.

        Example:
            >>> str(HomologyModule.from_primary(0, {2: 51, 4: 1, 3: 22}))
            'Z_2^51 + Z_4 + Z_3^22'
        """
        divisors = [q for q, multiplicity in primary.items() for _ in range(multiplicity)]
        return cls.from_divisors(free_rank, divisors)

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def primary_torsion(self) -> Counter:
        """Prime-power cyclic summands with multiplicities."""
        counts: Counter = Counter()
        for d in self.torsion:
            for q, e in factorint(d).items():
                counts[q**e] += 1
        return counts

    def _ordered_primary(self) -> list[tuple[int, int]]:
        def key(item: tuple[int, int]) -> tuple[int, int]:
            q = item[0]
            return min(factorint(q)), q

        return sorted(self.primary_torsion().items(), key=key)

    def torsion_string(self) -> str:
        """Primary torsion as "2^3·4^1", primes ascending and powers ascending."""
        return "·".join(f"{q}^{m}" for q, m in self._ordered_primary())

    def has_summand(self, other: "HomologyModule") -> bool:
        """
        True iff other is isomorphic to a direct summand of this module.

        Example:
            >>> HomologyModule(1, (2, 6)).has_summand(HomologyModule(0, (6,)))
            True
        """
        mine = self.primary_torsion()
        return self.free_rank >= other.free_rank and all(
            mine[q] >= m for q, m in other.primary_torsion().items()
        )

    def torsion_count(self, p: int) -> int:
        """Number of elementary divisors divisible by p."""
        return sum(1 for d in self.torsion if d % p == 0)

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        for q, m in self._ordered_primary():
            parts.append(f"Z_{q}" if m == 1 else f"Z_{q}^{m}")
        return " + ".join(parts) if parts else "0"


@dataclass
class HomologyTable:
    """
    Homology of one complex, degree -> module.

    Attributes:
        ring: Coefficient ring the homology was computed over
        modules: degree -> HomologyModule (dimension in free_rank over a field)
        name: Name of the complex
    """

    ring: CoefficientRing
    modules: dict[int, HomologyModule] = field(default_factory=dict)
    name: str = ""

    @property
    def degrees(self) -> list[int]:
        return sorted(self.modules)

    def dimensions(self) -> list[int]:
        """Free ranks (dimensions over a field) in degree order."""
        return [self.modules[k].free_rank for k in self.degrees]

    def __getitem__(self, k: int) -> HomologyModule:
        return self.modules[k]

    def describe(self, k: int) -> str:
        """Module in degree k; over a field "Q^3" or "(Z/2)^3" instead of Z notation."""
        module = self.modules[k]
        if not self.ring.is_field:
            return str(module)
        if module.free_rank == 0:
            return "0"
        base = str(self.ring) if self.ring.kind == RingKind.RATIONALS else f"({self.ring})"
        if module.free_rank == 1:
            return str(self.ring)
        return f"{base}^{module.free_rank}"

    def to_frame(self, n: int | None = None) -> Any:
        """Rows n, k, free, torsion for CSV and text rendering."""
        import pandas as pd

        return pd.DataFrame(
            [
                {
                    "n": n if n is not None else "",
                    "k": k,
                    "free": module.free_rank,
                    "torsion": module.torsion_string(),
                    "H_k": self.describe(k),
                }
                for k, module in sorted(self.modules.items())
            ]
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "ring": str(self.ring),
            "homology": [
                {
                    "k": k,
                    "free": module.free_rank,
                    "torsion": list(module.torsion),
                    "primary": {str(q): m for q, m in module._ordered_primary()},
                }
                for k, module in sorted(self.modules.items())
            ],
        }


# ============================================================================
# Smith normal form
# ============================================================================


@dataclass
class SmithForm:
    """Invariant factors d1 | d2 | ... | dr (all positive, 1s included) and the rank r."""

    divisors: list[int]
    rank: int


def invariant_factor_chain(diagonal: Iterable[int]) -> list[int]:
    """
    Invariant factors of a diagonal matrix.

    Merges the primary decompositions of the entries: for each prime the
    largest powers go to the last factors. Zeros are dropped.

    Example:
        >>> invariant_factor_chain([2, 3])
        [1, 6]
    """
    entries = [abs(d) for d in diagonal if d]
    exponents: dict[int, list[int]] = {}
    for d in entries:
        for q, e in factorint(d).items():
            exponents.setdefault(q, []).append(e)

    factors = [1] * len(entries)
    for q, powers in exponents.items():
        for position, e in enumerate(sorted(powers, reverse=True)):
            factors[len(entries) - 1 - position] *= q**e
    return factors


class _Elimination:
    """Working copy of an integer matrix with row and column indexes."""

    def __init__(self, matrix: SparseMatrix) -> None:
        self.cols: dict[int, dict[int, int]] = {
            c: {r: int(v) for r, v in column.items()} for c, column in matrix.columns.items()
        }
        self.rows: dict[int, dict[int, int]] = {}
        for c, column in self.cols.items():
            for r, v in column.items():
                self.rows.setdefault(r, {})[c] = v

    def set(self, r: int, c: int, v: int) -> None:
        if v:
            self.rows.setdefault(r, {})[c] = v
            self.cols.setdefault(c, {})[r] = v
            return
        for index, outer, inner in ((self.rows, r, c), (self.cols, c, r)):
            line = index.get(outer)
            if line is not None:
                line.pop(inner, None)
                if not line:
                    del index[outer]

    def add_row(self, target: int, source: int, factor: int) -> None:
        """row[target] -= factor * row[source]"""
        for c, v in list(self.rows[source].items()):
            self.set(target, c, self.rows.get(target, {}).get(c, 0) - factor * v)

    def add_col(self, target: int, source: int, factor: int) -> None:
        """col[target] -= factor * col[source]"""
        for r, v in list(self.cols[source].items()):
            self.set(r, target, self.cols.get(target, {}).get(r, 0) - factor * v)

    def remove(self, r: int, c: int) -> None:
        for other in self.rows.pop(r, {}):
            self.cols[other].pop(r, None)
            if not self.cols[other]:
                del self.cols[other]
        for other in self.cols.pop(c, {}):
            self.rows[other].pop(c, None)
            if not self.rows[other]:
                del self.rows[other]

    def clear_column(self, r0: int, c0: int) -> int | None:
        """Reduce column c0 by the pivot row; return a row left with a smaller remainder."""
        a = self.rows[r0][c0]
        for r, v in list(self.cols[c0].items()):
            if r == r0:
                continue
            self.add_row(r, r0, v // a)
            if self.cols[c0].get(r):
                return r
        return None

    def clear_row(self, r0: int, c0: int) -> int | None:
        a = self.rows[r0][c0]
        for c, v in list(self.rows[r0].items()):
            if c == c0:
                continue
            self.add_col(c, c0, v // a)
            if self.rows[r0].get(c):
                return c
        return None


def smith_normal_form(matrix: SparseMatrix) -> SmithForm:
    """
    Smith normal form of a sparse integer matrix.

    Unit pivots are eliminated first, scanning columns with fewest entries
    and preferring the shortest pivot row. The remaining block uses the
    entry of least absolute value (ties: smallest Markowitz count) and
    Euclidean row and column reduction until the pivot is alone in its row
    and column. The resulting diagonal is normalized into invariant factors.

    Args:
        matrix: Integer matrix

    Returns:
        SmithForm with divisors d1 | d2 | ... and the rank

    Example:
        >>> smith_normal_form(SparseMatrix.from_dense([[2, 0], [0, 3]])).divisors
        [1, 6]
    """
    work = _Elimination(matrix)
    diagonal: list[int] = []

    # unit pivots: no fill beyond the pivot row
    progress = True
    while progress and work.cols:
        progress = False
        for c in sorted(work.cols, key=lambda col: len(work.cols[col])):
            column = work.cols.get(c)
            if not column:
                continue
            units = [r for r, v in column.items() if abs(v) == 1]
            if not units:
                continue
            r0 = min(units, key=lambda r: (len(work.rows[r]), r))
            a = column[r0]
            for r, v in list(column.items()):
                if r != r0:
                    work.add_row(r, r0, v * a)
            work.remove(r0, c)
            diagonal.append(1)
            progress = True

    unit_count = len(diagonal)

    while work.cols:
        r0, c0 = min(
            ((r, c) for c, column in work.cols.items() for r in column),
            key=lambda rc: (
                abs(work.rows[rc[0]][rc[1]]),
                (len(work.rows[rc[0]]) - 1) * (len(work.cols[rc[1]]) - 1),
                rc,
            ),
        )
        while True:
            smaller_row = work.clear_column(r0, c0)
            if smaller_row is not None:
                r0 = smaller_row
                continue
            smaller_col = work.clear_row(r0, c0)
            if smaller_col is not None:
                c0 = smaller_col
                continue
            break
        diagonal.append(abs(work.rows[r0][c0]))
        work.remove(r0, c0)

    divisors = invariant_factor_chain(diagonal)
    logger.debug(
        f"SNF of {matrix.rows}x{matrix.cols}: rank {len(divisors)}, "
        f"{unit_count} unit pivots, nontrivial {[d for d in divisors if d > 1]}"
    )
    return SmithForm(divisors=divisors, rank=len(divisors))


# ============================================================================
# Ranks over fields
# ============================================================================


def field_rank(matrix: SparseMatrix, ring: CoefficientRing) -> int:
    """
    Exact rank over Q or Z/p using sympy's sparse DomainMatrix.

    Raises:
        CompositeModulus: For Z/m with m composite
        ValueError: For Z
    """
    from sympy.polys.matrices import DomainMatrix

    domain = ring.field_domain()
    if matrix.is_zero():
        return 0

    if ring.kind == RingKind.RATIONALS:
        convert = lambda v: domain(v.numerator, v.denominator)  # noqa: E731
    else:
        convert = lambda v: domain(int(ring.normalize(v)))  # noqa: E731

    rows: dict[int, dict[int, Any]] = {}
    for r, c, v in matrix.entries():
        value = ring.normalize(v)
        if value:
            rows.setdefault(r, {})[c] = convert(value)
    if not rows:
        return 0
    return int(DomainMatrix(rows, matrix.shape, domain).rank())


# ============================================================================
# Homology
# ============================================================================


def _computable_degrees(complex_: ChainComplex) -> list[int]:
    top = complex_.top_degree
    return [
        k
        for k in complex_.degrees
        if (k == 0 or k - 1 in complex_.bases) and (k == top or k + 1 in complex_.bases)
    ]


def _select_degrees(complex_: ChainComplex, degrees: Iterable[int] | None) -> list[int]:
    available = _computable_degrees(complex_)
    if degrees is None:
        return available
    stored = sorted({k + complex_.degree_offset for k in degrees})
    missing = [k for k in stored if k not in available]
    if missing:
        raise KeyError(f"Degree {missing[0] - complex_.degree_offset} is outside the built window")
    return stored


def _workers(threads: int | None) -> int:
    return threads if threads and threads > 0 else (os.cpu_count() or 1)


def homology_over_Z(  # noqa: N802
    complex_: ChainComplex,
    degrees: Iterable[int] | None = None,
    threads: int | None = 1,
    progress: bool = False,
) -> HomologyTable:
    """
    Integral homology from Smith normal forms.

    H_k free rank = dim C_k - rank d_k - rank d_(k+1); torsion = divisors of
    d_(k+1) above 1. Each boundary matrix is factored once; distinct
    matrices are factored in parallel.

    Args:
        complex_: Complex over Z
        degrees: Degrees to report (default: every degree the complex allows)
        threads: Worker threads (None: all cores)
        progress: Show a tqdm progress bar

    Returns:
        HomologyTable keyed by geometric degree
    """
    if complex_.ring != INTEGERS:
        raise ValueError(f"Integral homology needs a complex over Z, got {complex_.ring}")

    wanted = _select_degrees(complex_, degrees)
    needed = sorted({d for k in wanted for d in (k, k + 1)})
    logger.info(
        f"Integral homology of {complex_.name or 'complex'} in degrees "
        f"{[k - complex_.degree_offset for k in wanted]}"
    )

    def factor(k: int) -> tuple[int, SmithForm]:
        return k, smith_normal_form(complex_.boundary(k))

    with ThreadPoolExecutor(max_workers=_workers(threads)) as pool:
        forms = dict(
            tqdm(
                pool.map(factor, needed),
                total=len(needed),
                desc="Smith normal forms",
                disable=not progress,
            )
        )

    table = HomologyTable(ring=INTEGERS, name=complex_.name)
    for k in wanted:
        free = len(complex_.bases[k]) - forms[k].rank - forms[k + 1].rank
        table.modules[k - complex_.degree_offset] = HomologyModule.from_divisors(
            free, forms[k + 1].divisors
        )
    return table


def homology_over_field(
    complex_: ChainComplex,
    ring: CoefficientRing | None = None,
    degrees: Iterable[int] | None = None,
    threads: int | None = 1,
) -> HomologyTable:
    """
    Homology dimensions over Q or Z/p.

    Args:
        complex_: Complex over the field, or over Z when ring is given
        ring: Field to reduce the entries into (default: the complex's ring)
        degrees: Degrees to report

    Raises:
        CompositeModulus: For Z/m with m composite
        ValueError: For Z
    """
    ring = ring or complex_.ring
    ring.field_domain()

    wanted = _select_degrees(complex_, degrees)
    needed = sorted({d for k in wanted for d in (k, k + 1)})
    logger.info(f"Homology of {complex_.name or 'complex'} over {ring}")

    def rank(k: int) -> tuple[int, int]:
        return k, field_rank(complex_.boundary(k).reduced(ring), ring)

    with ThreadPoolExecutor(max_workers=_workers(threads)) as pool:
        ranks = dict(pool.map(rank, needed))

    table = HomologyTable(ring=ring, name=complex_.name)
    for k in wanted:
        dim = len(complex_.bases[k]) - ranks[k] - ranks[k + 1]
        table.modules[k - complex_.degree_offset] = HomologyModule(dim)
    return table


def compute_homology(complex_: ChainComplex, **kwargs: Any) -> HomologyTable:
    """Integral homology over Z, dimensions over a field; Z/m composite is rejected."""
    if complex_.ring == INTEGERS:
        return homology_over_Z(complex_, **kwargs)
    kwargs.pop("progress", None)
    return homology_over_field(complex_, **kwargs)


def cohomology_over_Z(complex_: ChainComplex, threads: int | None = 1) -> HomologyTable:  # noqa: N802
    """
    Integral cohomology via the dual complex.

    H^k of the complex is H_(top-k) of its dual.
    """
    dual = dualize(complex_)
    homology = homology_over_Z(dual, threads=threads)
    # geometric degree k of the dual sits at stored degree k + offset
    shift = complex_.top_degree - 2 * complex_.degree_offset
    return HomologyTable(
        ring=INTEGERS,
        modules={shift - k: module for k, module in sorted(homology.modules.items())},
        name=f"{complex_.name} (cohomology)",
    )


def betti_mod_p_from_integral(table: HomologyTable, p: int) -> list[int]:
    """
    Dimensions over Z/p from integral homology by universal coefficients.

    dim H_k(Z/p) = free(H_k) + #{d in T(H_k): p | d} + #{d in T(H_(k-1)): p | d}
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    dims = []
    for k in table.degrees:
        below = table.modules.get(k - 1)
        dims.append(
            table.modules[k].free_rank
            + table.modules[k].torsion_count(p)
            + (below.torsion_count(p) if below else 0)
        )
    return dims


def kunneth_field_dims(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """
    Dimensions of a tensor product over a field: c_k = sum_(i+j=k) a_i b_j.

    Example:
        >>> kunneth_field_dims([1, 1], [1, 1])
        [1, 2, 1]
    """
    if not a or not b:
        return []
    result = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            result[i + j] += x * y
    return result


def euler_characteristic(complex_: ChainComplex) -> int:
    return sum((-1) ** (k - complex_.degree_offset) * len(basis) for k, basis in complex_.bases.items())


def homology_euler_characteristic(table: HomologyTable) -> int:
    return sum((-1) ** k * module.free_rank for k, module in table.modules.items())


def mod_p_table(complex_: ChainComplex, p: int, threads: int | None = 1) -> HomologyTable:
    """Homology of an integral complex with coefficients reduced mod a prime p."""
    return homology_over_field(complex_, ring=modular(p), threads=threads)


__all__ = [
    "HomologyModule",
    "HomologyTable",
    "SmithForm",
    "betti_mod_p_from_integral",
    "cohomology_over_Z",
    "compute_homology",
    "euler_characteristic",
    "field_rank",
    "homology_euler_characteristic",
    "homology_over_Z",
    "homology_over_field",
    "invariant_factor_chain",
    "kunneth_field_dims",
    "mod_p_table",
    "smith_normal_form",
]
