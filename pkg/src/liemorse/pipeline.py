"""
Job pipeline behind the command line: build, reduce, compute, render.

A JobSpec names one complex (an algebra family with its parameter, a poset
file, or a facets file), a coefficient ring, the degrees wanted and the
output options. run_homology and run_stats turn it into results; the
render helpers produce byte-stable text, CSV or JSON.

Example usage:
    from liemorse.pipeline import JobSpec, render_table, run_homology

    result = run_homology(JobSpec(family="sol", n=3, ring="Z"))
    print(render_table(result.table, "text", n=3))
"""

import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from sympy import isprime

from liemorse.chain import (
    DEFAULT_MAX_WEDGES,
    ChainComplex,
    build_ce_complex,
    load_facets_file,
    simplicial_chain_complex,
)
from liemorse.homology import HomologyTable, compute_homology
from liemorse.lie import LieAlgebra, dgn, gl_full, gl_poset, nil, so_char2, sol
from liemorse.morse import (
    Matching,
    MissingDiagonals,
    ReductionStats,
    critical_vertices,
    normalization_matching,
    reduction_stats,
)
from liemorse.poset import load_poset_file
from liemorse.ring import INTEGERS, CoefficientRing, parse_ring
from liemorse.subcomplex import build_p_subcomplex
from liemorse.utils import ensure_parent, group_degrees

logger = logging.getLogger(__name__)


class JobSpecError(ValueError):
    """Raised when a job's family, parameters and flags do not fit together."""

    pass


class Family(str, Enum):
    """Complex families selectable from the command line."""

    SOL = "sol"
    NIL = "nil"
    GL_POSET = "gl-poset"
    GL_POSET_STRICT = "gl-poset-strict"
    DGN = "dgn"
    SO2 = "so2"
    GL = "gl"
    SIMPLICIAL = "simplicial"


class ReduceMode(str, Enum):
    """Which reduction to apply before computing homology."""

    AUTO = "auto"
    NONE = "none"
    NORMALIZATION = "normalization"


class OutputFormat(str, Enum):
    TEXT = "text"
    CSV = "csv"
    JSON = "json"


SIZED_FAMILIES = {Family.SOL, Family.NIL, Family.DGN, Family.SO2, Family.GL}
POSET_FAMILIES = {Family.GL_POSET, Family.GL_POSET_STRICT}

# Families whose basis carries every diagonal e_xx
DIAGONAL_FAMILIES = {Family.SOL, Family.DGN, Family.SO2, Family.GL, Family.GL_POSET}


@dataclass
class JobSpec:
    """
    One homology or statistics job.

    Attributes:
        family: Complex family
        n: Size parameter for sol, nil, dgn, so2 and gl
        poset_file: Poset file for gl-poset and gl-poset-strict
        facets_file: Facets file for simplicial
        ring: Ring selector ("Z", "Q", "Z/p")
        degrees: Degrees to report; None means all
        output_format: text, csv or json
        reduce: auto, none or normalization
        p_subcomplex: Restrict to wedges whose weights are divisible by p
        threads: Worker threads; None means all cores
        max_wedges: Cap on enumerated wedges
        progress: Show progress bars
        emit_matching: Write the matching used to this path
        output: Write the rendered table to this path
    """

    family: Family | str
    n: int | None = None
    poset_file: str | None = None
    facets_file: str | None = None
    ring: str = "Z"
    degrees: list[int] | None = None
    output_format: OutputFormat | str = OutputFormat.TEXT
    reduce: ReduceMode | str = ReduceMode.AUTO
    p_subcomplex: int | None = None
    threads: int | None = None
    max_wedges: int = DEFAULT_MAX_WEDGES
    progress: bool = False
    emit_matching: str | None = None
    output: str | None = None

    def __post_init__(self) -> None:
        try:
            self.family = Family(self.family)
            self.output_format = OutputFormat(self.output_format)
            self.reduce = ReduceMode(self.reduce)
        except ValueError as e:
            raise JobSpecError(str(e)) from e

    @property
    def coefficient_ring(self) -> CoefficientRing:
        return parse_ring(self.ring)

    @property
    def label(self) -> str:
        if self.family in SIZED_FAMILIES:
            return f"{self.family.value}_{self.n}"  # type: ignore[union-attr]
        source = self.poset_file or self.facets_file or ""
        return f"{self.family.value}:{Path(source).name}"  # type: ignore[union-attr]

    def validate(self) -> CoefficientRing:
        """
        Check family/parameter compatibility and parse the ring.

        Returns:
            The parsed coefficient ring

        Raises:
            JobSpecError: On incompatible parameters
            RingParseError: On a malformed ring
        """
        ring = self.coefficient_ring

        family = self.family
        if family in SIZED_FAMILIES:
            if self.n is None or self.n < 1:
                raise JobSpecError(f"Family {family.value} requires --n >= 1")  # type: ignore[union-attr]
            if self.poset_file or self.facets_file:
                raise JobSpecError(f"Family {family.value} takes --n, not a file")  # type: ignore[union-attr]
        elif family in POSET_FAMILIES:
            if not self.poset_file:
                raise JobSpecError(f"Family {family.value} requires --poset")  # type: ignore[union-attr]
        elif not self.facets_file:
            raise JobSpecError("Family simplicial requires --facets")

        if family == Family.SO2 and ring.characteristic != 2:
            raise JobSpecError(f"Family so2 is a Lie algebra only in characteristic 2, got {ring}")

        if self.p_subcomplex is not None:
            if family in (Family.SO2, Family.SIMPLICIAL):
                raise JobSpecError(f"--p-subcomplex needs a matrix-unit basis, not {family.value}")  # type: ignore[union-attr]
            if not isprime(self.p_subcomplex):
                raise JobSpecError(f"--p-subcomplex must be prime, got {self.p_subcomplex}")

        if self.reduce == ReduceMode.NORMALIZATION and family == Family.SIMPLICIAL:
            raise JobSpecError("Normalization reduction needs a Lie algebra family")
        if self.threads is not None and self.threads < 1:
            raise JobSpecError(f"--threads must be positive, got {self.threads}")
        if self.max_wedges < 1:
            raise JobSpecError(f"--max-wedges must be positive, got {self.max_wedges}")
        return ring

    def reduction_enabled(self) -> bool:
        if self.reduce == ReduceMode.AUTO:
            return self.family in DIAGONAL_FAMILIES
        return self.reduce == ReduceMode.NORMALIZATION


@dataclass
class JobResult:
    """Everything a homology job produced."""

    spec: JobSpec
    complex_: ChainComplex
    reduced: ChainComplex
    table: HomologyTable
    matching: Matching | None = None
    stats: ReductionStats | None = None


# ============================================================================
# Build and reduce
# ============================================================================


def build_algebra(spec: JobSpec) -> LieAlgebra:
    """Construct the Lie algebra a job names."""
    n = spec.n or 0
    builders = {
        Family.SOL: sol,
        Family.NIL: nil,
        Family.DGN: dgn,
        Family.SO2: so_char2,
        Family.GL: gl_full,
    }
    if spec.family in builders:
        return builders[spec.family](n)  # type: ignore[index]
    if spec.family in POSET_FAMILIES:
        poset = load_poset_file(spec.poset_file)  # type: ignore[arg-type]
        return gl_poset(poset, strict=spec.family == Family.GL_POSET_STRICT)
    raise JobSpecError(f"Family {spec.family} has no Lie algebra")


def build_complex(spec: JobSpec, ring: CoefficientRing | None = None) -> ChainComplex:
    """
    Build the chain complex of a validated spec.

    Raises:
        ComplexTooLarge: If the wedge count exceeds spec.max_wedges
    """
    ring = ring or spec.coefficient_ring
    threads = spec.threads or 1

    if spec.family == Family.SIMPLICIAL:
        complex_ = simplicial_chain_complex(load_facets_file(spec.facets_file), ring=ring)  # type: ignore[arg-type]
        complex_.name = spec.label
        return complex_

    g = build_algebra(spec)
    if spec.p_subcomplex is not None:
        return build_p_subcomplex(
            g,
            ring,
            spec.p_subcomplex,
            degrees=spec.degrees,
            max_wedges=spec.max_wedges,
            threads=threads,
            progress=spec.progress,
        )
    return build_ce_complex(
        g,
        ring,
        degrees=spec.degrees,
        max_wedges=spec.max_wedges,
        threads=threads,
        progress=spec.progress,
    )


def reduce_complex(spec: JobSpec, complex_: ChainComplex) -> tuple[ChainComplex, Matching | None]:
    """
    Apply the reduction the job asks for.

    Returns:
        (reduced complex, matching used or None)

    Raises:
        MissingDiagonals: If normalization is forced on a family without diagonals
    """
    if not spec.reduction_enabled():
        logger.info(f"No reduction for {complex_.name}")
        return complex_, None
    if complex_.algebra is None:
        raise MissingDiagonals(f"{complex_.name} is not a Lie algebra complex")

    matching = normalization_matching(complex_)
    critical = critical_vertices(complex_, matching)
    reduced = complex_.restrict(critical.cells)
    return reduced, matching


def write_matching(matching: Matching, complex_: ChainComplex, path: str | Path) -> Path:
    """Write "k upper_bits lower_bits" lines for external checking."""
    out = ensure_parent(path)
    lines = matching.to_lines(complex_)
    out.write_text("".join(f"{line}\n" for line in lines))
    logger.info(f"Wrote {len(lines)} matched pairs to {out}")
    return out


# ============================================================================
# Jobs
# ============================================================================


def run_homology(spec: JobSpec) -> JobResult:
    """
    Build, optionally reduce, and compute homology.

    Raises:
        JobSpecError, RingParseError: On an invalid spec
        CompositeModulus: For Z/m with m composite, which has no field homology
        ComplexTooLarge: If the complex exceeds the wedge cap
    """
    ring = spec.validate()
    if ring != INTEGERS:
        ring.field_domain()
    selected = group_degrees(spec.degrees) if spec.degrees else "all"
    logger.info(f"Homology job {spec.label} over {ring}, degrees {selected}")
    complex_ = build_complex(spec, ring)
    reduced, matching = reduce_complex(spec, complex_)
    if matching is not None and spec.emit_matching:
        write_matching(matching, complex_, spec.emit_matching)

    table = compute_homology(
        reduced, degrees=spec.degrees, threads=spec.threads, progress=spec.progress
    )
    table.name = spec.label
    stats = reduction_stats(complex_, reduced) if matching is not None else None
    return JobResult(spec, complex_, reduced, table, matching=matching, stats=stats)


def run_stats(spec: JobSpec) -> ReductionStats:
    """
    Count wedges before and after reduction.

    Raises:
        JobSpecError: If the spec has no reduction to measure
    """
    spec.validate()
    if not spec.reduction_enabled():
        raise JobSpecError(f"Family {spec.family.value} has no reduction to measure")  # type: ignore[union-attr]
    complex_ = build_complex(spec)
    reduced, matching = reduce_complex(spec, complex_)
    if matching is not None and spec.emit_matching:
        write_matching(matching, complex_, spec.emit_matching)
    return reduction_stats(complex_, reduced)


# ============================================================================
# Rendering
# ============================================================================


def render_table(table: HomologyTable, output_format: OutputFormat | str, n: int | None = None) -> str:
    """
    Render a homology table.

    text: one row per degree with the module; csv: columns n,k,free,torsion;
    json: the table's dict form.
    """
    output_format = OutputFormat(output_format)
    if output_format == OutputFormat.JSON:
        return json.dumps(table.to_dict(), indent=2) + "\n"

    df = table.to_frame(n)
    if output_format == OutputFormat.CSV:
        return str(df[["n", "k", "free", "torsion"]].to_csv(index=False))
    header = f"H_k({table.name}; {table.ring})"
    return f"{header}\n{df[['k', 'H_k']].to_string(index=False)}\n"


def render_stats(stats: ReductionStats, output_format: OutputFormat | str, name: str = "") -> str:
    """Render per-degree wedge and critical counts with the aggregate ratio."""
    output_format = OutputFormat(output_format)
    if output_format == OutputFormat.JSON:
        degrees = [
            {"k": k, "wedges": size, "critical": stats.critical.get(k, 0)}
            for k, size in sorted(stats.original.items())
        ]
        payload = {
            "name": name,
            "ratio": stats.ratio,
            "compression": stats.compression,
            "degrees": degrees,
        }
        return json.dumps(payload, indent=2) + "\n"
    df = stats.to_frame()
    if output_format == OutputFormat.CSV:
        return str(df.to_csv(index=False))
    total, critical = sum(stats.original.values()), sum(stats.critical.values())
    return (
        f"Reduction of {name}\n{df.to_string(index=False)}\n"
        f"total {total} -> {critical} (ratio {stats.ratio:.6f}, compression {stats.compression:.2f})\n"
    )


__all__ = [
    "DIAGONAL_FAMILIES",
    "Family",
    "JobResult",
    "JobSpec",
    "JobSpecError",
    "OutputFormat",
    "ReduceMode",
    "build_algebra",
    "build_complex",
    "reduce_complex",
    "render_stats",
    "render_table",
    "run_homology",
    "run_stats",
    "write_matching",
]
