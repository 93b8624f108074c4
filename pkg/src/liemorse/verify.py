"""
Verification suites: recompute published values and cross-check routes.

Each suite returns a SuiteReport with one row per check. The
conjecture-probe suite only reports where a torsion order first shows up
and never fails.

Example usage:
    from liemorse.verify import run_suite

    report = run_suite("tensor")
    print(report.to_frame().to_string(index=False))
    report.ok   # True
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from math import comb
from typing import Any

from sympy import factorint, nextprime
from tqdm import tqdm

from liemorse.chain import (
    boundary_squared_is_zero,
    build_ce_complex,
    simplicial_chain_complex,
)
from liemorse.cup import verify_exterior_algebra
from liemorse.homology import (
    HomologyModule,
    HomologyTable,
    betti_mod_p_from_integral,
    compute_homology,
    homology_over_field,
    homology_over_Z,
)
from liemorse.lie import LieAlgebra, dgn, gl_full, gl_poset, so_char2, sol
from liemorse.morse import (
    MatchingStatus,
    matching_from_names,
    normalization_matching,
    normalization_reduce,
    reduce_by_matching,
    reduction_stats,
    validate_matching,
)
from liemorse.poset import Poset, antichain, chain, complete_bipartite, from_cover_relations, random_poset
from liemorse.reference import (
    FIRST_P_TORSION_CASES,
    HIGH_DEGREE_MOD_P,
    P_COMPLEX,
    SHIFTED_BINOMIALS,
    WORKED_EXAMPLE_FACETS,
    WORKED_EXAMPLE_HOMOLOGY,
    WORKED_EXAMPLE_MATCHING,
    bipartite_three_torsion,
    h3_example_posets,
    p_complex_table,
    parse_module,
    sol_integral_table,
)
from liemorse.ring import INTEGERS, RATIONALS, CoefficientRing, modular
from liemorse.subcomplex import (
    first_p_torsion_dim,
    integral_p_complex_homology,
    predicted_mod_p_dims,
    shifted_binomial_dims,
    verify_tensor_factorization,
    witness_homology,
)
from liemorse.utils import get_verify_config

logger = logging.getLogger(__name__)

SUITE_NAMES = ("tables", "uct", "tensor", "cup", "matching", "conjecture-probe")


@dataclass
class CheckResult:
    """Outcome of a single comparison."""

    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteReport:
    """Checks run by a suite, plus free-form findings for probes."""

    suite: str
    checks: list[CheckResult] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(name, passed, detail))
        if passed:
            logger.debug(f"{self.suite}: {name} passed")
        else:
            logger.warning(f"{self.suite}: {name} failed: {detail}")

    def to_frame(self) -> Any:
        import pandas as pd

        return pd.DataFrame(
            [
                {"check": c.name, "status": "PASS" if c.passed else "FAIL", "detail": c.detail}
                for c in self.checks
            ],
            columns=["check", "status", "detail"],
        )

    def summary(self) -> str:
        passed = len(self.checks) - len(self.failures)
        return f"{self.suite}: {passed}/{len(self.checks)} checks passed"


def diamond() -> Poset:
    """1 < 2, 3 < 4."""
    return from_cover_relations(4, [(1, 2), (1, 3), (2, 4), (3, 4)])


def _reduced_integral(g: LieAlgebra, threads: int | None) -> HomologyTable:
    return homology_over_Z(normalization_reduce(build_ce_complex(g, INTEGERS)), threads=threads)


def _compare_modules(
    report: SuiteReport, name: str, actual: HomologyTable, expected: dict[int, HomologyModule]
) -> None:
    wrong = [
        f"H_{k}: got {actual[k]}, expected {expected.get(k, HomologyModule(0))}"
        for k in actual.degrees
        if actual[k] != expected.get(k, HomologyModule(0))
    ]
    report.add(name, not wrong, "; ".join(wrong))


# ============================================================================
# Suites
# ============================================================================


def suite_tables(limits: dict, threads: int | None = None, progress: bool = False) -> SuiteReport:
    """Integral and mod p sol_n values, p-complex table, poset examples, torsion witnesses."""
    report = SuiteReport("tables")
    max_n = limits["tables_max_n"]

    for n in tqdm(range(1, max_n + 1), desc="Integral tables", unit="n", disable=not progress):
        table = _reduced_integral(sol(n), threads)
        _compare_modules(report, f"H_*(sol_{n}; Z)", table, sol_integral_table(n))

    for p, by_n in SHIFTED_BINOMIALS.items():
        for n, terms in by_n.items():
            kmax = n * (n + 1) // 2
            predicted = predicted_mod_p_dims(chain(n), p, kmax=kmax)
            expected = shifted_binomial_dims(n, terms, kmax=kmax)
            report.add(
                f"dim H_*(sol_{n}; Z/{p}) shifted binomials",
                predicted == expected,
                "" if predicted == expected else f"got {predicted}, expected {expected}",
            )

    for p, by_n in P_COMPLEX.items():
        for n in by_n:
            if n > max_n:
                continue
            table = integral_p_complex_homology(chain(n), p, threads=threads)
            _compare_modules(report, f"H_*(C_p={p}(nil_{n}); Z)", table, p_complex_table(n, p))

    for name, poset, module in h3_example_posets():
        if poset.n > max_n + 1:
            continue
        reduced = normalization_reduce(build_ce_complex(gl_poset(poset), INTEGERS, degrees=[3]))
        h3 = homology_over_Z(reduced, degrees=[3], threads=threads)[3]
        report.add(f"H_3 of poset {name}", h3 == module, f"got {h3}, expected {module}")
        count = poset.comparable_noncovering_count()
        report.add(
            f"H_3 torsion count of poset {name}",
            h3.torsion_count(2) == count,
            f"{h3.torsion_count(2)} summands, {count} comparable non-covering pairs",
        )

    _mod_p_spot_checks(report, max_n, threads)
    _torsion_witnesses(report, max_n, threads)
    return report


def _mod_p_dim(n: int, p: int, k: int, threads: int | None) -> int:
    reduced = normalization_reduce(build_ce_complex(sol(n), modular(p), degrees=[k]))
    return homology_over_field(reduced, degrees=[k], threads=threads)[k].free_rank


def _mod_p_spot_checks(report: SuiteReport, max_n: int, threads: int | None) -> None:
    for p, by_n in SHIFTED_BINOMIALS.items():
        for n, terms in by_n.items():
            if n > max_n:
                continue
            reduced = normalization_reduce(build_ce_complex(sol(n), modular(p)))
            direct = homology_over_field(reduced, threads=threads).dimensions()
            binomials = shifted_binomial_dims(n, terms, kmax=n * (n + 1) // 2)
            report.add(
                f"dim H_*(sol_{n}; Z/{p}) computed directly",
                direct == binomials,
                "" if direct == binomials else f"got {direct}, expected {binomials}",
            )

    for n, p, k, expected in HIGH_DEGREE_MOD_P:
        if n > max_n:
            continue
        dim = _mod_p_dim(n, p, k, threads)
        passed = dim > 0 if expected is None else dim == expected
        wanted = "nonzero" if expected is None else str(expected)
        report.add(f"dim H_{k}(sol_{n}; Z/{p})", passed, f"got {dim}, expected {wanted}")

    for p, n in FIRST_P_TORSION_CASES:
        if n > max_n:
            continue
        k = 2 * p - 1
        dim = _mod_p_dim(n, p, k, threads)
        formula = first_p_torsion_dim(n, p)
        report.add(
            f"dim H_{k}(sol_{n}; Z/{p}) at first {p}-torsion",
            dim == formula,
            f"got {dim}, expected {formula}",
        )


def _torsion_witnesses(report: SuiteReport, max_n: int, threads: int | None) -> None:
    for t in range(2, max_n):
        result = witness_homology(chain(max_n), 1, t + 1, threads=threads)
        report.add(
            f"Z_{t} in H_{result.witness.degree}(sol_{max_n}; Z) from [1, {t + 1}]",
            result.ok,
            f"{result.witness.name} critical: {result.critical}, H = {result.module}",
        )

    poset, degree, expected = bipartite_three_torsion()
    reduced = normalization_reduce(build_ce_complex(gl_poset(poset), INTEGERS, degrees=[degree]))
    module = homology_over_Z(reduced, degrees=[degree], threads=threads)[degree]
    report.add(
        f"{expected} in H_{degree} of K33",
        module.has_summand(expected),
        f"got {module}",
    )


def _three_routes(
    report: SuiteReport, name: str, g: LieAlgebra, poset: Poset, primes: list[int], threads: int | None
) -> None:
    integral = _reduced_integral(g, threads)
    for p in primes:
        direct = homology_over_field(
            normalization_reduce(build_ce_complex(g, modular(p))), threads=threads
        ).dimensions()
        uct = betti_mod_p_from_integral(integral, p)
        kunneth = predicted_mod_p_dims(poset, p, kmax=g.rank)
        agree = direct == uct == kunneth
        report.add(
            f"{name} over Z/{p}: direct, UCT, Kunneth",
            agree,
            "" if agree else f"direct {direct}, UCT {uct}, Kunneth {kunneth}",
        )


def suite_uct(limits: dict, threads: int | None = None, progress: bool = False) -> SuiteReport:
    """Direct Z/p homology against UCT and the tensor factorization; random posets with p >= n."""
    report = SuiteReport("uct")
    primes = [2, 3, 5]
    cases: list[tuple[str, LieAlgebra, Poset]] = [
        (f"sol_{n}", sol(n), chain(n)) for n in range(1, limits["uct_max_n"] + 1)
    ]
    bipartite = complete_bipartite(3, 3)
    cases += [("diamond", gl_poset(diamond()), diamond()), ("K33", gl_poset(bipartite), bipartite)]

    for name, g, poset in tqdm(cases, desc="Three routes", unit="algebra", disable=not progress):
        _three_routes(report, name, g, poset, primes, threads)

    seeds = range(10) if limits["uct_max_n"] >= 3 else range(0)
    for seed in tqdm(seeds, desc="Large primes", unit="poset", disable=not progress):
        _large_prime_poset(report, seed, limits["uct_max_n"], threads)
    return report


def _large_prime_poset(report: SuiteReport, seed: int, max_n: int, threads: int | None) -> None:
    n = min(max_n, 3 + seed % 3)
    p = nextprime(n - 1)
    poset = random_poset(n, seed=seed)
    g = gl_poset(poset)
    name = f"random({n}, seed={seed})"

    reduced = normalization_reduce(build_ce_complex(g, modular(p)))
    dims = homology_over_field(reduced, threads=threads).dimensions()
    binomials = [comb(n, k) for k in range(g.rank + 1)]
    report.add(
        f"{name} over Z/{p}: binomial dimensions",
        dims == binomials,
        "" if dims == binomials else f"got {dims}, expected {binomials}",
    )

    low = normalization_reduce(build_ce_complex(g, INTEGERS, degrees=[1, 2, 3]))
    table = homology_over_Z(low, degrees=[1, 2, 3], threads=threads)
    count = poset.comparable_noncovering_count()
    passed = (
        table[1] == HomologyModule(n)
        and table[2] == HomologyModule(comb(n, 2))
        and len(table[3].torsion) == count
    )
    report.add(
        f"{name} over Z: H_1, H_2 free and H_3 torsion",
        passed,
        f"H_1 = {table[1]}, H_2 = {table[2]}, H_3 = {table[3]}, "
        f"{count} comparable non-covering pairs",
    )


def suite_tensor(limits: dict, threads: int | None = None, progress: bool = False) -> SuiteReport:
    """Entrywise comparison of p-subcomplexes with their tensor factorization."""
    report = SuiteReport("tensor")
    for name, poset in (("chain(4)", chain(4)), ("diamond", diamond())):
        for p in (2, 3):
            result = verify_tensor_factorization(poset, p)
            report.add(
                f"{name}, p={p}",
                result.ok,
                f"{result.checked_entries} entries"
                + (f"; {result.mismatches[0]}" if result.mismatches else ""),
            )
    return report


def suite_cup(limits: dict, threads: int | None = None, progress: bool = False) -> SuiteReport:
    """Exterior algebra structure of H^*(gl on a poset)."""
    report = SuiteReport("cup")
    max_n = min(limits["uct_max_n"], 5)
    cases: list[tuple[str, Poset, CoefficientRing]] = [
        (f"chain({n})", chain(n), RATIONALS) for n in range(1, max_n + 1)
    ]
    cases += [(f"random({max_n}, seed={seed})", random_poset(max_n, seed=seed), RATIONALS) for seed in (1, 2)]
    cases += [
        ("chain(3)", chain(3), modular(5)),
        ("chain(4)", chain(4), modular(3)),
        ("antichain(4)", antichain(4), modular(3)),
    ]
    if max_n > 3:
        cases.append((f"chain({max_n})", chain(max_n), modular(5)))

    for name, poset, ring in tqdm(cases, desc="Cup products", unit="poset", disable=not progress):
        result = verify_exterior_algebra(poset, ring)
        generators = ", ".join(f"{g}:{d}" for g, d in result.generators.items())
        report.add(
            f"{name} over {ring}",
            result.ok,
            result.failures[0] if result.failures else generators,
        )
    return report


def suite_matching(limits: dict, threads: int | None = None, progress: bool = False) -> SuiteReport:
    """Morse soundness of normalization matchings, Z/2 reduction ratios, the worked example."""
    report = SuiteReport("matching")
    rings = [INTEGERS, modular(2), modular(3)]
    algebras = [f(n) for n in range(1, 4) for f in (sol, dgn, gl_full)]

    for g in tqdm(algebras, desc="Normalization matchings", unit="algebra", disable=not progress):
        for ring in rings:
            complex_ = build_ce_complex(g, ring)
            matching = normalization_matching(complex_)
            valid = validate_matching(complex_, matching) == MatchingStatus.VALID
            reduced = normalization_reduce(complex_)
            schur = reduce_by_matching(complex_, matching)
            same = all(
                reduced.boundary(k).to_dict() == schur.boundary(k).to_dict()
                for k in range(1, complex_.top_degree + 1)
            )
            agree = compute_homology(reduced) == compute_homology(complex_)
            report.add(
                f"{g.name} over {ring}",
                valid and same and agree and boundary_squared_is_zero(reduced),
                matching.reason or ("" if same else "restriction differs from Schur reduction"),
            )

    so = so_char2(3)
    complex_ = build_ce_complex(so, modular(2))
    matching = normalization_matching(complex_)
    report.add(
        f"{so.name} over Z/2",
        validate_matching(complex_, matching) == MatchingStatus.VALID,
        matching.reason or "",
    )

    ratios: list[float] = []
    for n in range(1, limits["tables_max_n"] + 1):
        complex_ = build_ce_complex(sol(n), modular(2))
        ratios.append(reduction_stats(complex_, normalization_reduce(complex_)).ratio)
    listed = ", ".join(f"sol_{n} {r:.4f}" for n, r in enumerate(ratios, 1))
    report.findings.append(f"Reduction ratios over Z/2: {listed}")
    decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
    report.add("reduction ratio over Z/2 decreases with n", decreasing, listed)
    if len(ratios) >= 6:
        report.add(
            "sol_6 over Z/2 reduction ratio below 0.05", ratios[5] < 0.05, f"ratio {ratios[5]:.4f}"
        )

    worked = simplicial_chain_complex(WORKED_EXAMPLE_FACETS)
    matching = matching_from_names(worked, WORKED_EXAMPLE_MATCHING)
    valid = validate_matching(worked, matching) == MatchingStatus.VALID
    reduced = reduce_by_matching(worked, matching) if valid else worked
    table = compute_homology(reduced)
    expected = {k: parse_module(text) for k, text in enumerate(WORKED_EXAMPLE_HOMOLOGY)}
    report.add(
        "worked simplicial example",
        valid and reduced.dimensions() == [2, 1, 1, 0] and table.modules == expected,
        matching.reason or f"critical {reduced.dimensions()}, homology {[str(m) for m in table.modules.values()]}",
    )
    return report


def probe_first_torsion(m: int, max_n: int, threads: int | None = None, progress: bool = False) -> tuple[int, int] | None:
    """
    First (n, k), smallest n then smallest k, with a Z_m summand in H_k(sol_n; Z).

    Raises:
        ValueError: If m is not a prime power
    """
    factors = factorint(m)
    if m < 2 or len(factors) != 1:
        raise ValueError(f"{m} is not a prime power")
    for n in tqdm(range(1, max_n + 1), desc=f"Probing Z_{m}", unit="n", disable=not progress):
        table = _reduced_integral(sol(n), threads)
        for k in table.degrees:
            if table[k].primary_torsion().get(m):
                return n, k
    return None


def suite_conjecture_probe(
    limits: dict, threads: int | None = None, progress: bool = False, m: int = 4
) -> SuiteReport:
    """Report where Z_m first appears in the integral sol_n table; never fails."""
    report = SuiteReport("conjecture-probe")
    max_n = limits["probe_max_n"]
    found = probe_first_torsion(m, max_n, threads, progress)
    if found is None:
        report.findings.append(f"Z_{m} does not appear for n <= {max_n}")
    else:
        n, k = found
        report.findings.append(
            f"Z_{m} first appears in column {n}, row {k} (predicted column {m + 1})"
        )
    logger.info(report.findings[-1])
    return report


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "tables": suite_tables,
    "uct": suite_uct,
    "tensor": suite_tensor,
    "cup": suite_cup,
    "matching": suite_matching,
    "conjecture-probe": suite_conjecture_probe,
}


def run_suite(
    name: str,
    config: dict | None = None,
    threads: int | None = None,
    progress: bool = False,
    **kwargs: Any,
) -> SuiteReport:
    """
    Run one verification suite.

    Args:
        name: One of SUITE_NAMES
        config: Configuration dict; its "verify" section bounds the sizes
        threads: Worker threads for homology
        progress: Show progress bars
        **kwargs: Suite-specific options (m for conjecture-probe)

    Raises:
        ValueError: For an unknown suite name
    """
    if name not in SUITES:
        raise ValueError(f"Unknown suite '{name}' (choose from {', '.join(SUITE_NAMES)})")
    limits = get_verify_config(config)
    logger.info(f"Running verify suite '{name}' with limits {limits}")
    report = SUITES[name](limits, threads=threads, progress=progress, **kwargs)
    logger.info(report.summary())
    return report


__all__ = [
    "SUITES",
    "SUITE_NAMES",
    "CheckResult",
    "SuiteReport",
    "diamond",
    "probe_first_torsion",
    "run_suite",
]
