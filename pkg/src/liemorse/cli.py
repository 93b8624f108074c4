"""
Command-line interface for liemorse.

Provides CLI commands for homology tables, reduction statistics,
verification suites and cup product tables.
"""

import sys
from typing import NoReturn

import click

from liemorse.utils import (
    ensure_parent,
    expand_degrees,
    get_complex_config,
    load_config,
    setup_logging,
)

FAMILY_CHOICES = ["sol", "nil", "gl-poset", "gl-poset-strict", "dgn", "so2", "gl", "simplicial"]
FORMAT_CHOICES = ["text", "csv", "json"]
REDUCE_CHOICES = ["auto", "none", "normalization"]


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Enable verbose output")
@click.option("-q", "--quiet", is_flag=True, help="Suppress non-error output")
@click.option("--config", type=click.Path(exists=True), help="Path to config file")
@click.pass_context
def main(ctx, verbose: bool, quiet: bool, config: str | None):
    """
    liemorse - Exact homology of Lie algebras of poset matrices.

    \b
    Commands:
      homology    Homology table of a family, poset or simplicial complex
      stats       Wedge counts before and after Morse reduction
      verify      Run a verification suite
      cup-table   Multiplication table of H^* on a poset
      config      Show current configuration

    \b
    Examples:
      liemorse homology --family sol --n 3 --ring Z
      liemorse homology --family gl-poset --poset diamond.pos --deg 3
      liemorse stats --family sol --n 4 --ring Z/5
      liemorse verify conjecture-probe --m 4
    """
    ctx.ensure_object(dict)

    # Load config
    cfg = load_config(config)
    ctx.obj["config"] = cfg
    ctx.obj["verbose"] = verbose

    # Setup logging
    if quiet:
        level = "ERROR"
    elif verbose:
        level = "DEBUG"
    else:
        level = (cfg.get("logging") or {}).get("level", "INFO")

    setup_logging(level=level, log_file=(cfg.get("logging") or {}).get("file"))


def _fail(e: Exception) -> NoReturn:
    """Print a one-line diagnostic and exit 3 (too large), 2 (bad input) or 1."""
    from liemorse.chain import ComplexTooLarge

    message = e.args[0] if isinstance(e, KeyError) and e.args else e
    click.echo(f"Error: {message}", err=True)
    if isinstance(e, ComplexTooLarge):
        sys.exit(3)
    if isinstance(e, (ValueError, FileNotFoundError, KeyError)):
        sys.exit(2)
    sys.exit(1)


def job_options(func):
    """Options shared by the homology and stats commands."""
    options = [
        click.option(
            "-f", "--family", required=True, type=click.Choice(FAMILY_CHOICES), help="Complex family"
        ),
        click.option("-n", "--n", "n", type=int, help="Size for sol, nil, dgn, so2, gl"),
        click.option("--poset", type=click.Path(exists=True), help="Poset file (gl-poset families)"),
        click.option("--facets", type=click.Path(exists=True), help="Facets file (simplicial)"),
        click.option("-r", "--ring", default="Z", help="Coefficient ring: Z, Q or Z/p"),
        click.option("-d", "--deg", help='Degrees, e.g. "3" or "2:5,7" (default: all)'),
        click.option("--format", "fmt", type=click.Choice(FORMAT_CHOICES), help="Output format"),
        click.option("--reduce", type=click.Choice(REDUCE_CHOICES), help="Reduction before homology"),
        click.option("--p-subcomplex", type=int, help="Restrict to weights divisible by prime p"),
        click.option("-t", "--threads", type=int, help="Worker threads (default: all cores)"),
        click.option("--max-wedges", type=int, help="Cap on enumerated wedges"),
        click.option("--emit-matching", type=click.Path(), help="Write matched pairs to file"),
        click.option("--progress", is_flag=True, help="Show progress bars"),
        click.option("-o", "--output", type=click.Path(), help="Also write the output to file"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _job_spec(ctx, **options):
    from liemorse.pipeline import JobSpec

    cfg = ctx.obj["config"]
    complex_cfg = get_complex_config(cfg)
    threads = options["threads"]
    if threads is None:
        threads = (cfg.get("homology") or {}).get("threads")

    return JobSpec(
        family=options["family"],
        n=options["n"],
        poset_file=options["poset"],
        facets_file=options["facets"],
        ring=options["ring"],
        degrees=expand_degrees(options["deg"]) if options["deg"] else None,
        output_format=options["fmt"] or (cfg.get("output") or {}).get("format", "text"),
        reduce=options["reduce"] or (cfg.get("reduction") or {}).get("default", "auto"),
        p_subcomplex=options["p_subcomplex"],
        threads=threads,
        max_wedges=options["max_wedges"] or complex_cfg["max_wedges"],
        progress=options["progress"] or bool(complex_cfg["progress"]),
        emit_matching=options["emit_matching"],
        output=options["output"],
    )


def _emit(text: str, output: str | None) -> None:
    click.echo(text, nl=False)
    if output:
        ensure_parent(output).write_text(text)
        click.echo(f"Results saved to: {output}", err=True)


# ============================================================================
# Homology Commands
# ============================================================================


@main.command()
@job_options
@click.option("--dump", type=click.Path(), help="Write the reduced complex in dump format")
@click.pass_context
def homology(ctx, dump: str | None, **options):
    """
    Compute a homology table.

    Over Z the table lists free rank and torsion; over Q or Z/p it lists
    dimensions. Families with diagonals are reduced with the normalization
    matching unless --reduce none is given.

    \b
    Examples:
      liemorse homology --family sol --n 3 --ring Z
      liemorse homology --family dgn --n 4
      liemorse homology --family gl-poset --poset diamond.pos --ring Z --deg 3
      liemorse homology --family nil --n 5 --p-subcomplex 2 --format csv
      liemorse homology --family sol --n 3 --dump sol3.dump
    """
    from liemorse.chain import dump_complex
    from liemorse.pipeline import render_table, run_homology

    try:
        spec = _job_spec(ctx, **options)
        result = run_homology(spec)
        n = spec.n
        if n is None and result.complex_.algebra is not None:
            n = result.complex_.algebra.n
        _emit(render_table(result.table, spec.output_format, n=n), spec.output)
        if dump:
            ensure_parent(dump).write_text(dump_complex(result.reduced))
            click.echo(f"Complex dump saved to: {dump}", err=True)
    except Exception as e:
        _fail(e)


@main.command()
@job_options
@click.pass_context
def stats(ctx, **options):
    """
    Report wedge counts before and after the normalization reduction.

    \b
    Examples:
      liemorse stats --family sol --n 5 --ring Z/2
      liemorse stats --family dgn --n 4
    """
    from liemorse.pipeline import render_stats, run_stats

    try:
        spec = _job_spec(ctx, **options)
        report = run_stats(spec)
        _emit(render_stats(report, spec.output_format, name=f"{spec.label} over {spec.ring}"), spec.output)
    except Exception as e:
        _fail(e)


# ============================================================================
# Verification Commands
# ============================================================================


@main.command()
@click.argument(
    "suite",
    type=click.Choice(["tables", "uct", "tensor", "cup", "matching", "conjecture-probe"]),
)
@click.option("--m", "m", default=4, type=int, help="Torsion order for conjecture-probe")
@click.option("-t", "--threads", type=int, help="Worker threads (default: all cores)")
@click.option("--progress", is_flag=True, help="Show progress bars")
@click.pass_context
def verify(ctx, suite: str, m: int, threads: int | None, progress: bool):
    """
    Run a verification suite and print a pass/fail summary.

    Exits with status 1 when any check fails. conjecture-probe only reports
    where Z_m first appears and never fails.

    \b
    Examples:
      liemorse verify tables
      liemorse verify tensor
      liemorse verify conjecture-probe --m 4
    """
    from liemorse.verify import run_suite

    try:
        kwargs = {"m": m} if suite == "conjecture-probe" else {}
        report = run_suite(suite, ctx.obj["config"], threads=threads, progress=progress, **kwargs)
    except Exception as e:
        _fail(e)

    if report.checks:
        click.echo(report.to_frame().to_string(index=False))
    for finding in report.findings:
        click.echo(finding)
    click.echo(report.summary())
    if not report.ok:
        sys.exit(1)


@main.command("cup-table")
@click.option("--poset", type=click.Path(exists=True), help="Poset file")
@click.option("-n", "--n", "n", type=int, help="Use the chain 1 < 2 < ... < n")
@click.option("-r", "--ring", default="Q", help="Coefficient ring: Q or Z/p")
@click.pass_context
def cup_table(ctx, poset: str | None, n: int | None, ring: str):
    """
    Print the multiplication table of the generators of H^*.

    \b
    Examples:
      liemorse cup-table --n 4 --ring Z/3
      liemorse cup-table --poset diamond.pos --ring Q
    """
    from liemorse.cup import verify_exterior_algebra
    from liemorse.poset import chain, load_poset_file
    from liemorse.ring import parse_ring

    try:
        if (poset is None) == (n is None):
            raise click.UsageError("Give exactly one of --poset and --n")
        source = load_poset_file(poset) if poset else chain(n)  # type: ignore[arg-type]
        report = verify_exterior_algebra(source, parse_ring(ring))
    except click.UsageError:
        raise
    except Exception as e:
        _fail(e)

    click.echo(report.to_frame().to_string())
    degrees = ", ".join(f"{name}: {degree}" for name, degree in report.generators.items())
    click.echo(f"\nGenerators ({degrees}); {report.critical_count} critical wedges")
    for failure in report.failures:
        click.echo(f"FAIL {failure}")
    if not report.ok:
        sys.exit(1)


# ============================================================================
# Config Commands
# ============================================================================


@main.command()
@click.pass_context
def config(ctx):
    """
    Show current configuration.
    """
    import yaml

    click.echo(yaml.dump(ctx.obj["config"], default_flow_style=False))


if __name__ == "__main__":
    main()
