"""Command-line interface for solving and verifying twisted Gaudin qq-systems."""

import logging
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any, TypeAlias, cast

import click

from . import config
from .codec import load_scenario, load_solutions, write_document
from .errors import ConfigError, GaudinError, NotTypeAError, SolutionIndexError, WeylCapError
from .pipeline import SolveOptions, orbit_document, solve_scenario, verify_document, wronskian_document
from .report import generate
from .schema import CliContext, Mode

logger = logging.getLogger(__name__)


Command: TypeAlias = Callable[..., Any]


def _context(ctx: click.Context) -> CliContext:
    return ctx.obj


def setup_logging(verbose: bool = False) -> None:
    """Configure logging for the application."""
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )


@contextmanager
def _reported_errors(ctx: click.Context) -> Iterator[None]:
    """Turn input problems into usage errors (exit 2) and failed computations into exit 1."""
    try:
        yield
    except (ConfigError, NotTypeAError, WeylCapError, SolutionIndexError) as exc:
        raise click.UsageError(str(exc), ctx) from exc
    except GaudinError as exc:
        click.echo(f"Error: {exc}", err=True)
        ctx.exit(1)


def _mode_option(func: Command) -> Command:
    return click.option(
        "--mode",
        type=click.Choice(["exact", "float"]),
        help="Coefficient field; defaults to the scenario's mode, or the stored solution's",
    )(func)


def _mode(value: str | None) -> Mode | None:
    """Narrow the value of ``--mode``; click.Choice already restricted it."""
    return cast(Mode | None, value)


def _tol_option(func: Command) -> Command:
    return click.option(
        "--tol",
        type=float,
        help="Residual tolerance for float checks; overrides the scenario file",
    )(func)


def _index_option(func: Command) -> Command:
    return click.option(
        "--index",
        type=int,
        default=0,
        show_default=True,
        help="Which solution of the solutions file to use",
    )(func)


def _weyl_cap_option(func: Command) -> Command:
    return click.option(
        "--weyl-cap",
        type=int,
        default=config.DEFAULT_WEYL_CAP,
        show_default=True,
        help="Refuse to enumerate Weyl groups larger than this",
    )(func)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option(
    "--verbose",
    "-v",
    is_flag=True,
    help="Enable verbose logging",
)
@click.pass_context
def cli(ctx: click.Context, verbose: bool) -> None:
    """Solve Bethe equations of twisted Gaudin models and check the qq-system, its Weyl orbit and G-Wronskian."""
    ctx.ensure_object(dict)
    context = _context(ctx)
    context["verbose"] = verbose
    setup_logging(verbose)


@cli.command()
@click.argument(
    "scenario",
    type=click.Path(exists=True, dir_okay=False, readable=True),
)
@_mode_option
@_tol_option
@click.option("--seed", type=int, default=config.DEFAULT_SEED, show_default=True, help="Seed for Newton start points")
@click.option("--starts", type=int, default=config.DEFAULT_STARTS, show_default=True, help="Number of Newton starts")
@click.option("--workers", type=int, default=config.DEFAULT_WORKERS, show_default=True, help="Threads for Newton starts")
@click.option(
    "--out",
    type=click.Path(writable=True),
    default="solutions.json",
    show_default=True,
    help="Path of the solutions document",
)
@click.pass_context
def solve(
    ctx: click.Context,
    scenario: str,
    mode: str | None,
    tol: float | None,
    seed: int,
    starts: int,
    workers: int,
    out: str,
) -> None:
    """Solve the Bethe equations of SCENARIO and assemble the qq-system solutions."""
    with _reported_errors(ctx):
        parsed = load_scenario(scenario)
        options = SolveOptions(mode=_mode(mode), tol=tol, seed=seed, starts=starts, workers=workers)
        document = solve_scenario(parsed, options)
        write_document(document, out)
    count = len(document["solutions"])
    click.echo(f"Found {count} solution{'s' if count != 1 else ''}, written to {out}")
    unpaired = len(document["unpaired"])
    if unpaired:
        click.echo(f"{unpaired} Bethe root set{'s' if unpaired != 1 else ''} without a qq partner", err=True)
    if count == 0 or unpaired:
        ctx.exit(1)


@cli.command()
@click.argument(
    "solutions",
    type=click.Path(exists=True, dir_okay=False, readable=True),
)
@_mode_option
@_tol_option
@click.option(
    "--out",
    type=click.Path(writable=True),
    default="verify.json",
    show_default=True,
    help="Path of the verification report",
)
@click.pass_context
def verify(ctx: click.Context, solutions: str, mode: str | None, tol: float | None, out: str) -> None:
    """Recheck every solution stored in SOLUTIONS."""
    with _reported_errors(ctx):
        scenario, document = load_solutions(solutions)
        report = verify_document(scenario, document, tol, _mode(mode))
        write_document(report, out)
    for check in report["checks"]:
        status = "ok" if check["passed"] else "FAILED"
        click.echo(f"solution {check['index']}: {status}")
    if not report["passed"]:
        ctx.exit(1)


@cli.command()
@click.argument(
    "solutions",
    type=click.Path(exists=True, dir_okay=False, readable=True),
)
@_index_option
@_weyl_cap_option
@_mode_option
@_tol_option
@click.option("--workers", type=int, default=config.DEFAULT_WORKERS, show_default=True, help="Threads per orbit layer")
@click.option(
    "--out",
    type=click.Path(writable=True),
    default="orbit.json",
    show_default=True,
    help="Path of the full qq-system document",
)
@click.pass_context
def orbit(
    ctx: click.Context,
    solutions: str,
    index: int,
    weyl_cap: int,
    mode: str | None,
    tol: float | None,
    workers: int,
    out: str,
) -> None:
    """Generate the full qq-system of one solution by Bäcklund transformations."""
    with _reported_errors(ctx):
        scenario, document = load_solutions(solutions)
        full = orbit_document(
            scenario, document, index=index, cap=weyl_cap, tol=tol, workers=workers, mode=_mode(mode)
        )
        write_document(full, out)
    suffix = " (truncated)" if full["truncated"] else ""
    click.echo(f"{len(full['entries'])} orbit entries{suffix}, written to {out}")
    for failure in full["failures"]:
        click.echo(f"step to {failure['word']} failed: {failure['reason']}", err=True)
    if not full["passed"]:
        ctx.exit(1)


@cli.command()
@click.argument(
    "solutions",
    type=click.Path(exists=True, dir_okay=False, readable=True),
)
@_index_option
@_weyl_cap_option
@_mode_option
@click.option(
    "--descending",
    is_flag=True,
    help="Multiply the factors of N+ in decreasing node order",
)
@click.option(
    "--out",
    type=click.Path(writable=True),
    default="wronskian.json",
    show_default=True,
    help="Path of the G-Wronskian report",
)
@click.pass_context
def wronskian(
    ctx: click.Context,
    solutions: str,
    index: int,
    weyl_cap: int,
    mode: str | None,
    descending: bool,
    out: str,
) -> None:
    """Build the G-Wronskian of one type-A solution and match its minors with the orbit."""
    with _reported_errors(ctx):
        scenario, document = load_solutions(solutions)
        report = wronskian_document(
            scenario, document, index=index, cap=weyl_cap, ascending=not descending, mode=_mode(mode)
        )
        write_document(report, out)
    matched = sum(m["passed"] for m in report["minor_matches"])
    click.echo(f"{matched}/{len(report['minor_matches'])} minors match, written to {out}")
    if not report["passed"]:
        ctx.exit(1)


@cli.command()
@click.argument(
    "documents",
    nargs=-1,
    required=True,
    type=click.Path(exists=True, dir_okay=False, readable=True),
)
@click.option(
    "--output-html",
    type=click.Path(writable=True),
    default="report.html",
    show_default=True,
    help="Path for the standalone HTML report",
)
@click.option(
    "--output-markdown",
    type=click.Path(writable=True),
    help="Path for the Markdown summary (printed when omitted)",
)
@click.pass_context
def report(
    ctx: click.Context,
    documents: tuple[str, ...],
    output_html: str,
    output_markdown: str | None,
) -> None:
    """Render DOCUMENTS emitted by the other commands as HTML and Markdown."""
    with _reported_errors(ctx):
        markdown = generate([Path(d) for d in documents], output_html, output_markdown)
    if output_markdown is None:
        click.echo(markdown)


if __name__ == "__main__":
    cli()
