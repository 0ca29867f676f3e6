import logging
import sys
from pathlib import Path

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn, BarColumn, TaskProgressColumn
from rich.table import Table

from .config import BOUND_METHODS, COMMANDS, RunConfig
from .core import RunResult, SqueezeRunner, build_report
from .exceptions import SqueezerError
from .formatters import FORMATTERS
from .holomaps import MAP_TYPES
from .utils import parse_float_list, parse_point

console = Console()

TOOL_DESCRIPTION = """
Ellipsoid Squeezer computes numerical lower bounds for the squeezing function of general
complex ellipsoids D_P = {|z_n|^2 + P(z') < 1}, checks the Levi form of their boundaries and
verifies the explicit biholomorphisms between D_P, the Siegel model E_P and their dilations.
"""

EXAMPLE_USAGE = """
Examples:
  # Validate a polynomial spec
  ellipsoid-squeezer validate --spec ball.json

  # Sampled WB check away from the circle z' = 0'
  ellipsoid-squeezer wb-check --spec quartic.json --exclusion 0.03 --samples 10000

  # r/R bound at a point (points are interleaved re,im,re,im,...)
  ellipsoid-squeezer bound --spec ball.json --point 0,0,0.5,0

  # Extreme-point bound near (0', 0) on the Siegel side
  ellipsoid-squeezer bound --spec ball.json --method extreme --r 1 --rp 0.5 --c 1 --point 0,0,0.01,0

  # Many points in parallel, CSV output
  ellipsoid-squeezer sweep --spec ball.json --points-file points.txt --jobs 4 --format csv
"""

OPTION_SECTIONS = (
    ("Main Options", ["spec", "out", "format_name", "seed", "samples", "tol", "jobs"]),
    ("Geometry Options", ["method", "r", "rp", "c", "lam", "point", "points_file", "eps_grid", "exclusion"]),
    ("Map Options", ["map_name", "a", "theta"]),
    ("Output Options", ["minimal", "verbose"]),
)


def setup_logging(verbose: bool, minimal: bool):
    """Route library logging through rich."""
    level = logging.DEBUG if verbose else logging.WARNING
    if minimal and not verbose:
        level = logging.ERROR
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, show_path=verbose)],
        force=True,
    )


def print_intro(config: RunConfig):
    """Print an introduction panel for the run."""
    console.print(Panel.fit(
        f"[bold cyan]Ellipsoid Squeezer[/bold cyan] - [bold yellow]{config.command}[/bold yellow]"
        + (f" on [bold yellow]{config.spec_path}[/bold yellow]" if config.spec_path else ""),
        border_style="cyan",
        padding=(1, 2)
    ))


def _summary_rows(result: RunResult):
    body = result.result
    if result.command == "validate":
        yield "Valid", str(body.get("valid"))
        yield "Balanced", str(body.get("balanced"))
        comparability = body.get("comparability") or {}
        yield "c1 / c2", f"{comparability.get('c1')} / {comparability.get('c2')}"
    elif result.command == "wb-check":
        yield "Pass", str(body.get("pass"))
        yield "Min eigenvalue", f"{body.get('min_eigenvalue')}"
        yield "Samples", str(body.get("samples"))
        for entry in body.get("trend", []):
            yield f"Shell {entry['radius']:.4g}", f"{entry['min_eig']}"
    elif result.command == "levi":
        yield "Classification", body.get("classification", "")
        yield "Eigenvalues", ", ".join(f"{e:.6g}" for e in body.get("restricted_eigenvalues", []))
    elif result.command == "bound":
        yield "Method", body.get("method", "")
        yield "Bound", f"{body.get('bound', float('nan')):.10g}"
    elif result.command == "sweep":
        summary = body.get("summary", {})
        yield "Points", str(summary.get("count"))
        yield "Failed", str(summary.get("failed"))
        yield "Min bound", f"{summary.get('min_bound')}"
    elif result.command == "maps-verify":
        yield "Pass", str(body.get("pass"))
        yield "Sign disagreements", str(body.get("sign_disagreements"))
        yield "Max boundary residual", f"{body.get('max_boundary_residual'):.3e}"
    elif result.command == "orbit-trace":
        yield "Case", str(body.get("case"))
        yield "Constant", f"{body.get('constant')}"
    elif result.command == "hhr-scan":
        yield "Conclusion", body.get("conclusion", "")
        for link in body.get("links", []):
            yield link["link"], f"{link['status']}: {link['holds']}"


def print_summary(result: RunResult, output_path: str, format_name: str):
    """Print a summary of the run."""
    if result.error is not None:
        console.print(Panel.fit(
            f"[bold red]{result.error['type']}[/bold red]: {result.error['message']}\n"
            f"Report written to: [bold cyan]{output_path}[/bold cyan]",
            title="Error",
            border_style="red",
            padding=(1, 2)
        ))
        return

    table = Table(title=f"{result.command} summary")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", style="yellow")
    for name, value in _summary_rows(result):
        table.add_row(name, value)

    style = "green" if result.exit_code == 0 else "yellow"
    console.print()
    console.print(Panel.fit(
        f"[bold {style}]{'Run complete' if result.exit_code == 0 else 'Check failed'}[/bold {style}]\n"
        f"Output written to: [bold cyan]{output_path}[/bold cyan]\n"
        f"Format: [yellow]{format_name}[/yellow]",
        title="Summary",
        border_style=style,
        padding=(1, 2)
    ))
    console.print()
    console.print(table)


def format_help_custom(ctx, formatter):
    """Custom formatter for the help command."""
    formatter.write(TOOL_DESCRIPTION)
    formatter.write("\n\n")

    with formatter.section("Usage"):
        formatter.write_text(f"ellipsoid-squeezer [OPTIONS] {{{'|'.join(COMMANDS)}}}")

    for title, names in OPTION_SECTIONS:
        formatter.write("\n")
        with formatter.section(title):
            for param in ctx.command.get_params(ctx):
                if param.name in names:
                    help_record = param.get_help_record(ctx)
                    if help_record:
                        formatter.write_dl([help_record])

    formatter.write("\n")
    with formatter.section("Other Options"):
        formatter.write_dl([
            (("-h, --help"), ("Show this help message and exit."))
        ])

    formatter.write("\n")
    formatter.write(EXAMPLE_USAGE)


def read_points_file(path: str):
    """One interleaved point per line; blank lines and lines starting with # are skipped."""
    points = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#"):
                points.append(parse_point(line))
    return points


def write_report(report, output: str, format_name: str):
    formatter = FORMATTERS[format_name]()
    with open(output, "w", encoding="utf-8", newline="") as f:
        formatter.format(report, f)


@click.command(context_settings=dict(
    help_option_names=['-h', '--help'],
    max_content_width=250
))
@click.argument("command", type=click.Choice(COMMANDS), metavar="COMMAND")
@click.option("--spec", "spec", type=click.Path(), help="Domain JSON spec (polynomial plus optional model, r, lambda).")
@click.option("-o", "--out", type=click.Path(writable=True),
              help="Report path. Default: <command>-report.<format>")
@click.option("-f", "--format", "format_name", type=click.Choice(list(FORMATTERS.keys())), default="json",
              help="Report format. Options: json (default), csv")
@click.option("--seed", type=int, default=0, help="Seed of every random stream. Default: 0")
@click.option("--samples", type=click.IntRange(min=1), default=None,
              help="Samples for wb-check and maps-verify (default 1000), and per level of hhr-scan (default 50).")
@click.option("--tol", type=float, default=1e-8, help="Levi eigenvalue threshold. Default: 1e-8")
@click.option("--jobs", type=click.IntRange(min=1), default=1, help="Worker threads for sweep and hhr-scan. Default: 1")
@click.option("--method", type=click.Choice(BOUND_METHODS), default="lemma21",
              help="Bound method for bound and sweep. Options: lemma21 (default), slice, extreme")
@click.option("--r", "r", type=float, default=1.0, help="Scale r of D^r, or of the horosphere D(r) for extreme. Default: 1")
@click.option("--rp", type=float, default=0.5, help="Scale r' of the approach region for extreme. Default: 0.5")
@click.option("--c", "c", type=float, default=1.0, help="Aperture c of the approach cone for extreme. Default: 1")
@click.option("--lambda", "lam", type=float, default=None, help="Dilation scale for maps-verify and horosphere models.")
@click.option("--point", multiple=True, help="Point as interleaved re,im,... floats. Can be used multiple times.")
@click.option("--points-file", type=click.Path(exists=True), help="File with one interleaved point per line.")
@click.option("--eps-grid", default="0.5,0.2,0.1", help="Comma-separated epsilon grid for hhr-scan. Default: 0.5,0.2,0.1")
@click.option("--exclusion", type=float, default=0.1,
              help="Exclusion radius sigma(z') >= radius for wb-check and hhr-scan. Default: 0.1")
@click.option("--map", "map_name", type=click.Choice(list(MAP_TYPES.keys())), default="cayley",
              help="Map for maps-verify. Default: cayley")
@click.option("--a", "a", default="0,0", help="Automorphism parameter a as re,im. Default: 0,0")
@click.option("--theta", type=float, default=0.0, help="Automorphism rotation angle in radians. Default: 0")
@click.option("--minimal", is_flag=True, default=False,
              help="Use minimal output mode with less verbose console output. Default: False")
@click.option("--verbose", is_flag=True, default=False, help="Show debug logging from the numerical pipelines.")
def main(command, spec, out, format_name, seed, samples, tol, jobs, method, r, rp, c, lam, point, points_file,
         eps_grid, exclusion, map_name, a, theta, minimal, verbose):
    """
    Run one squeezing-function pipeline on a general ellipsoid and write its report.

    Exit codes: 0 success or pass, 1 malformed input, 2 validation or check failure,
    3 numerical non-convergence.
    """
    ctx = click.get_current_context()
    ctx.command.format_help = lambda ctx, formatter: format_help_custom(ctx, formatter)
    setup_logging(verbose, minimal)

    if out is None:
        out = f"{command}-report.{FORMATTERS[format_name].extension}"

    try:
        points = [parse_point(p) for p in point]
        if points_file:
            points.extend(read_points_file(points_file))
        a_value = parse_point(a)
        config = RunConfig(
            command=command,
            spec_path=spec,
            out=out,
            format=format_name,
            seed=seed,
            samples=samples,
            tol=tol,
            jobs=jobs,
            method=method,
            r=r,
            rp=rp,
            c=c,
            lam=lam,
            points=points,
            eps_grid=parse_float_list(eps_grid),
            exclusion=exclusion,
            map_name=map_name,
            a=a_value[0],
            theta=theta,
            minimal=minimal,
            verbose=verbose,
        )
    except SqueezerError as e:
        console.print(f"[bold red]Error:[/bold red] {e.message}", style="red")
        write_report({"command": command, "status": "error", "exit_code": e.exit_code, "error": e.to_dict()},
                     out, format_name)
        sys.exit(e.exit_code)

    if not minimal:
        print_intro(config)

    try:
        with Progress(
                SpinnerColumn(),
                TextColumn("[bold cyan]{task.description}[/bold cyan]"),
                BarColumn(),
                TaskProgressColumn(),
                expand=True,
                console=console,
                disable=minimal
        ) as progress:
            runner = SqueezeRunner(config, progress if not minimal else None)
            result = runner.run()
    except Exception as e:
        console.print(f"[bold red]Error:[/bold red] {str(e)}", style="red")
        if not minimal:
            console.print_exception()
        result = RunResult(command, 1, error={"type": type(e).__name__, "message": str(e), "exit_code": 1,
                                              "details": {}})

    write_report(build_report(config, result), out, format_name)

    if not minimal:
        print_summary(result, str(Path(out)), format_name)
    else:
        console.print(f"{command}: {result.status}. Output written to: {out}")

    sys.exit(result.exit_code)


if __name__ == "__main__":
    main()
