"""Command-line entry point: kdp verify | evolve | transform | bell | observables.

Exit codes: 0 success, 1 verification failure, 2 parse or usage error,
3 CFL violation, 4 numerical instability.
"""

import math
import logging
from pathlib import Path
import click
import numpy as np
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table
from src.shared.conf import Config
from src.shared.schema import BellSettings, Command
from src.algebra.exceptions import RepresentationError
from src.algebra.representation import build_standard_rep, verify_algebra
from src.fields.exceptions import SnapshotFormatError
from src.fields.repository import SnapshotRepository
from src.dynamics.conf import load_run_config
from src.dynamics.exceptions import CFLViolationError, InstabilityError, PeriodicityError, RunConfigError, ShapeMismatchError, TransverseError
from src.dynamics.initial_data import build_initial_grid
from src.dynamics.service import EvolutionService
from src.lorentz.exceptions import InvalidAxisError
from src.lorentz.transformations import apply_to_grid, boost, rotation
from src.bell.correlations import BELL_BOUND, bell_lhs, correlation, entangled_state, violation_scan
from src.cli.manifest import write_manifest

logger = logging.getLogger("CLI")
console = Console()

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_CFL = 3
EXIT_INSTABILITY = 4

FULL_SPAN_DIMENSION = 100
TIMESERIES_COLUMNS = ("time", "total_energy", "div_E_residual", "curl_A_residual", "full_constraint_residual")
SCAN_COLUMNS = ("alpha_deg", "beta_deg", "gamma_deg", "lhs", "violated")


class AngleType(click.ParamType):
    """Angle given as <number>d (degrees) or <number>r (radians), converted to radians."""

    name = "angle"

    def convert(self, value, param, ctx):
        if isinstance(value, float):
            return value
        text = str(value).strip().lower()
        unit, number = text[-1:], text[:-1]
        try:
            magnitude = float(number)
        except ValueError:
            self.fail(f"{value!r} is not an angle such as 30d or 0.5r", param, ctx)
        if not math.isfinite(magnitude):
            self.fail(f"{value!r} is not a finite angle", param, ctx)
        if unit == "d":
            return math.radians(magnitude)
        if unit == "r":
            return magnitude
        self.fail(f"{value!r} needs a unit suffix: d for degrees or r for radians", param, ctx)


ANGLE = AngleType()


def _configure_logging(level: str):
    logging.basicConfig(level=level.upper(), format="%(message)s", datefmt="[%X]", handlers=[RichHandler(console=Console(stderr=True))], force=True)


def _axis(value: str):
    """Axis option: a name x, y, z or three comma-separated components."""
    if value.lower() in ("x", "y", "z"):
        return value.lower()
    try:
        return [float(part) for part in value.split(",")]
    except ValueError:
        raise click.BadParameter(f"{value!r} is not an axis name or three comma-separated numbers")


@click.group()
@click.option("--output-dir", type=click.Path(file_okay=False, path_type=Path), default=Path("kdp-output"), show_default=True, help="Directory for every output of the run.")
@click.option("--seed", type=click.IntRange(min=0), default=Config.RANDOM_SEED, show_default=True, help="Seed recorded in the run manifest.")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False), default=Config.LOG_LEVEL, show_default=True)
@click.pass_context
def cli(ctx, output_dir: Path, seed: int, log_level: str):
    """Classical electrodynamics in Kemmer-Duffin-Petiau form."""
    _configure_logging(log_level)
    ctx.ensure_object(dict)
    ctx.obj.update(output_dir=output_dir, seed=seed)


@cli.command()
@click.option("--tolerance", type=click.FloatRange(min=0), default=Config.ALGEBRA_TOLERANCE, show_default=True, help="Largest admissible identity residual.")
@click.option("--format", "output_format", type=click.Choice(["text", "kv"]), default="text", show_default=True)
@click.pass_context
def verify(ctx, tolerance: float, output_format: str):
    """Check every algebra identity and the span dimension of the standard representation."""
    try:
        rep = build_standard_rep()
    except RepresentationError as e:
        logger.error(f"Standard representation could not be built: {e}")
        ctx.exit(EXIT_VERIFICATION_FAILED)
    report = verify_algebra(rep, tolerance)
    passed = report.passed and report.span_dimension == FULL_SPAN_DIMENSION

    if output_format == "kv":
        for name, residual in report.identity_breakdown:
            click.echo(f"{name}={residual:.6e}")
        click.echo(f"max_residual={report.max_residual:.6e}")
        click.echo(f"span_dimension={report.span_dimension}")
        click.echo(f"tolerance={tolerance:.6e}")
        click.echo(f"passed={int(passed)}")
    else:
        table = Table(title="KDP algebra identities")
        table.add_column("identity")
        table.add_column("residual", justify="right")
        table.add_column("status")
        for name, residual in report.identity_breakdown:
            table.add_row(name, f"{residual:.3e}", "ok" if residual <= tolerance else "FAIL")
        table.add_row("span_dimension", str(report.span_dimension), "ok" if report.span_dimension == FULL_SPAN_DIMENSION else "FAIL")
        console.print(table)
        console.print(f"{'PASS' if passed else 'FAIL'}: max residual {report.max_residual:.3e} at tolerance {tolerance:.1e}")

    write_manifest(Command.VERIFY, ctx.obj["output_dir"], ctx.obj["seed"], f"verify tolerance={tolerance!r}")
    if not passed:
        logger.error(f"Verification failed: {report.failing()}, span dimension {report.span_dimension}")
        ctx.exit(EXIT_VERIFICATION_FAILED)


@cli.command()
@click.argument("config_path", type=click.Path(path_type=Path))
@click.pass_context
def evolve(ctx, config_path: Path):
    """Evolve the lattice state described by CONFIG_PATH."""
    try:
        run_config = load_run_config(config_path)
        cfg = run_config.evolution_config()
        grid = build_initial_grid(run_config)
    except CFLViolationError as e:
        logger.error(str(e))
        ctx.exit(EXIT_CFL)
    except (RunConfigError, PeriodicityError, TransverseError, ShapeMismatchError, SnapshotFormatError, FileNotFoundError) as e:
        logger.error(str(e))
        ctx.exit(EXIT_USAGE)

    output_dir = run_config.resolve(run_config.output_dir) if run_config.output_dir is not None else ctx.obj["output_dir"]
    output_dir.mkdir(parents=True, exist_ok=True)
    repository = SnapshotRepository(output_dir)

    def save_snapshot(snapshot, index):
        if run_config.snapshot_every or index == cfg.steps:
            repository.write_snapshot(snapshot, f"snapshot_{index:06d}.kdp")

    rep = build_standard_rep()
    try:
        result = EvolutionService(rep, cfg).evolve(grid, on_snapshot=save_snapshot, snapshot_every=run_config.snapshot_every)
    except InstabilityError as e:
        logger.critical(str(e))
        ctx.exit(EXIT_INSTABILITY)

    missing = float("nan")
    rows = [
        (time, energy, report.div_E_residual, report.curl_A_residual if report.curl_A_residual is not None else missing, report.full_constraint_residual if report.full_constraint_residual is not None else missing)
        for time, energy, report in zip(result.times, result.series["total_energy"], result.reports)
    ]
    np.savetxt(output_dir / "timeseries.csv", np.array(rows), delimiter=",", header=",".join(TIMESERIES_COLUMNS), comments="", fmt="%.17g")

    first, last = result.reports[0], result.reports[-1]
    console.print(f"energy drift: {result.energy_drift():.3e}")
    console.print(f"div E residual: {first.div_E_residual:.3e} -> {last.div_E_residual:.3e}")
    if last.curl_A_residual is not None:
        console.print(f"H - curl A residual: {first.curl_A_residual:.3e} -> {last.curl_A_residual:.3e}")
    write_manifest(Command.EVOLVE, output_dir, ctx.obj["seed"], "evolve", config_path)


@cli.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("output_path", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--kind", type=click.Choice(["rotation", "boost"]), required=True)
@click.option("--axis", default="z", show_default=True, help="Axis or boost direction: x, y, z or nx,ny,nz (unit length).")
@click.option("--angle", type=ANGLE, default="0d", show_default=True, help="Rotation angle, e.g. 90d or 1.5708r.")
@click.option("--rapidity", type=float, default=0.0, show_default=True, help="Boost rapidity.")
@click.pass_context
def transform(ctx, input_path: Path, output_path: Path, kind: str, axis: str, angle: float, rapidity: float):
    """Apply a rotation or boost to every site of a snapshot."""
    repository = SnapshotRepository()
    try:
        grid = repository.read_snapshot(input_path)
    except SnapshotFormatError as e:
        logger.error(str(e))
        ctx.exit(EXIT_USAGE)
    rep = build_standard_rep()
    try:
        element = rotation(rep, _axis(axis), angle) if kind == "rotation" else boost(rep, _axis(axis), rapidity)
    except InvalidAxisError as e:
        logger.error(str(e))
        ctx.exit(EXIT_USAGE)
    written = repository.write_snapshot(apply_to_grid(element, grid), output_path)
    console.print(f"{kind} written to {written}")
    write_manifest(Command.TRANSFORM, ctx.obj["output_dir"], ctx.obj["seed"], f"transform {kind} axis={axis} angle={angle!r} rapidity={rapidity!r}", input_path)


@cli.command()
@click.option("--alpha", type=ANGLE, default="0d", show_default=True)
@click.option("--beta", type=ANGLE, default="30d", show_default=True)
@click.option("--gamma", "gamma_angle", type=ANGLE, default="60d", show_default=True)
@click.option("--scan", type=click.IntRange(min=2), default=None, help="Also scan an N x N x N angle grid and write bell_scan.csv.")
@click.pass_context
def bell(ctx, alpha: float, beta: float, gamma_angle: float, scan: int | None):
    """Correlations and Bell functional of the entangled two-beam state."""
    state = entangled_state()
    settings = BellSettings(alpha=alpha, beta=beta, gamma_angle=gamma_angle)
    lhs = bell_lhs(state, settings)
    console.print(f"E(alpha, beta) = {correlation(state, alpha, beta):.12f}")
    console.print(f"E(alpha, gamma) = {correlation(state, alpha, gamma_angle):.12f}")
    console.print(f"E(beta, gamma) = {correlation(state, beta, gamma_angle):.12f}")
    console.print(f"lhs = {lhs:.12f}, violated = {int(lhs > BELL_BOUND)}")

    output_dir = ctx.obj["output_dir"]
    output_dir.mkdir(parents=True, exist_ok=True)
    if scan is not None:
        result = violation_scan(state, scan)
        degrees = np.degrees(result.table[:, :3])
        lhs_column = result.table[:, 3:]
        table = np.hstack([degrees, lhs_column, (lhs_column > BELL_BOUND).astype(float)])
        target = output_dir / "bell_scan.csv"
        np.savetxt(target, table, delimiter=",", header=",".join(SCAN_COLUMNS), comments="", fmt=["%.10g", "%.10g", "%.10g", "%.17g", "%d"])
        console.print(f"max lhs = {result.max_lhs:.12f} over {table.shape[0]} settings, written to {target}")
    write_manifest(Command.BELL, output_dir, ctx.obj["seed"], f"bell alpha={alpha!r} beta={beta!r} gamma={gamma_angle!r} scan={scan}")


@cli.command()
@click.argument("snapshot_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.pass_context
def observables(ctx, snapshot_path: Path):
    """Write per-site energy density and Poynting vector of a snapshot to observables.csv."""
    repository = SnapshotRepository(ctx.obj["output_dir"])
    try:
        grid = repository.read_snapshot(snapshot_path.resolve())
    except SnapshotFormatError as e:
        logger.error(str(e))
        ctx.exit(EXIT_USAGE)
    target = repository.write_observables(build_standard_rep(), grid, "observables.csv", Config.SPEED_OF_LIGHT)
    console.print(f"total energy {grid.total_energy():.12g}, observables written to {target}")
    write_manifest(Command.OBSERVABLES, ctx.obj["output_dir"], ctx.obj["seed"], "observables", snapshot_path)


if __name__ == "__main__":
    cli()
