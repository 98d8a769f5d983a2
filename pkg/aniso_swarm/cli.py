from collections.abc import Callable
from pathlib import Path

import typer
from pydantic import ValidationError

from aniso_swarm.app import cmd_a0_scan, cmd_force_table, cmd_rotated_scan, cmd_simulate, cmd_spectrum
from aniso_swarm.config import RunConfig, emit_config, load_config
from aniso_swarm.errors import ConfigError, DomainError, NumericalError

app = typer.Typer()

# --key=value overrides arrive as extra arguments
OVERRIDES = {"allow_extra_args": True, "ignore_unknown_options": True}

ConfigOption = typer.Option(None, "--config", "-c", help="Experiment config file (key = value lines).")


def _run(command: Callable[[RunConfig], list[Path]], config: Path | None, overrides: list[str]) -> None:
    try:
        paths = command(load_config(config, overrides))
    except (ConfigError, ValidationError) as e:
        typer.echo(f"❌ Config error: {e}", err=True)
        raise typer.Exit(1) from e
    except (DomainError, NumericalError) as e:
        typer.echo(f"❌ Numerical error: {e}", err=True)
        raise typer.Exit(2) from e
    for path in paths:
        typer.echo(str(path))


@app.command(context_settings=OVERRIDES)
def simulate(ctx: typer.Context, config: Path | None = ConfigOption):
    """Integrate the particle model and write snapshots plus a summary."""
    _run(cmd_simulate, config, ctx.args)


@app.command(context_settings=OVERRIDES)
def spectrum(ctx: typer.Context, config: Path | None = ConfigOption):
    """Eigenvalue spectrum and verdict of a straight-line steady state."""
    _run(cmd_spectrum, config, ctx.args)


@app.command("force-table", context_settings=OVERRIDES)
def force_table(ctx: typer.Context, config: Path | None = ConfigOption):
    """Tabulate the interaction coefficients over a radius grid."""
    _run(cmd_force_table, config, ctx.args)


@app.command("a0-scan", context_settings=OVERRIDES)
def a0_scan(ctx: typer.Context, config: Path | None = ConfigOption):
    """Stability threshold scan for linear coefficients."""
    _run(cmd_a0_scan, config, ctx.args)


@app.command("rotated-scan", context_settings=OVERRIDES)
def rotated_scan(ctx: typer.Context, config: Path | None = ConfigOption):
    """High-wave stability conditions of lines at every admissible angle."""
    _run(cmd_rotated_scan, config, ctx.args)


@app.command("show-config", context_settings=OVERRIDES)
def show_config(ctx: typer.Context, config: Path | None = ConfigOption):
    """Print the effective configuration after overrides."""
    try:
        typer.echo(emit_config(load_config(config, ctx.args)), nl=False)
    except (ConfigError, ValidationError) as e:
        typer.echo(f"❌ Config error: {e}", err=True)
        raise typer.Exit(1) from e


if __name__ == "__main__":
    app()
