from __future__ import annotations

import time as wall_clock
from pathlib import Path

import numpy as np

from aniso_swarm.coeffs.cutoff import eval_arrays
from aniso_swarm.coeffs.models import Composite, KuckenAttraction, KuckenRepulsion
from aniso_swarm.config import RunConfig, emit_config
from aniso_swarm.csvio import write_rows, write_snapshot
from aniso_swarm.dynamics.initial import init_circle, init_line, tile_periodically
from aniso_swarm.dynamics.integrate import simulate
from aniso_swarm.dynamics.models import ParticleState
from aniso_swarm.errors import ConfigError
from aniso_swarm.linestab.closed_forms import linear_threshold_a0
from aniso_swarm.linestab.highwave import rotated_sweep
from aniso_swarm.linestab.spectrum import (
    SpectrumSource,
    Verdict,
    default_modes,
    fold_large_modes,
    horizontal_line_eigs_array,
    verdict_of,
    vertical_line_eigs_continuum_array,
    vertical_line_eigs_discrete_array,
)
from aniso_swarm.log import logger

SPECTRUM_HEADER = ("m", "re_lambda1", "im_lambda1", "re_lambda2", "im_lambda2", "source")
SUMMARY_HEADER = ("termination", "final_time", "final_residual", "steps", "wall_time")
FORCES_HEADER = ("r", "f_R", "f_A", "f_l", "f_s")
A0_HEADER = ("R_c", "m", "h_over_g", "Rc_times_max")
ROTATED_HEADER = ("theta", "I11", "I12", "I21", "I22", "trace", "det", "stable_necessary")


def _prepare(config: RunConfig) -> Path:
    """Create the output directory and echo the effective config into it."""
    output_dir = config.output_dir
    output_dir.mkdir(parents=True, exist_ok=True)
    (output_dir / "config.cfg").write_text(emit_config(config), encoding="utf-8")
    return output_dir


def _written(path: Path) -> Path:
    logger.info(f"Wrote {path}")
    return path


def initial_state(config: RunConfig) -> ParticleState:
    init = config.init
    if init.kind == "line":
        return init_line(config.line_ansatz(), jitter=init.jitter, seed=config.seed)

    cell = config.pair.domain_size / init.tiles
    state = init_circle(init.n, center=(init.center_x, init.center_y), radius=init.radius, domain_size=cell)
    return tile_periodically(state, init.tiles) if init.tiles > 1 else state


def cmd_simulate(config: RunConfig) -> list[Path]:
    """Run the particle model, writing each snapshot as it is taken plus ``summary.csv``."""
    output_dir = _prepare(config)
    sim_config = config.sim_config()
    state = initial_state(config)
    written: list[Path] = [output_dir / "config.cfg"]

    started = wall_clock.perf_counter()
    result = simulate(state, sim_config, on_snapshot=lambda s: written.append(write_snapshot(output_dir, s)))
    wall_time = wall_clock.perf_counter() - started

    summary = write_rows(
        output_dir / "summary.csv",
        SUMMARY_HEADER,
        [(result.termination.value, result.final.time, result.max_speed, result.steps, wall_time)],
    )
    written.append(_written(summary))
    return written


def _mode_range(config: RunConfig, n: int | None) -> np.ndarray:
    spectrum = config.spectrum
    if spectrum.m_max is None:
        modes = default_modes(config.force_pair(), n)
        return modes[modes >= spectrum.m_min]
    return np.arange(spectrum.m_min, spectrum.m_max + 1)


def cmd_spectrum(config: RunConfig) -> list[Path]:
    """Write ``spectrum.csv`` and ``verdict.csv`` for the configured line and mode range."""
    output_dir = _prepare(config)
    pair = config.force_pair()
    spectrum = config.spectrum
    quadrature = config.quadrature()

    n = None
    if spectrum.source is SpectrumSource.DISCRETE:
        if spectrum.line == "horizontal":
            raise ConfigError("horizontal line spectra are continuum only", key="spectrum.source")
        n = spectrum.n or config.line.n
    modes = _mode_range(config, n)
    if modes.size == 0:
        raise ConfigError("empty mode range", key="spectrum.m_max")


    verdict: Verdict | None = None
    if spectrum.line == "horizontal":
        lambda1, lambda2 = horizontal_line_eigs_array(modes, pair, quadrature)
    elif n is None:
        lambda1, lambda2 = vertical_line_eigs_continuum_array(modes, pair, quadrature)
        if spectrum.m_max is None:
            modes, lambda1, lambda2, verdict = fold_large_modes(pair, modes, lambda1, lambda2, quadrature)
    else:
        if modes.max() >= n:
            raise ConfigError(f"discrete modes must lie in 1..{n - 1}", key="spectrum.m_max")
        lambda1, lambda2 = vertical_line_eigs_discrete_array(n, modes, pair)

    source = spectrum.source.value if n is None else f"discrete_{n}"
    rows = [
        (int(m), l1.real, l1.imag, l2.real, l2.imag, source) for m, l1, l2 in zip(modes, lambda1, lambda2)
    ]
    if verdict is None:
        verdict = verdict_of(lambda1, lambda2)
    logger.info(f"{spectrum.line.capitalize()} line, {source}: {verdict.value}")
    return [
        output_dir / "config.cfg",
        _written(write_rows(output_dir / "spectrum.csv", SPECTRUM_HEADER, rows)),
        _written(
            write_rows(
                output_dir / "verdict.csv",
                ("line", "source", "m_min", "m_max", "verdict"),
                [(spectrum.line, source, int(modes.min()), int(modes.max()), verdict.value)],
            )
        ),
    ]


def _kucken_members(config: RunConfig) -> tuple[KuckenRepulsion, KuckenAttraction]:
    """Repulsion and attraction from a composite ``fl``, falling back to the default parameters."""
    repulsion = KuckenRepulsion(alpha=270.0, beta=0.1, e_r=100.0)
    attraction = KuckenAttraction(gamma=35.0, e_a=95.0)
    family = config.fl.family if config.fl is not None else None
    if isinstance(family, Composite):
        for member in family.members:
            if isinstance(member.family, KuckenRepulsion):
                repulsion = member.family
            elif isinstance(member.family, KuckenAttraction):
                attraction = member.family
    return repulsion, attraction


def cmd_force_table(config: RunConfig) -> list[Path]:
    """Tabulate raw f_R, f_A and the cut coefficients f_l, f_s over ``forces.r_min..forces.r_max``."""
    output_dir = _prepare(config)
    forces = config.forces
    if forces.r_max <= forces.r_min:
        raise ConfigError(f"must exceed forces.r_min = {forces.r_min}", key="forces.r_max")
    r = np.linspace(forces.r_min, forces.r_max, forces.points)
    repulsion, attraction = _kucken_members(config)
    pair = config.force_pair()
    f_l, _ = eval_arrays(pair.f_l, r)
    f_s, _ = eval_arrays(pair.f_s, r)
    rows = zip(r, repulsion.value(r), attraction.value(r), f_l, f_s)
    return [output_dir / "config.cfg", _written(write_rows(output_dir / "forces.csv", FORCES_HEADER, rows))]


def cmd_a0_scan(config: RunConfig) -> list[Path]:
    """h/g curves and the scaled maximum R_c max_m h/g for every configured cutoff."""
    output_dir = _prepare(config)
    scan = config.scan
    rows = []
    for r_cutoff in scan.r_cutoffs:
        result = linear_threshold_a0(scan.b, r_cutoff, scan.epsilon, scan.m_max)
        scaled = r_cutoff * result.max_ratio
        logger.info(f"R_c={r_cutoff}: a0={result.a0:.6g} at m={result.argmax_m}, R_c max h/g={scaled:.6g}")
        rows.extend((r_cutoff, m, ratio, scaled) for m, ratio in result.curve)
    return [output_dir / "config.cfg", _written(write_rows(output_dir / "a0_scan.csv", A0_HEADER, rows))]


def cmd_rotated_scan(config: RunConfig) -> list[Path]:
    """High-wave matrix of the line at every admissible angle up to ``rotated.max_n``."""
    output_dir = _prepare(config)
    results = rotated_sweep(config.force_pair(), config.rotated.max_n, config.quadrature())
    rows = [
        (r.theta, r.i11, r.i12, r.i21, r.i22, r.trace, r.det, r.stable_necessary) for r in results
    ]
    return [output_dir / "config.cfg", _written(write_rows(output_dir / "rotated.csv", ROTATED_HEADER, rows))]
