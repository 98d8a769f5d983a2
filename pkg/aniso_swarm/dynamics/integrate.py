from __future__ import annotations

import time as wall_clock
from collections.abc import Callable

import numpy as np
from scipy.integrate import RK45

from aniso_swarm.dynamics.cells import candidate_pairs
from aniso_swarm.dynamics.models import (
    DormandPrince,
    Euler,
    NeighborMethod,
    ParticleState,
    SimConfig,
    SimulationResult,
    Termination,
    wrap_positions,
)
from aniso_swarm.errors import CoincidentParticlesError, StepSizeUnderflowError
from aniso_swarm.field import ForcePair, TensorField, pair_forces, wrap_displacement
from aniso_swarm.log import logger

COINCIDENCE_DISTANCE = 1e-12
MIN_STEP = 1e-14


def velocities(
    positions: np.ndarray,
    field: TensorField,
    pair: ForcePair,
    method: NeighborMethod = NeighborMethod.CELL_LIST,
) -> np.ndarray:
    """(1/N) sum over k != j of F(wrap(x_j - x_k)), summed in ascending k for every j."""
    n_particles = positions.shape[0]
    delta = pair.domain_size
    j, k = candidate_pairs(positions, pair.r_cutoff, delta, method)

    key = j * n_particles + k
    order = np.argsort(key, kind="stable")
    j, k = j[order], k[order]

    d = wrap_displacement(positions[j] - positions[k], delta)
    r = np.sqrt(d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1])
    close = r < pair.r_cutoff
    j, k, d, r = j[close], k[close], d[close], r[close]

    coincident = np.flatnonzero(r < COINCIDENCE_DISTANCE)
    if coincident.size:
        first = coincident[0]
        raise CoincidentParticlesError(int(j[first]), int(k[first]), float(r[first]))

    forces = pair_forces(d, field, pair)
    summed = np.stack(
        [
            np.bincount(j, weights=forces[:, 0], minlength=n_particles),
            np.bincount(j, weights=forces[:, 1], minlength=n_particles),
        ],
        axis=1,
    )
    return summed / n_particles


def rhs(state: ParticleState, config: SimConfig, method: NeighborMethod | None = None) -> np.ndarray:
    return velocities(state.positions, config.field, config.pair, method or config.neighbors)


def _max_speed(v: np.ndarray) -> float:
    return float(np.max(np.hypot(v[:, 0], v[:, 1])))


def _rk45(state: ParticleState, config: SimConfig, integrator: DormandPrince, t_bound: float) -> RK45:
    n_particles = state.n_particles

    def fun(_t: float, y: np.ndarray) -> np.ndarray:
        return velocities(y.reshape(n_particles, 2), config.field, config.pair, config.neighbors).reshape(-1)

    return RK45(
        fun,
        state.time,
        state.positions.reshape(-1).copy(),
        t_bound,
        first_step=integrator.dt_init,
        max_step=integrator.dt_max,
        rtol=integrator.rel_tol,
        atol=integrator.abs_tol,
    )


def _advance_rk45(solver: RK45, domain_size: float) -> None:
    """One accepted Dormand-Prince step, positions wrapped afterwards.

    The right-hand side is periodic, so the derivative kept for the next
    step is unchanged by wrapping.
    """
    message = solver.step()
    if solver.status == "failed":
        logger.error(f"Dormand-Prince step failed at t={solver.t}: {message}")
        raise StepSizeUnderflowError(solver.t, solver.h_abs)
    if solver.status == "running" and solver.step_size < MIN_STEP:
        raise StepSizeUnderflowError(solver.t, solver.step_size)
    solver.y = wrap_positions(solver.y, domain_size)


def step(state: ParticleState, config: SimConfig) -> ParticleState:
    delta = config.pair.domain_size
    integrator = config.integrator
    if isinstance(integrator, Euler):
        dt = integrator.resolved_dt(config.pair.r_cutoff)
        moved = wrap_positions(state.positions + dt * rhs(state, config), delta)
        return ParticleState(positions=moved, time=state.time + dt, domain_size=delta)

    solver = _rk45(state, config, integrator, t_bound=np.inf)
    _advance_rk45(solver, delta)
    return ParticleState(positions=solver.y.reshape(-1, 2), time=solver.t, domain_size=delta)


class _Snapshots:
    def __init__(self, every: float | None, callback: Callable[[ParticleState], None] | None):
        self.every = every
        self.callback = callback
        self.taken: list[ParticleState] = []
        self.next_time = 0.0

    def offer(self, state: ParticleState, force: bool = False) -> None:
        if self.every is None and not force:
            return
        if not force and state.time < self.next_time:
            return
        if self.taken and self.taken[-1].time == state.time:
            return
        self.taken.append(state)
        if self.every is not None:
            while self.next_time <= state.time:
                self.next_time += self.every
        logger.debug(f"Snapshot at t={state.time:.6g}")
        if self.callback is not None:
            self.callback(state)


def simulate(
    init: ParticleState,
    config: SimConfig,
    on_snapshot: Callable[[ParticleState], None] | None = None,
) -> SimulationResult:
    """Integrate until the maximal particle speed drops below ``stationary_tol`` or ``t_max`` is reached.

    Snapshots are taken at the first state at or after every multiple of
    ``snapshot_every``; the final state is always the last snapshot.
    """
    delta = config.pair.domain_size
    snapshots = _Snapshots(config.snapshot_every, on_snapshot)
    started = wall_clock.perf_counter()
    logger.info(
        f"Simulating N={init.n_particles} with {config.integrator.kind} up to t={config.t_max} "
        f"({config.neighbors.value}, R_c={config.pair.r_cutoff})"
    )

    state = init
    snapshots.offer(state)
    v = rhs(state, config)
    speed = _max_speed(v)
    steps = 0
    termination = Termination.STATIONARY if speed < config.stationary_tol else None

    if termination is None and isinstance(config.integrator, Euler):
        dt = config.integrator.resolved_dt(config.pair.r_cutoff)
        while state.time < config.t_max:
            h = min(dt, config.t_max - state.time)
            moved = wrap_positions(state.positions + h * v, delta)
            state = ParticleState(positions=moved, time=state.time + h, domain_size=delta)
            steps += 1
            v = rhs(state, config)
            speed = _max_speed(v)
            snapshots.offer(state)
            if speed < config.stationary_tol:
                termination = Termination.STATIONARY
                break
    elif termination is None:
        solver = _rk45(state, config, config.integrator, t_bound=config.t_max)
        while solver.status == "running":
            _advance_rk45(solver, delta)
            steps += 1
            state = ParticleState(positions=solver.y.reshape(-1, 2), time=solver.t, domain_size=delta)
            speed = _max_speed(solver.f.reshape(-1, 2))
            snapshots.offer(state)
            if speed < config.stationary_tol:
                termination = Termination.STATIONARY
                break

    termination = termination or Termination.TIME_EXHAUSTED
    snapshots.offer(state, force=True)
    elapsed = wall_clock.perf_counter() - started
    logger.info(
        f"Finished with {termination.value} at t={state.time:.6g} after {steps} steps "
        f"(max speed {speed:.3e}, {elapsed:.1f}s)"
    )
    return SimulationResult(
        final=state, snapshots=snapshots.taken, termination=termination, steps=steps, max_speed=speed
    )
