from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from aniso_swarm.dynamics.models import ParticleState

if TYPE_CHECKING:
    from aniso_swarm.linestab.ansatz import LineAnsatz


def init_circle(
    n: int,
    center: tuple[float, float] = (0.5, 0.5),
    radius: float = 0.005,
    domain_size: float = 1.0,
) -> ParticleState:
    """N particles equiangularly on a circle, the first at angle 0."""
    if n < 2:
        raise ValueError(f"At least two particles are required, got {n}")
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    angles = 2 * np.pi * np.arange(n) / n
    positions = np.column_stack([center[0] + radius * np.cos(angles), center[1] + radius * np.sin(angles)])
    return ParticleState.wrapped(positions, domain_size=domain_size)


def tile_periodically(state: ParticleState, tiles: int) -> ParticleState:
    """Replicate a state into every cell of a ``tiles x tiles`` enlargement of its domain."""
    if tiles < 1:
        raise ValueError(f"tiles must be at least 1, got {tiles}")
    delta = state.domain_size
    shifts = np.array([(i * delta, j * delta) for i in range(tiles) for j in range(tiles)])
    positions = (state.positions[None, :, :] + shifts[:, None, :]).reshape(-1, 2)
    return ParticleState.wrapped(positions, time=state.time, domain_size=delta * tiles)


def init_line(ansatz: LineAnsatz, jitter: float = 0.0, seed: int = 0) -> ParticleState:
    """Line steady state plus uniform jitter from a Philox stream keyed by ``seed``."""
    from aniso_swarm.linestab.ansatz import line_positions

    positions = line_positions(ansatz)
    if jitter > 0:
        rng = np.random.Generator(np.random.Philox(seed))
        positions = positions + rng.uniform(-jitter, jitter, size=positions.shape)
    return ParticleState.wrapped(positions, domain_size=ansatz.domain_size)
