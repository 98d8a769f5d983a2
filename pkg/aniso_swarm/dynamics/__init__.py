from aniso_swarm.dynamics.initial import init_circle, init_line, tile_periodically
from aniso_swarm.dynamics.integrate import rhs, simulate, step, velocities
from aniso_swarm.dynamics.models import (
    DormandPrince,
    Euler,
    NeighborMethod,
    ParticleState,
    SimConfig,
    SimulationResult,
    Termination,
)

__all__ = [
    "DormandPrince",
    "Euler",
    "NeighborMethod",
    "ParticleState",
    "SimConfig",
    "SimulationResult",
    "Termination",
    "init_circle",
    "init_line",
    "rhs",
    "simulate",
    "step",
    "tile_periodically",
    "velocities",
]
