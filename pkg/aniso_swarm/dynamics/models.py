from __future__ import annotations

from enum import Enum
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from aniso_swarm.field import ForcePair, TensorField


def wrap_positions(positions: np.ndarray, domain_size: float) -> np.ndarray:
    """Map coordinates into [0, delta)."""
    wrapped = positions - domain_size * np.floor(positions / domain_size)
    return np.where(wrapped >= domain_size, 0.0, wrapped)


class NeighborMethod(str, Enum):
    BRUTE_FORCE = "brute_force"
    CELL_LIST = "cell_list"


class Termination(str, Enum):
    STATIONARY = "stationary"
    TIME_EXHAUSTED = "time_exhausted"


class ParticleState(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    positions: np.ndarray
    time: float = Field(default=0.0, ge=0)
    domain_size: float = Field(default=1.0, gt=0)

    @field_validator("positions", mode="before")
    @classmethod
    def as_read_only_array(cls, value: object) -> np.ndarray:
        positions = np.array(value, dtype=float)
        positions.setflags(write=False)
        return positions

    @model_validator(mode="after")
    def check_positions(self) -> ParticleState:
        if self.positions.ndim != 2 or self.positions.shape[1] != 2:
            raise ValueError(f"positions must have shape (N, 2), got {self.positions.shape}")
        if self.positions.shape[0] < 2:
            raise ValueError(f"At least two particles are required, got {self.positions.shape[0]}")
        if np.any(self.positions < 0) or np.any(self.positions >= self.domain_size):
            raise ValueError(f"All coordinates must lie in [0, {self.domain_size})")
        return self

    @classmethod
    def wrapped(cls, positions: np.ndarray, time: float = 0.0, domain_size: float = 1.0) -> ParticleState:
        wrapped = wrap_positions(np.asarray(positions, dtype=float), domain_size)
        return cls(positions=wrapped, time=time, domain_size=domain_size)

    @property
    def n_particles(self) -> int:
        return self.positions.shape[0]


class Euler(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["euler"] = "euler"
    dt: float | None = Field(default=None, gt=0)

    def resolved_dt(self, r_cutoff: float) -> float:
        """Configured step, or 1e-4 scaled down for cutoffs below 0.1."""
        if self.dt is not None:
            return self.dt
        return 1e-4 * min(1.0, r_cutoff / 0.1)


class DormandPrince(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["dormand_prince"] = "dormand_prince"
    abs_tol: float = Field(default=1e-9, gt=0)
    rel_tol: float = Field(default=1e-6, gt=0)
    dt_init: float = Field(default=1e-4, gt=0)
    dt_max: float = Field(default=10.0, gt=0)


Integrator = Annotated[Union[Euler, DormandPrince], Field(discriminator="kind")]


class SimConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    pair: ForcePair
    field: TensorField = TensorField()
    integrator: Integrator = Euler()
    t_max: float = Field(default=100.0, gt=0)
    stationary_tol: float = Field(default=1e-8, ge=0)
    snapshot_every: float | None = Field(default=None, gt=0)
    neighbors: NeighborMethod = NeighborMethod.CELL_LIST


class SimulationResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    final: ParticleState
    snapshots: list[ParticleState]
    termination: Termination
    steps: int
    max_speed: float
