"""Straight-line steady states on the torus.

A line through the origin closes on the periodic square only if it runs
along an integer direction (p, q) parallel to (cos theta, sin theta): (1, 0),
(0, 1) and (+-1, 1) for the principal angles, (+-1, n) where |tan theta| = n
and (+-n, 1) where |cot theta| = n.
Particle k of N sits at ``(k / N) * delta * (p, q)``, wrapped.
"""

from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from aniso_swarm.dynamics.models import wrap_positions
from aniso_swarm.errors import InadmissibleAngleError

ANGLE_TOL = 1e-9

PRINCIPAL_DIRECTIONS = {
    0.0: (1, 0),
    math.pi / 4: (1, 1),
    math.pi / 2: (0, 1),
    3 * math.pi / 4: (-1, 1),
}


def _near_integer(value: float) -> int | None:
    n = round(value)
    if n != 0 and abs(value - n) <= ANGLE_TOL * max(1, abs(n)):
        return int(n)
    return None


def integer_direction(theta: float) -> tuple[int, int]:
    """Integer direction (p, q) of the torus-closing line at angle ``theta``."""
    if not 0 <= theta < math.pi:
        raise InadmissibleAngleError(theta, "theta must lie in [0, pi)")
    for principal, direction in PRINCIPAL_DIRECTIONS.items():
        if abs(theta - principal) <= ANGLE_TOL:
            return direction

    if math.pi / 4 < theta < 3 * math.pi / 4:
        tangent = math.tan(theta)
        n = _near_integer(tangent)
        if n is None:
            raise InadmissibleAngleError(theta, f"tan(theta) = {tangent:.12g} is not an integer")
        return (1, n) if n > 0 else (-1, -n)

    cotangent = 1 / math.tan(theta)
    n = _near_integer(cotangent)
    if n is None:
        raise InadmissibleAngleError(theta, f"cot(theta) = {cotangent:.12g} is not an integer")
    return (n, 1)


class LineAnsatz(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = Field(ge=2)
    theta: float
    domain_size: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def check_admissible(self) -> LineAnsatz:
        integer_direction(self.theta)
        return self

    @property
    def direction(self) -> tuple[int, int]:
        return integer_direction(self.theta)

    @property
    def length_factor(self) -> float:
        p, q = self.direction
        return math.hypot(p, q)

    @property
    def winding(self) -> int:
        p, q = self.direction
        return max(abs(p), abs(q))


def line_positions(ansatz: LineAnsatz) -> np.ndarray:
    p, q = integer_direction(ansatz.theta)
    fractions = np.arange(1, ansatz.n + 1) / ansatz.n * ansatz.domain_size
    positions = np.column_stack([fractions * p, fractions * q])
    return wrap_positions(positions, ansatz.domain_size)


def admissible_angles(max_n: int) -> list[float]:
    """Principal angles plus the arctan/arccot branches for integers 2..max_n, sorted."""
    if max_n < 1:
        raise ValueError(f"max_n must be at least 1, got {max_n}")
    angles = list(PRINCIPAL_DIRECTIONS)
    for n in range(2, max_n + 1):
        steep = math.atan(n)
        shallow = math.atan(1 / n)
        angles.extend([shallow, steep, math.pi - steep, math.pi - shallow])
    unique: list[float] = []
    for angle in sorted(angles):
        if not unique or angle - unique[-1] > ANGLE_TOL:
            unique.append(angle)
    return unique
