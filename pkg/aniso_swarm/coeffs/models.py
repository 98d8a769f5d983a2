from __future__ import annotations

from enum import Enum
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from aniso_swarm.coeffs import RadialFamily
from aniso_swarm.errors import DomainError


class CutoffMode(str, Enum):
    BLEND_TO_ZERO = "blend_to_zero"
    SHIFT_THEN_BLEND = "shift_then_blend"


class Role(str, Enum):
    ALONG_S = "along_s"
    ALONG_L = "along_l"


class _FamilyModel(BaseModel, RadialFamily):
    model_config = ConfigDict(extra="forbid", frozen=True)


class KuckenRepulsion(_FamilyModel):
    """(alpha r^2 + beta) exp(-e_r r)"""

    family: Literal["kucken_repulsion"] = "kucken_repulsion"
    alpha: float = Field(ge=0)
    beta: float = Field(ge=0)
    e_r: float = Field(ge=0)

    def value(self, r: np.ndarray) -> np.ndarray:
        return (self.alpha * r**2 + self.beta) * np.exp(-self.e_r * r)

    def derivative(self, r: np.ndarray) -> np.ndarray:
        return (2 * self.alpha * r - self.e_r * (self.alpha * r**2 + self.beta)) * np.exp(-self.e_r * r)


class KuckenAttraction(_FamilyModel):
    """-gamma r exp(-e_a r)"""

    family: Literal["kucken_attraction"] = "kucken_attraction"
    gamma: float = Field(ge=0)
    e_a: float = Field(ge=0)

    def value(self, r: np.ndarray) -> np.ndarray:
        return -self.gamma * r * np.exp(-self.e_a * r)

    def derivative(self, r: np.ndarray) -> np.ndarray:
        return -self.gamma * (1 - self.e_a * r) * np.exp(-self.e_a * r)


class Linear(_FamilyModel):
    family: Literal["linear"] = "linear"
    a: float
    b: float

    def value(self, r: np.ndarray) -> np.ndarray:
        return self.a * r + self.b

    def derivative(self, r: np.ndarray) -> np.ndarray:
        return np.full_like(r, self.a, dtype=float)


class Algebraic(_FamilyModel):
    """c / (1 + a r)^b"""

    family: Literal["algebraic"] = "algebraic"
    a: float
    b: float
    c: float

    def _base(self, r: np.ndarray) -> np.ndarray:
        base = 1 + self.a * r
        if np.any(base <= 0):
            raise DomainError(f"Algebraic coefficient undefined where 1 + a*r <= 0 (a={self.a})")
        return base

    def value(self, r: np.ndarray) -> np.ndarray:
        return self.c / self._base(r) ** self.b

    def derivative(self, r: np.ndarray) -> np.ndarray:
        return -self.c * self.a * self.b / self._base(r) ** (self.b + 1)


class ExpShifted(_FamilyModel):
    """c exp(-e_s r); the constant shift comes from the cutoff mode."""

    family: Literal["exp_shifted"] = "exp_shifted"
    c: float
    e_s: float

    def value(self, r: np.ndarray) -> np.ndarray:
        return self.c * np.exp(-self.e_s * r)

    def derivative(self, r: np.ndarray) -> np.ndarray:
        return -self.c * self.e_s * np.exp(-self.e_s * r)


class ExpSum(_FamilyModel):
    family: Literal["exp_sum"] = "exp_sum"
    c1: float
    c2: float
    e1: float
    e2: float

    def value(self, r: np.ndarray) -> np.ndarray:
        return self.c1 * np.exp(-self.e1 * r) + self.c2 * np.exp(-self.e2 * r)

    def derivative(self, r: np.ndarray) -> np.ndarray:
        return -self.c1 * self.e1 * np.exp(-self.e1 * r) - self.c2 * self.e2 * np.exp(-self.e2 * r)


class CompositeMember(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    weight: float
    family: Family


class Composite(_FamilyModel):
    """Weighted sum of raw families; the cutoff applies to the sum."""

    family: Literal["composite"] = "composite"
    members: tuple[CompositeMember, ...] = Field(min_length=1)

    @classmethod
    def kucken_champod(
        cls,
        chi: float,
        *,
        alpha: float = 270.0,
        beta: float = 0.1,
        gamma: float = 35.0,
        e_r: float = 100.0,
        e_a: float = 95.0,
    ) -> Composite:
        """chi * f_A + f_R; chi = 1 gives f_l, chi in [0, 1) gives f_s."""
        return cls(
            members=(
                CompositeMember(weight=chi, family=KuckenAttraction(gamma=gamma, e_a=e_a)),
                CompositeMember(weight=1.0, family=KuckenRepulsion(alpha=alpha, beta=beta, e_r=e_r)),
            )
        )

    def value(self, r: np.ndarray) -> np.ndarray:
        total = np.zeros_like(r, dtype=float)
        for member in self.members:
            total = total + member.weight * member.family.value(r)
        return total

    def derivative(self, r: np.ndarray) -> np.ndarray:
        total = np.zeros_like(r, dtype=float)
        for member in self.members:
            total = total + member.weight * member.family.derivative(r)
        return total


Family = Annotated[
    Union[KuckenRepulsion, KuckenAttraction, Linear, Algebraic, ExpShifted, ExpSum, Composite],
    Field(discriminator="family"),
]

CompositeMember.model_rebuild()
Composite.model_rebuild()


class CoefficientSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    family: Family
    r_cutoff: float = Field(gt=0)
    epsilon: float = Field(default=0.0, ge=0)
    cutoff_mode: CutoffMode = CutoffMode.BLEND_TO_ZERO

    @model_validator(mode="after")
    def check_epsilon_below_cutoff(self) -> CoefficientSpec:
        if self.epsilon >= self.r_cutoff:
            raise ValueError(f"epsilon {self.epsilon} must be smaller than r_cutoff {self.r_cutoff}")
        return self

    @property
    def joint(self) -> float:
        """Start of the blend layer, R_c - epsilon."""
        return self.r_cutoff - self.epsilon
