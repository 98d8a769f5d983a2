"""Anisotropic pair force and its Jacobian on the periodic square [0, delta)^2.

For a homogeneous tensor field with orthonormal directions ``s`` and ``l``
the force exerted on particle j by particle k is

    F(d) = f_s(|d|) (s.d) s + f_l(|d|) (l.d) l,    d = wrap(x_j - x_k).

The anisotropy parameter chi enters through the coefficient along ``s``
(``f_s = chi f_A + f_R`` for the Kuecken-Champod pair).
"""

from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from aniso_swarm.coeffs.cutoff import eval_arrays
from aniso_swarm.coeffs.models import CoefficientSpec, Composite, CutoffMode
from aniso_swarm.errors import DomainError

ORTHONORMAL_TOL = 1e-12


class TensorField(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    s: tuple[float, float] = (0.0, 1.0)
    l: tuple[float, float] = (1.0, 0.0)  # noqa: E741
    chi: float = Field(default=1.0, ge=0, le=1)

    @model_validator(mode="after")
    def check_orthonormal(self) -> TensorField:
        s, l = np.array(self.s), np.array(self.l)  # noqa: E741
        if abs(s @ s - 1) > ORTHONORMAL_TOL or abs(l @ l - 1) > ORTHONORMAL_TOL:
            raise ValueError(f"Directions must be unit vectors, got s={self.s}, l={self.l}")
        if abs(s @ l) > ORTHONORMAL_TOL:
            raise ValueError(f"Directions must be orthogonal, got s.l={s @ l:.3e}")
        return self

    @classmethod
    def canonical(cls, chi: float = 1.0) -> TensorField:
        return cls(s=(0.0, 1.0), l=(1.0, 0.0), chi=chi)

    @classmethod
    def from_angle(cls, phi: float, chi: float = 1.0) -> TensorField:
        """Canonical field rotated counter-clockwise by ``phi``."""
        return cls.canonical(chi).rotated(phi)

    def rotated(self, phi: float) -> TensorField:
        rotation = rotation_matrix(phi)
        s = rotation @ np.array(self.s)
        l = rotation @ np.array(self.l)  # noqa: E741
        return TensorField(s=(float(s[0]), float(s[1])), l=(float(l[0]), float(l[1])), chi=self.chi)

    @property
    def s_vector(self) -> np.ndarray:
        return np.array(self.s)

    @property
    def l_vector(self) -> np.ndarray:
        return np.array(self.l)


class ForcePair(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    f_s: CoefficientSpec
    f_l: CoefficientSpec
    domain_size: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def check_cutoffs(self) -> ForcePair:
        if self.f_s.r_cutoff != self.f_l.r_cutoff:
            raise ValueError(f"Cutoff radii differ: f_s has {self.f_s.r_cutoff}, f_l has {self.f_l.r_cutoff}")
        if self.f_s.epsilon != self.f_l.epsilon:
            raise ValueError(f"Blend widths differ: f_s has {self.f_s.epsilon}, f_l has {self.f_l.epsilon}")
        if self.f_s.r_cutoff > self.domain_size / 2:
            raise ValueError(f"Cutoff radius {self.f_s.r_cutoff} exceeds half the domain size {self.domain_size}")
        return self

    @classmethod
    def kucken_champod(
        cls,
        chi: float,
        r_cutoff: float = 0.5,
        epsilon: float = 0.0,
        cutoff_mode: CutoffMode = CutoffMode.SHIFT_THEN_BLEND,
        domain_size: float = 1.0,
    ) -> ForcePair:
        """f_s = chi f_A + f_R and f_l = f_A + f_R with the default parameter set."""
        return cls(
            f_s=CoefficientSpec(
                family=Composite.kucken_champod(chi), r_cutoff=r_cutoff, epsilon=epsilon, cutoff_mode=cutoff_mode
            ),
            f_l=CoefficientSpec(
                family=Composite.kucken_champod(1.0), r_cutoff=r_cutoff, epsilon=epsilon, cutoff_mode=cutoff_mode
            ),
            domain_size=domain_size,
        )

    @property
    def r_cutoff(self) -> float:
        return self.f_s.r_cutoff


def rotation_matrix(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


def wrap_displacement(d: np.ndarray, domain_size: float) -> np.ndarray:
    """Minimal image of ``d`` with every component in [-delta/2, delta/2)."""
    d = np.asarray(d, dtype=float)
    half = domain_size / 2
    wrapped = d - domain_size * np.floor(d / domain_size + 0.5)
    wrapped = np.where(wrapped >= half, wrapped - domain_size, wrapped)
    return np.where(wrapped < -half, wrapped + domain_size, wrapped)


def _distances(d: np.ndarray) -> np.ndarray:
    return np.sqrt(d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1])


def pair_forces(d: np.ndarray, field: TensorField, pair: ForcePair) -> np.ndarray:
    """Forces for a (P, 2) array of wrapped, nonzero displacements."""
    r = _distances(d)
    fs, _ = eval_arrays(pair.f_s, r)
    fl, _ = eval_arrays(pair.f_l, r)
    s, l = field.s_vector, field.l_vector  # noqa: E741
    along_s = fs * (d[:, 0] * s[0] + d[:, 1] * s[1])
    along_l = fl * (d[:, 0] * l[0] + d[:, 1] * l[1])
    return np.stack([along_s * s[0] + along_l * l[0], along_s * s[1] + along_l * l[1]], axis=1)


def pair_jacobians(d: np.ndarray, field: TensorField, pair: ForcePair) -> np.ndarray:
    """(P, 2, 2) Jacobians dF/dd; entry [p, i, k] is dF_i/dd_k."""
    r = _distances(d)
    if np.any(r == 0):
        raise DomainError("Force Jacobian is undefined at d = 0")
    fs, dfs = eval_arrays(pair.f_s, r)
    fl, dfl = eval_arrays(pair.f_l, r)
    s, l = field.s_vector, field.l_vector  # noqa: E741
    s_outer = np.outer(s, s)
    l_outer = np.outer(l, l)
    s_slope = dfs * (d @ s) / r
    l_slope = dfl * (d @ l) / r
    return (
        fs[:, None, None] * s_outer
        + fl[:, None, None] * l_outer
        + s_slope[:, None, None] * s[None, :, None] * d[:, None, :]
        + l_slope[:, None, None] * l[None, :, None] * d[:, None, :]
    )


def _single(d: np.ndarray) -> np.ndarray:
    d = np.asarray(d, dtype=float).reshape(1, 2)
    if d[0, 0] == 0 and d[0, 1] == 0:
        raise DomainError("Self-interaction: displacement d = 0 has no force")
    return d


def total_force(d: np.ndarray, field: TensorField, pair: ForcePair) -> np.ndarray:
    return pair_forces(_single(d), field, pair)[0]


def force_jacobian(d: np.ndarray, field: TensorField, pair: ForcePair) -> np.ndarray:
    """2x2 matrix whose columns are dF/dd_1 and dF/dd_2."""
    return pair_jacobians(_single(d), field, pair)[0]
