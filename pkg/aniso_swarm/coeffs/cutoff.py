"""Cutoff constructions applied on top of the raw coefficient families.

Both constructions are C^1 for epsilon > 0 and vanish identically from the
cutoff radius on. ``BLEND_TO_ZERO`` keeps the raw coefficient up to
``R_c - epsilon`` and joins value and slope to zero with a cubic;
``SHIFT_THEN_BLEND`` first subtracts the level at ``R_c - epsilon`` so only
the slope needs blending. ``epsilon == 0`` is the hard-truncation limit.
"""

from __future__ import annotations

import numpy as np

from aniso_swarm.coeffs.models import CoefficientSpec, CutoffMode
from aniso_swarm.errors import DomainError


def _as_radii(r: float | np.ndarray) -> np.ndarray:
    radii = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(radii < 0) or np.any(np.isnan(radii)):
        raise DomainError("Coefficient radii must be nonnegative")
    return radii


def _unwrap(result: np.ndarray, r: float | np.ndarray) -> float | np.ndarray:
    if np.ndim(r) == 0:
        return float(result[0])
    return result.reshape(np.shape(r))


def eval_raw(spec: CoefficientSpec, r: float | np.ndarray) -> float | np.ndarray:
    """Un-cut family value, ignoring cutoff and shift."""
    return _unwrap(spec.family.value(_as_radii(r)), r)


def eval_raw_deriv(spec: CoefficientSpec, r: float | np.ndarray) -> float | np.ndarray:
    return _unwrap(spec.family.derivative(_as_radii(r)), r)


def shift_constant(spec: CoefficientSpec) -> float:
    """Raw value at the blend joint, the level removed by ``SHIFT_THEN_BLEND``."""
    return float(spec.family.value(np.array([spec.joint]))[0])


def left_limit_at_cutoff(spec: CoefficientSpec) -> float:
    """f(R_c^-) of the cut coefficient; nonzero only for hard truncation without shift."""
    if spec.epsilon > 0 or spec.cutoff_mode is CutoffMode.SHIFT_THEN_BLEND:
        return 0.0
    return float(spec.family.value(np.array([spec.r_cutoff]))[0])


def eval_arrays(spec: CoefficientSpec, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``eval`` on a 1-d array of radii."""
    radii = _as_radii(r)
    value = np.zeros_like(radii)
    deriv = np.zeros_like(radii)
    shifted = spec.cutoff_mode is CutoffMode.SHIFT_THEN_BLEND
    eps = spec.epsilon
    joint = spec.joint

    inner = radii <= joint if eps > 0 else radii < spec.r_cutoff
    if np.any(inner):
        level = shift_constant(spec) if shifted else 0.0
        value[inner] = spec.family.value(radii[inner]) - level
        deriv[inner] = spec.family.derivative(radii[inner])

    if eps > 0:
        layer = (radii > joint) & (radii < spec.r_cutoff)
        if np.any(layer):
            at_joint = np.array([joint])
            f0 = float(spec.family.value(at_joint)[0])
            f1 = float(spec.family.derivative(at_joint)[0])
            t = radii[layer] - spec.r_cutoff
            value[layer] = f1 * (t**3 / eps**2 + t**2 / eps)
            deriv[layer] = f1 * (3 * t**2 / eps**2 + 2 * t / eps)
            if not shifted:
                value[layer] += f0 * (2 * t**3 / eps**3 + 3 * t**2 / eps**2)
                deriv[layer] += f0 * (6 * t**2 / eps**3 + 6 * t / eps**2)
    return value, deriv


def eval(  # noqa: A001
    spec: CoefficientSpec, r: float | np.ndarray
) -> tuple[float | np.ndarray, float | np.ndarray]:
    """Cut coefficient value and derivative at ``r`` (scalar or array)."""
    value, deriv = eval_arrays(spec, r)
    return _unwrap(value, r), _unwrap(deriv, r)
