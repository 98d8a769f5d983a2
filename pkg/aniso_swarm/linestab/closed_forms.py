"""Closed-form half-line integrals and threshold scans.

Every closed form here is a half-line integral over [0, R]; the
corresponding continuum eigenvalue is twice the value. All functions
accept a scalar mode or an integer array of modes.
"""

from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict

from aniso_swarm.log import logger


def _modes(m: int | np.ndarray) -> np.ndarray:
    return np.asarray(m, dtype=float)


def _unwrap(value: np.ndarray, m: int | np.ndarray) -> float | np.ndarray:
    return float(value) if np.ndim(m) == 0 else value


def closed_form_linear(m: int | np.ndarray, a: float, b: float, r: float) -> float | np.ndarray:
    """int_0^R (a s + b)(1 - cos(2 pi m s)) ds."""
    m = _modes(m)
    w = 2 * np.pi * m
    value = (w * (np.pi * m * r * (a * r + 2 * b) - (a * r + b) * np.sin(w * r)) + a - a * np.cos(w * r)) / w**2
    return _unwrap(value, m)


def closed_form_exponential(m: int | np.ndarray, c: float, e_s: float, r: float) -> float | np.ndarray:
    """int_0^R (f + s f')(1 - cos(2 pi m s)) ds for f(s) = c (exp(-e_s s) - exp(-e_s R)).

    This is the shifted exponential coefficient in the hard-cutoff limit.
    """
    m = _modes(m)
    pi = np.pi
    a = 2 * pi * m * (e_s**3 * r + 4 * pi**2 * m**2 * (e_s * r - 2))
    b = e_s**3 + 4 * pi**2 * e_s**2 * m**2 * r + 12 * pi**2 * e_s * m**2 + 16 * pi**4 * m**4 * r
    w = 2 * pi * m
    bracket = math.exp(-e_s * r) * (a * np.cos(w * r) - b * np.sin(w * r)) + 16 * pi**3 * m**3
    value = -(c * e_s) / (w * (e_s**2 + w**2) ** 2) * bracket
    return _unwrap(value, m)


def closed_form_exponential_unshifted(m: int | np.ndarray, c: float, e_s: float, r: float) -> float | np.ndarray:
    """Hard-cutoff limit of the half-line lambda_2 integral for f(s) = c exp(-e_s s).

    Includes the blend-layer limit -R f(R^-)(1 - cos(2 pi m R)), which turns
    the integral into -c w Im[(1 - exp(-z R)(1 + z R)) / z^2] with
    z = e_s - i w and w = 2 pi m.
    """
    m = _modes(m)
    w = 2 * np.pi * m
    z = e_s - 1j * w
    moment = (1 - np.exp(-z * r) * (1 + z * r)) / z**2
    return _unwrap(-c * w * np.imag(moment), m)


def kc_attraction_repulsion_integral(
    alpha: float, beta: float, gamma: float, e_r: float, e_a: float, r_cutoff: float
) -> float:
    """Exact int_0^R_c (f_A + f_R) ds for the Kuecken-Champod coefficients."""
    x_r, x_a = e_r * r_cutoff, e_a * r_cutoff
    repulsion = alpha * (2 - math.exp(-x_r) * (x_r * (x_r + 2) + 2)) / e_r**3 + beta * (1 - math.exp(-x_r)) / e_r
    attraction = gamma * (1 - math.exp(-x_a) * (x_a + 1)) / e_a**2
    return repulsion - attraction


class ThresholdScan(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    a0: float
    argmax_m: int
    modes: np.ndarray
    h_over_g: np.ndarray

    @property
    def curve(self) -> list[tuple[int, float]]:
        return [(int(m), float(v)) for m, v in zip(self.modes, self.h_over_g)]

    @property
    def max_ratio(self) -> float:
        return float(np.max(self.h_over_g))


def linear_threshold_a0(b: float, r_cutoff: float, epsilon: float = 0.0, m_max: int = 10_000) -> ThresholdScan:
    """Threshold a0 = -b max_m h(m)/g(m) for linear f_s(s) = a s + b.

    The vertical line is stable for a <= a0 and unstable otherwise. Modes
    with g(m) = 0 are skipped.
    """
    if b <= 0:
        raise ValueError(f"b must be positive, got {b}")
    if m_max < 1:
        raise ValueError(f"m_max must be at least 1, got {m_max}")
    length = r_cutoff - epsilon
    modes = np.arange(1, m_max + 1)
    x = 2 * np.pi * modes * length
    g = 2 * np.pi * modes * (np.pi * modes * length**2 - length * np.sin(x)) + 1 - np.cos(x)
    h = 2 * np.pi * modes * (2 * np.pi * modes * length - np.sin(x))

    valid = g > 0
    if not np.all(valid):
        logger.warning(f"Skipping modes {modes[~valid].tolist()} with g(m) = 0 at R_c={r_cutoff}")
    modes, ratio = modes[valid], h[valid] / g[valid]
    best = int(np.argmax(ratio))
    return ThresholdScan(a0=-b * float(ratio[best]), argmax_m=int(modes[best]), modes=modes, h_over_g=ratio)


def first_unstable_mode(c: float, e_s: float, r_cutoff: float, m_max: int = 100_000) -> int | None:
    """Smallest m <= m_max at which the shifted exponential closed form turns positive."""
    values = closed_form_exponential(np.arange(1, m_max + 1), c, e_s, r_cutoff)
    positive = np.flatnonzero(values > 0)
    if positive.size == 0:
        return None
    return int(positive[0]) + 1
