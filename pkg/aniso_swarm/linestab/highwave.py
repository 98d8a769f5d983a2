"""High-wave-number limits of line spectra.

For m -> infinity the oscillatory factor averages out and only the plain
integrals A = int_0^R_c f ds and B = int_0^R_c s f'(s) ds survive. A line at
angle theta then has the limiting matrix with entries

    I11 = 2 A_l + 2 B_l cos^2 theta     I12 = 2 B_s sin theta cos theta
    I21 = 2 B_l sin theta cos theta     I22 = 2 A_s + 2 B_s sin^2 theta

(I_ij is component j of column I_i) for the canonical field, and a
necessary condition for stability is trace <= 0 and det >= 0.
"""

from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict

from aniso_swarm.coeffs.cutoff import eval_arrays, left_limit_at_cutoff
from aniso_swarm.coeffs.models import CoefficientSpec
from aniso_swarm.field import ForcePair
from aniso_swarm.linestab.ansatz import admissible_angles
from aniso_swarm.linestab.quadrature import QuadratureSpec, integrate_half_line

HIGHWAVE_TOL = 1e-12


class HighWaveReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    int_fl: float
    fs_at_rc: float
    passes: bool


class RotatedHighWave(BaseModel):
    model_config = ConfigDict(frozen=True)

    theta: float
    i11: float
    i12: float
    i21: float
    i22: float
    trace: float
    det: float
    stable_necessary: bool


def plain_integral(spec: CoefficientSpec, quadrature: QuadratureSpec | None = None) -> float:
    """int_0^R_c f(s) ds of the cut coefficient."""
    return integrate_half_line(lambda s: eval_arrays(spec, s)[0], spec.r_cutoff, spec.epsilon, quadrature)


def moment_integral(spec: CoefficientSpec, quadrature: QuadratureSpec | None = None) -> float:
    """int_0^R_c s f'(s) ds, including -R_c f(R_c^-) from a hard cutoff."""
    integral = integrate_half_line(lambda s: s * eval_arrays(spec, s)[1], spec.r_cutoff, spec.epsilon, quadrature)
    return integral - spec.r_cutoff * left_limit_at_cutoff(spec)


def highwave_check(pair: ForcePair, quadrature: QuadratureSpec | None = None) -> HighWaveReport:
    """High-wave condition of the vertical line: int f_l <= 0 and f_s(R_c^-) = 0."""
    int_fl = plain_integral(pair.f_l, quadrature)
    fs_at_rc = left_limit_at_cutoff(pair.f_s)
    return HighWaveReport(
        int_fl=int_fl, fs_at_rc=fs_at_rc, passes=int_fl <= 0 and abs(fs_at_rc) <= HIGHWAVE_TOL
    )


def rotated_line_highwave(
    theta: float, pair: ForcePair, quadrature: QuadratureSpec | None = None
) -> RotatedHighWave:
    if not 0 <= theta < math.pi:
        raise ValueError(f"theta must lie in [0, pi), got {theta}")
    a_s, a_l = plain_integral(pair.f_s, quadrature), plain_integral(pair.f_l, quadrature)
    b_s, b_l = moment_integral(pair.f_s, quadrature), moment_integral(pair.f_l, quadrature)
    cos, sin = math.cos(theta), math.sin(theta)

    i11 = 2 * a_l + 2 * b_l * cos * cos
    i12 = 2 * b_s * sin * cos
    i21 = 2 * b_l * sin * cos
    i22 = 2 * a_s + 2 * b_s * sin * sin
    trace = i11 + i22
    det = i11 * i22 - i12 * i21
    return RotatedHighWave(
        theta=theta,
        i11=i11,
        i12=i12,
        i21=i21,
        i22=i22,
        trace=trace,
        det=det,
        stable_necessary=trace <= HIGHWAVE_TOL and det >= -HIGHWAVE_TOL,
    )


def rotated_sweep(pair: ForcePair, max_n: int, quadrature: QuadratureSpec | None = None) -> list[RotatedHighWave]:
    """``rotated_line_highwave`` over every admissible angle up to winding ``max_n``."""
    return [rotated_line_highwave(theta, pair, quadrature) for theta in admissible_angles(max_n)]
