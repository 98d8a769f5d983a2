"""Stability spectra of straight-line steady states.

Perturbing particle k of a line steady state by a Fourier mode
``exp(2 pi i m k / N)`` decouples the linearised system into 2x2 blocks,
one per mode. For the vertical line the blocks are diagonal and their
entries are

    lambda_1,N(m) = (1/N) sum_k f_l(|d_k|) (1 - exp(2 pi i m k / N))
    lambda_2,N(m) = (1/N) sum_k (f_s + f_s' r)(|d_k|) (1 - exp(2 pi i m k / N))

which become integrals over [-R_c, R_c] in the continuum limit. The line
is asymptotically stable when every real part is negative.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from aniso_swarm.coeffs.cutoff import eval_arrays, left_limit_at_cutoff
from aniso_swarm.coeffs.models import CoefficientSpec, CutoffMode, ExpShifted
from aniso_swarm.dynamics.integrate import COINCIDENCE_DISTANCE, velocities
from aniso_swarm.dynamics.models import NeighborMethod
from aniso_swarm.errors import CoincidentParticlesError
from aniso_swarm.field import ForcePair, TensorField, pair_forces, pair_jacobians, wrap_displacement
from aniso_swarm.linestab.closed_forms import closed_form_exponential, first_unstable_mode
from aniso_swarm.linestab.highwave import highwave_check
from aniso_swarm.linestab.quadrature import QuadratureSpec, half_line_rule
from aniso_swarm.log import logger

VERDICT_TOL = 1e-12
CHUNK_ELEMENTS = 2_000_000


class Verdict(str, Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    INCONCLUSIVE = "inconclusive"


class SpectrumSource(str, Enum):
    DISCRETE = "discrete"
    CONTINUUM = "continuum"


class StabilitySpectrum(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    modes: np.ndarray
    lambda1: np.ndarray
    lambda2: np.ndarray
    source: SpectrumSource
    n: int | None = None
    verdict: Verdict

    @field_validator("modes", "lambda1", "lambda2", mode="before")
    @classmethod
    def as_array(cls, value: object) -> np.ndarray:
        return np.atleast_1d(np.asarray(value))

    def rows(self) -> list[tuple[int, complex, complex]]:
        return [(int(m), complex(l1), complex(l2)) for m, l1, l2 in zip(self.modes, self.lambda1, self.lambda2)]


def verdict_of(lambda1: np.ndarray, lambda2: np.ndarray) -> Verdict:
    """Stable if every real part is below -tol, unstable if any exceeds tol.

    The tolerance is 1e-12 relative to the size of the first mode's
    eigenvalues (at least 1e-12 absolute); anything else is inconclusive.
    """
    re = np.concatenate([np.real(lambda1), np.real(lambda2)])
    if re.size == 0:
        return Verdict.INCONCLUSIVE
    scale = max(1.0, abs(complex(lambda1[0])), abs(complex(lambda2[0])))
    tol = VERDICT_TOL * scale
    if np.any(re > tol):
        return Verdict.UNSTABLE
    if np.all(re < -tol):
        return Verdict.STABLE
    return Verdict.INCONCLUSIVE


def steady_residual(positions: np.ndarray, field: TensorField, pair: ForcePair) -> float:
    """Largest particle speed, zero for an exact steady state."""
    v = velocities(np.asarray(positions, dtype=float), field, pair, NeighborMethod.BRUTE_FORCE)
    return float(np.max(np.hypot(v[:, 0], v[:, 1])))


def _symmetric_nodes(
    r_cutoff: float, epsilon: float, mode: int, quadrature: QuadratureSpec | None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Half-line rule mirrored onto [-R_c, R_c]: signed nodes, |nodes| and weights."""
    nodes, weights = half_line_rule(r_cutoff, epsilon, mode, quadrature)
    signed = np.concatenate([-nodes, nodes])
    return signed, np.concatenate([nodes, nodes]), np.concatenate([weights, weights])


def steady_residual_continuum(
    field: TensorField, pair: ForcePair, quadrature: QuadratureSpec | None = None
) -> float:
    """Euclidean norm of the integral of F((0, s)) over [-R_c, R_c], zero by oddness."""
    signed, _, weights = _symmetric_nodes(pair.r_cutoff, pair.f_s.epsilon, 0, quadrature)
    d = np.column_stack([np.zeros_like(signed), signed])
    integral = weights @ pair_forces(d, field, pair)
    return float(np.hypot(integral[0], integral[1]))


def _phases(residues: np.ndarray, n: int) -> np.ndarray:
    """1 - exp(2 pi i r / N) for integer residues r in [0, N)."""
    return 1 - np.exp(2j * np.pi * residues / n)


def stability_matrix(positions: np.ndarray, field: TensorField, pair: ForcePair, j: int, m: int) -> np.ndarray:
    """Complex 2x2 matrix (I_1 I_2) of mode ``m`` seen from particle ``j``.

    Column i is (1/N) sum_{k != j} (1 - exp(2 pi i m (k - j) / N)) dF/dd_i(x_j - x_k).
    """
    positions = np.asarray(positions, dtype=float)
    n_particles = positions.shape[0]
    if not 1 <= m <= n_particles:
        raise ValueError(f"Mode must lie in 1..{n_particles}, got {m}")
    k = np.delete(np.arange(n_particles), j)
    d = wrap_displacement(positions[j] - positions[k], pair.domain_size)
    r = np.sqrt(d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1])
    coincident = np.flatnonzero(r < COINCIDENCE_DISTANCE)
    if coincident.size:
        raise CoincidentParticlesError(j, int(k[coincident[0]]), float(r[coincident[0]]))

    close = r < pair.r_cutoff
    k, d = k[close], d[close]
    weights = _phases((m * (k - j)) % n_particles, n_particles)
    jacobians = pair_jacobians(d, field, pair)
    return np.einsum("p,pik->ik", weights, jacobians) / n_particles


def _vertical_offsets(n: int, domain_size: float) -> tuple[np.ndarray, np.ndarray]:
    """Indices k in ceil(N/2)..N-1+ceil(N/2) without k = N, and distances |(N - k) / N| delta."""
    start = math.ceil(n / 2)
    k = np.arange(start, n + start)
    k = k[k != n]
    return k, np.abs((n - k) / n) * domain_size


def vertical_line_eigs_discrete_array(
    n: int, modes: np.ndarray, pair: ForcePair
) -> tuple[np.ndarray, np.ndarray]:
    """``vertical_line_eigs_discrete`` for an array of modes."""
    modes = np.atleast_1d(np.asarray(modes, dtype=np.int64))
    if np.any(modes < 1) or np.any(modes > n):
        raise ValueError(f"Modes must lie in 1..{n}")
    k, r = _vertical_offsets(n, pair.domain_size)
    close = r < pair.r_cutoff
    k, r = k[close], r[close]
    fl, _ = eval_arrays(pair.f_l, r)
    fs, dfs = eval_arrays(pair.f_s, r)
    gs = fs + dfs * r

    lambda1 = np.empty(modes.shape, dtype=complex)
    lambda2 = np.empty(modes.shape, dtype=complex)
    chunk = max(1, CHUNK_ELEMENTS // max(1, k.size))
    for start in range(0, modes.size, chunk):
        block = modes[start : start + chunk]
        phases = _phases((block[:, None] * k[None, :]) % n, n)
        lambda1[start : start + chunk] = phases @ fl / n
        lambda2[start : start + chunk] = phases @ gs / n
    return lambda1, lambda2


def vertical_line_eigs_discrete(n: int, m: int, pair: ForcePair) -> tuple[complex, complex]:
    """Eigenvalues of mode ``m`` for the vertical line of ``n`` particles.

    The term with wrapped distance 0 (k = N) carries the factor
    1 - exp(2 pi i m) = 0 and is skipped without evaluating coefficients.
    """
    lambda1, lambda2 = vertical_line_eigs_discrete_array(n, np.array([m]), pair)
    return complex(lambda1[0]), complex(lambda2[0])


def _cutoff_jump(spec: CoefficientSpec, r_cutoff: float, modes: np.ndarray) -> np.ndarray:
    """Limit of the blend layer in integrals of s f'(s) (1 - exp(-2 pi i m s)) over [-R_c, R_c]."""
    level = left_limit_at_cutoff(spec)
    if level == 0:
        return np.zeros(modes.shape)
    return -2 * r_cutoff * level * (1 - np.cos(2 * np.pi * modes * r_cutoff))


def _continuum_integrals(
    modes: np.ndarray,
    spec_plain: CoefficientSpec,
    spec_weighted: CoefficientSpec,
    r_cutoff: float,
    quadrature: QuadratureSpec | None,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrals over [-R_c, R_c] of f(|s|) and (f + f'|s|)(|s|) against 1 - exp(-2 pi i m s)."""
    modes = np.atleast_1d(np.asarray(modes, dtype=np.int64))
    if np.any(modes < 1):
        raise ValueError("Modes must be at least 1")
    epsilon = spec_plain.epsilon
    plain = np.empty(modes.shape, dtype=complex)
    weighted = np.empty(modes.shape, dtype=complex)

    order = np.argsort(modes)
    position = 0
    while position < modes.size:
        stop = modes.size
        while True:
            signed, radii, weights = _symmetric_nodes(r_cutoff, epsilon, int(modes[order[stop - 1]]), quadrature)
            if stop - position == 1 or signed.size * (stop - position) <= CHUNK_ELEMENTS:
                break
            stop = position + max(1, (stop - position) // 2)
        block = order[position:stop]
        f, _ = eval_arrays(spec_plain, radii)
        g, dg = eval_arrays(spec_weighted, radii)
        g = g + dg * radii
        phases = 1 - np.exp(-2j * np.pi * modes[block][:, None] * signed[None, :])
        plain[block] = phases @ (weights * f)
        weighted[block] = phases @ (weights * g)
        position += block.size
    weighted = weighted + _cutoff_jump(spec_weighted, r_cutoff, modes)
    return plain, weighted


def vertical_line_eigs_continuum_array(
    modes: np.ndarray, pair: ForcePair, quadrature: QuadratureSpec | None = None
) -> tuple[np.ndarray, np.ndarray]:
    return _continuum_integrals(modes, pair.f_l, pair.f_s, pair.r_cutoff, quadrature)


def vertical_line_eigs_continuum(
    m: int, pair: ForcePair, quadrature: QuadratureSpec | None = None
) -> tuple[complex, complex]:
    """Continuum-limit eigenvalues of mode ``m`` for the vertical line.

    lambda_1(m) integrates f_l(|s|) and lambda_2(m) integrates
    f_s(|s|) + f_s'(|s|) |s|, both against 1 - exp(-2 pi i m s) over
    [-R_c, R_c]. For hard truncation without shift the ``s f_s'`` term
    includes the limit of the blend layer, -R_c f_s(R_c^-) per side.
    """
    lambda1, lambda2 = vertical_line_eigs_continuum_array(np.array([m]), pair, quadrature)
    return complex(lambda1[0]), complex(lambda2[0])


def horizontal_line_eigs_array(
    modes: np.ndarray, pair: ForcePair, quadrature: QuadratureSpec | None = None
) -> tuple[np.ndarray, np.ndarray]:
    plain_s, weighted_l = _continuum_integrals(modes, pair.f_s, pair.f_l, pair.r_cutoff, quadrature)
    return weighted_l, plain_s


def horizontal_line_eigs(
    m: int, pair: ForcePair, quadrature: QuadratureSpec | None = None
) -> tuple[complex, complex]:
    """Continuum eigenvalues for the horizontal line: roles of f_s and f_l swap."""
    lambda1, lambda2 = horizontal_line_eigs_array(np.array([m]), pair, quadrature)
    return complex(lambda1[0]), complex(lambda2[0])


def default_modes(pair: ForcePair, n: int | None) -> np.ndarray:
    if n is not None:
        return np.arange(1, n)
    return np.arange(1, max(500, math.ceil(4 / pair.r_cutoff)) + 1)


def large_mode_limits(pair: ForcePair, quadrature: QuadratureSpec | None = None) -> tuple[float, float]:
    """Limit of Re lambda_1 and lim sup of Re lambda_2 of the vertical line as m -> infinity.

    Re lambda_1 tends to 2 int f_l. Re lambda_2 tends to 2 R_c f_s(R_c^-) cos(2 pi m R_c),
    so its lim sup is 2 R_c |f_s(R_c^-)|, which vanishes for any continuous cutoff.
    """
    report = highwave_check(pair, quadrature)
    return 2 * report.int_fl, 2 * pair.r_cutoff * abs(report.fs_at_rc)


def exponential_crossing(pair: ForcePair, m_max: int = 100_000) -> int | None:
    """First unstable mode of a shifted exponential f_s under hard cutoff, from its closed form.

    ``None`` when f_s is any other coefficient or no mode up to ``m_max`` turns positive.
    """
    spec = pair.f_s
    family = spec.family
    if not isinstance(family, ExpShifted) or spec.epsilon > 0 or spec.cutoff_mode is not CutoffMode.SHIFT_THEN_BLEND:
        return None
    return first_unstable_mode(family.c, family.e_s, spec.r_cutoff, m_max)


def fold_large_modes(
    pair: ForcePair,
    modes: np.ndarray,
    lambda1: np.ndarray,
    lambda2: np.ndarray,
    quadrature: QuadratureSpec | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, Verdict]:
    """Verdict of a default continuum range extended by the modes no quadrature range reaches.

    A closed-form crossing beyond the range is appended as a row whose
    lambda_2 comes from the closed form. The m -> infinity limits only
    enter the verdict: a zero limit leaves an otherwise stable spectrum
    inconclusive.
    """
    crossing = exponential_crossing(pair)
    if crossing is not None and crossing > modes.max():
        family = pair.f_s.family
        extra1, _ = vertical_line_eigs_continuum_array(np.array([crossing]), pair, quadrature)
        extra2 = 2 * closed_form_exponential(crossing, family.c, family.e_s, pair.r_cutoff)
        modes = np.append(modes, crossing)
        lambda1 = np.append(lambda1, extra1)
        lambda2 = np.append(lambda2, complex(extra2))

    limit1, limit2 = large_mode_limits(pair, quadrature)
    logger.debug(f"Large-mode limits: Re lambda_1 -> {limit1:.6g}, lim sup Re lambda_2 = {limit2:.6g}")
    verdict = verdict_of(np.append(lambda1, limit1), np.append(lambda2, limit2))
    if crossing is not None:
        logger.info(f"Closed form turns positive at m = {crossing}")
        verdict = Verdict.UNSTABLE
    return modes, lambda1, lambda2, verdict


def classify_vertical_line(
    pair: ForcePair,
    n: int | None = None,
    modes: np.ndarray | None = None,
    quadrature: QuadratureSpec | None = None,
) -> StabilitySpectrum:
    """Spectrum and verdict of the vertical line, discrete for an integer ``n`` or continuum for ``None``.

    Without explicit ``modes`` the continuum verdict also covers m -> infinity
    (see ``fold_large_modes``); an explicit range is judged on its own.
    """
    defaulted = modes is None
    modes = default_modes(pair, n) if defaulted else np.atleast_1d(np.asarray(modes, dtype=np.int64))
    if n is None:
        source = SpectrumSource.CONTINUUM
        lambda1, lambda2 = vertical_line_eigs_continuum_array(modes, pair, quadrature)
        if defaulted:
            modes, lambda1, lambda2, verdict = fold_large_modes(pair, modes, lambda1, lambda2, quadrature)
        else:
            verdict = verdict_of(lambda1, lambda2)
    else:
        source = SpectrumSource.DISCRETE
        if np.any(modes >= n):
            raise ValueError(f"Discrete modes must lie in 1..{n - 1}")
        lambda1, lambda2 = vertical_line_eigs_discrete_array(n, modes, pair)
        verdict = verdict_of(lambda1, lambda2)
    logger.info(f"Vertical line ({source.value}, modes {modes.min()}..{modes.max()}): {verdict.value}")
    return StabilitySpectrum(modes=modes, lambda1=lambda1, lambda2=lambda2, source=source, n=n, verdict=verdict)
