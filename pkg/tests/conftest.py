from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pytest

os.environ["ANISO_SWARM_LOG_LEVEL"] = "DEBUG"

from aniso_swarm.coeffs.models import (  # noqa: E402
    CoefficientSpec,
    CutoffMode,
    ExpShifted,
    ExpSum,
    Linear,
)
from aniso_swarm.dynamics.models import ParticleState  # noqa: E402
from aniso_swarm.field import ForcePair, TensorField  # noqa: E402

_HERE = Path(__file__).resolve().parent


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch: pytest.MonkeyPatch):
    """Keep environment overrides of the run configuration out of every test."""
    for name in list(os.environ):
        if name.startswith("ANISO_SWARM_") and name != "ANISO_SWARM_LOG_LEVEL":
            monkeypatch.delenv(name)
    yield


@pytest.fixture
def canonical_field():
    """Fixture for the canonical field s = (0, 1), l = (1, 0)."""
    return TensorField.canonical()


@pytest.fixture
def kc_pair():
    """Fixture for the Kuecken-Champod pair with chi = 0.2, R_c = 0.5, shifted hard cutoff."""
    return ForcePair.kucken_champod(0.2)


@pytest.fixture
def exp_pair():
    """Fixture for shifted exponential f_s and shifted exponential-sum f_l, R_c = 0.5."""
    return ForcePair(
        f_s=CoefficientSpec(
            family=ExpShifted(c=0.1, e_s=100.0), r_cutoff=0.5, cutoff_mode=CutoffMode.SHIFT_THEN_BLEND
        ),
        f_l=CoefficientSpec(
            family=ExpSum(c1=0.13, c2=-0.03, e1=100.0, e2=10.0),
            r_cutoff=0.5,
            cutoff_mode=CutoffMode.SHIFT_THEN_BLEND,
        ),
    )


@pytest.fixture
def exp_linear_pair():
    """Fixture for shifted exponential f_s with linear f_l = 0.1 - 3 r, R_c = 0.5."""
    return ForcePair(
        f_s=CoefficientSpec(
            family=ExpShifted(c=0.1, e_s=100.0), r_cutoff=0.5, cutoff_mode=CutoffMode.SHIFT_THEN_BLEND
        ),
        f_l=CoefficientSpec(family=Linear(a=-3.0, b=0.1), r_cutoff=0.5),
    )


@pytest.fixture
def linear_pair():
    """Fixture for linear f_s = 0.1 - 0.2 r and f_l = 0.1 - 3 r with R_c = 0.3."""
    return ForcePair(
        f_s=CoefficientSpec(family=Linear(a=-0.2, b=0.1), r_cutoff=0.3),
        f_l=CoefficientSpec(family=Linear(a=-3.0, b=0.1), r_cutoff=0.3),
    )


@pytest.fixture
def smooth_linear_pair():
    """Fixture for the linear pair with a C^1 blend, R_c = 0.3 and epsilon = 0.05."""
    return ForcePair(
        f_s=CoefficientSpec(family=Linear(a=-0.2, b=0.1), r_cutoff=0.3, epsilon=0.05),
        f_l=CoefficientSpec(family=Linear(a=-3.0, b=0.1), r_cutoff=0.3, epsilon=0.05),
    )


@pytest.fixture
def two_particles():
    """Fixture for two particles on a vertical line, 0.4 apart."""
    return ParticleState(positions=np.array([[0.5, 0.3], [0.5, 0.7]]))


@pytest.fixture
def random_states():
    """Fixture for a reproducible factory of random states with N particles on the unit square."""

    def make(n: int, seed: int) -> ParticleState:
        rng = np.random.default_rng(seed)
        return ParticleState(positions=rng.uniform(0.0, 1.0, size=(n, 2)))

    return make


@pytest.fixture
def experiments_dir():
    """Fixture for the shipped experiment configs."""
    return _HERE.parent / "experiments"
