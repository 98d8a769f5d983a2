import math

import numpy as np
import pytest

from aniso_swarm.coeffs.models import CoefficientSpec, CutoffMode, ExpShifted, Linear
from aniso_swarm.field import ForcePair
from aniso_swarm.linestab import (
    closed_form_exponential,
    closed_form_exponential_unshifted,
    closed_form_linear,
    first_unstable_mode,
    kc_attraction_repulsion_integral,
    linear_threshold_a0,
    vertical_line_eigs_continuum,
)

MODES = [1, 7, 50, 333]


def _pair(f_s: CoefficientSpec, f_l: CoefficientSpec | None = None) -> ForcePair:
    f_l = f_l or CoefficientSpec(family=Linear(a=-3.0, b=0.1), r_cutoff=f_s.r_cutoff)
    return ForcePair(f_s=f_s, f_l=f_l)


class TestClosedFormLinear:
    def test_full_periods(self):
        """Test int_0^0.5 (1 - cos 4 pi s) ds = 0.5."""
        assert closed_form_linear(2, 0.0, 1.0, 0.5) == pytest.approx(0.5, rel=1e-14)

    def test_high_mode_limit(self):
        """Test the value tends to R (a R + 2 b) / 2."""
        assert closed_form_linear(10**6, -3.0, 0.1, 0.5) == pytest.approx(0.5 * (-1.5 + 0.2) / 2, rel=1e-5)

    def test_array_modes(self):
        """Test an array of modes gives the elementwise values."""
        values = closed_form_linear(np.array(MODES), -3.0, 0.1, 0.5)
        assert isinstance(values, np.ndarray)
        np.testing.assert_allclose(values, [closed_form_linear(m, -3.0, 0.1, 0.5) for m in MODES], rtol=1e-15)

    @pytest.mark.parametrize("m", MODES)
    @pytest.mark.parametrize("r_cutoff", [0.3, 0.5])
    def test_matches_quadrature(self, m, r_cutoff):
        """Test lambda_1 of a linear f_l is twice the half-line closed form."""
        f_l = CoefficientSpec(family=Linear(a=-3.0, b=0.1), r_cutoff=r_cutoff)
        pair = _pair(CoefficientSpec(family=ExpShifted(c=0.1, e_s=10.0), r_cutoff=r_cutoff), f_l)
        lambda1, _ = vertical_line_eigs_continuum(m, pair)
        assert lambda1.real == pytest.approx(2 * closed_form_linear(m, -3.0, 0.1, r_cutoff), rel=1e-8, abs=1e-14)


class TestClosedFormExponential:
    @pytest.mark.parametrize("m", MODES)
    @pytest.mark.parametrize(("e_s", "r_cutoff"), [(10.0, 0.3), (100.0, 0.5), (100.0, 0.1)])
    def test_shifted_matches_quadrature(self, m, e_s, r_cutoff):
        """Test lambda_2 of the shifted exponential is twice the closed form."""
        f_s = CoefficientSpec(
            family=ExpShifted(c=0.1, e_s=e_s), r_cutoff=r_cutoff, cutoff_mode=CutoffMode.SHIFT_THEN_BLEND
        )
        _, lambda2 = vertical_line_eigs_continuum(m, _pair(f_s))
        assert lambda2.real == pytest.approx(2 * closed_form_exponential(m, 0.1, e_s, r_cutoff), rel=1e-8, abs=1e-14)

    @pytest.mark.parametrize("m", MODES)
    @pytest.mark.parametrize(("e_s", "r_cutoff"), [(10.0, 0.3), (4.0, 0.5)])
    def test_unshifted_matches_quadrature(self, m, e_s, r_cutoff):
        """Test lambda_2 of the hard-truncated exponential, jump included, is twice the closed form."""
        f_s = CoefficientSpec(family=ExpShifted(c=0.1, e_s=e_s), r_cutoff=r_cutoff)
        _, lambda2 = vertical_line_eigs_continuum(m, _pair(f_s))
        expected = 2 * closed_form_exponential_unshifted(m, 0.1, e_s, r_cutoff)
        assert lambda2.real == pytest.approx(expected, rel=1e-8, abs=1e-14)

    def test_shift_difference(self):
        """Test shifted minus unshifted is the constant shift integrated against 1 - cos."""
        c, e_s, r = 0.1, 10.0, 0.3
        for m in MODES:
            shift = c * math.exp(-e_s * r)
            jump = r * shift * (1 - math.cos(2 * math.pi * m * r))
            difference = closed_form_exponential(m, c, e_s, r) - closed_form_exponential_unshifted(m, c, e_s, r)
            assert difference == pytest.approx(-closed_form_linear(m, 0.0, shift, r) + jump, rel=1e-9, abs=1e-15)

    def test_first_positive_mode(self):
        """Test c = 0.1, e_s = 100, R_c = 0.1 first turns positive at m = 73723."""
        assert first_unstable_mode(0.1, 100.0, 0.1) == 73723
        assert closed_form_exponential(73722, 0.1, 100.0, 0.1) <= 0

    def test_sign_change_value(self):
        """Test the half-line integral at the first positive mode is about 8.3225e-15."""
        assert closed_form_exponential(73723, 0.1, 100.0, 0.1) == pytest.approx(8.3225e-15, rel=1e-2)

    def test_smaller_decay(self):
        """Test e_s = 10 turns positive already at m = 12."""
        assert first_unstable_mode(0.1, 10.0, 0.1) == 12

    def test_gentle_decay_stays_negative(self):
        """Test e_s = 4 with R_c = 0.5 stays negative over 10^4 modes."""
        assert first_unstable_mode(0.1, 4.0, 0.5, m_max=10_000) is None
        assert np.all(closed_form_exponential(np.arange(1, 10_001), 0.1, 4.0, 0.5) < 0)


class TestKuckenChampodIntegral:
    def test_value(self):
        """Test 2 alpha / e_R^3 + beta / e_R - gamma / e_A^2 up to exponentially small terms."""
        value = kc_attraction_repulsion_integral(270.0, 0.1, 35.0, 100.0, 95.0, 0.5)
        assert value == pytest.approx(2 * 270 / 100**3 + 0.1 / 100 - 35 / 95**2, abs=1e-6)
        assert value == pytest.approx(-2.338e-3, rel=1e-3)


class TestLinearThreshold:
    def test_half_domain_cutoff(self):
        """Test R_c = 0.5 gives R_c max h/g = 2, so a0 = -2 b / R_c."""
        scan = linear_threshold_a0(0.1, 0.5)
        assert 0.5 * scan.max_ratio == pytest.approx(2.0, abs=1e-3)
        assert scan.a0 == pytest.approx(-0.4, abs=1e-3)
        assert scan.argmax_m % 2 == 0

    @pytest.mark.parametrize("r_cutoff", [0.1, 0.2, 0.3, 0.4])
    def test_smaller_cutoffs_exceed_two(self, r_cutoff):
        """Test R_c max h/g exceeds 2 below R_c = 0.5."""
        assert r_cutoff * linear_threshold_a0(0.1, r_cutoff).max_ratio > 2

    @pytest.mark.parametrize("r_cutoff", [0.1, 0.3, 0.5])
    def test_tail_limit(self, r_cutoff):
        """Test h/g approaches 2 / R_c at the last mode."""
        scan = linear_threshold_a0(0.1, r_cutoff)
        m, ratio = scan.curve[-1]
        assert m == 10_000
        assert ratio == pytest.approx(2 / r_cutoff, rel=1e-2)

    def test_blend_layer_shortens_interval(self):
        """Test epsilon enters through R_c - epsilon only."""
        with_layer = linear_threshold_a0(0.1, 0.5, epsilon=0.1, m_max=500)
        shorter = linear_threshold_a0(0.1, 0.4, m_max=500)
        assert with_layer.a0 == pytest.approx(shorter.a0, rel=1e-12)
        assert with_layer.argmax_m == shorter.argmax_m

    def test_invalid_arguments(self):
        """Test b and m_max are validated."""
        with pytest.raises(ValueError) as excinfo:
            linear_threshold_a0(0.0, 0.5)
        assert "b must be positive" in str(excinfo.value)
        with pytest.raises(ValueError) as excinfo:
            linear_threshold_a0(0.1, 0.5, m_max=0)
        assert "m_max must be at least 1" in str(excinfo.value)
