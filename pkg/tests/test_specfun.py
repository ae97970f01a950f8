import numpy as np
import pytest
from scipy import integrate, special

from utils.errors import BranchCutError
from utils.specfun import (SWITCH_RADIUS, RECIPROCAL_RADIUS, chi_bracket, hyp2f1_chi, hyp2f1_interference,
                           hyp2f1_interference_split, upper_gamma_int)


class TestUpperGamma:
    def test_order_one_is_exponential(self):
        z = np.array([0.0, 0.5, 3.0, 40.0])
        np.testing.assert_allclose(upper_gamma_int(1, z), np.exp(-z), rtol=1e-14)

    def test_matches_regularised_gamma_for_real_arguments(self):
        z = np.array([0.1, 1.0, 2.0, 7.5])
        for n in (2, 3, 6):
            expected = special.gammaincc(n, z) * special.gamma(n)
            np.testing.assert_allclose(upper_gamma_int(n, z), expected, rtol=1e-12)

    def test_recurrence_for_complex_arguments(self):
        z = np.array([1.0 + 2.0j, 0.3 - 4.0j, 12.0 + 30.0j])
        for n in (1, 2, 5):
            lhs = upper_gamma_int(n + 1, z)
            rhs = n * upper_gamma_int(n, z) + z ** n * np.exp(-z)
            np.testing.assert_allclose(lhs, rhs, rtol=1e-12)

    def test_origin_gives_factorial(self):
        assert upper_gamma_int(4, 0.0) == pytest.approx(6.0)

    def test_rejects_bad_order(self):
        with pytest.raises(ValueError):
            upper_gamma_int(0, 1.0)
        with pytest.raises(ValueError):
            upper_gamma_int(1.5, 1.0)


class TestInterferenceHypergeometric:
    @pytest.mark.parametrize("v", [0.4, 0.8, 1.2])
    @pytest.mark.parametrize("z", [-0.5, -1.5, -5.0])
    def test_negative_real_axis_matches_scipy(self, v, z):
        expected = special.hyp2f1(1.0, -v, 1.0 - v, z)
        assert hyp2f1_interference(v, z) == pytest.approx(expected, rel=1e-6)

    def test_gauss_series_inside_unit_disk(self):
        v = 0.8
        z = 0.3 + 0.4j
        k = np.arange(200)
        expected = np.sum(v * z ** k / (v - k))
        assert hyp2f1_interference(v, z) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("radius", [SWITCH_RADIUS, RECIPROCAL_RADIUS])
    def test_continuous_across_switchovers(self, radius):
        angle = np.exp(1j * np.pi / 2)
        inside = hyp2f1_interference(1.6, radius * (1.0 - 1e-9) * angle)
        outside = hyp2f1_interference(1.6, radius * (1.0 + 1e-9) * angle)
        assert abs(inside - outside) <= 1e-7 * abs(inside)

    def test_schwarz_reflection(self):
        z = np.array([3.0 + 1.0j, 0.5 + 1.0j, -2.0 + 0.3j])
        np.testing.assert_allclose(hyp2f1_interference(0.8, np.conj(z)), np.conj(hyp2f1_interference(0.8, z)),
                                   rtol=1e-12)

    def test_split_recombines(self):
        v = np.array([0.8, 1.2, 2.4])
        z = 5.0j
        singular, regular = hyp2f1_interference_split(v, z)
        assert singular.all()
        growth = np.pi * v / np.sin(np.pi * v) * (-z) ** v
        np.testing.assert_allclose(regular + growth, hyp2f1_interference(v, z), rtol=1e-12)

    def test_branch_cut_is_rejected(self):
        with pytest.raises(BranchCutError):
            hyp2f1_interference(0.8, 2.0)

    def test_integer_order_is_rejected(self):
        with pytest.raises(ValueError):
            hyp2f1_interference(2.0, 0.5j)


class TestWallBracket:
    def test_chi_hypergeometric_endpoints(self):
        assert hyp2f1_chi(0) == pytest.approx(np.pi / (2.0 * np.sqrt(2.0)), rel=1e-13)
        values = hyp2f1_chi(np.arange(0, 60))
        assert np.all(np.diff(values) > 0)
        assert np.all(values < np.sqrt(2.0))

    def test_bracket_is_angular_moment(self):
        for eta in range(7):
            expected, _ = integrate.quad(lambda t: (np.cos(t) + np.sin(t)) ** eta, 0.0, np.pi / 2, epsabs=1e-13)
            assert chi_bracket(eta) == pytest.approx(expected, rel=1e-11)

    def test_closed_form_values(self):
        assert chi_bracket(0) == pytest.approx(np.pi / 2)
        assert chi_bracket(1) == pytest.approx(2.0)
        assert chi_bracket(2) == pytest.approx(np.pi / 2 + 1.0)
