import numpy as np
import pytest
from scipy import stats

from utils.errors import InversionError, QuadratureError
from utils.quadrature import (FilonCdf, QuadControls, adaptive_gauss_legendre, composite_rule, gil_pelaez_cdf)

SHAPE = 4


def gamma_cf(omega):
    return (1.0 - 1j * np.asarray(omega)) ** (-SHAPE)


def gamma_log_cf(omega):
    return -SHAPE * np.log(1.0 - 1j * np.asarray(omega))


class TestGaussLegendre:
    def test_composite_rule_integrates_polynomials(self):
        nodes, weights = composite_rule([0.0, 0.5, 2.0], order=8)
        assert weights @ nodes ** 5 == pytest.approx(2.0 ** 6 / 6.0, rel=1e-13)

    def test_adaptive_smooth_integrand(self):
        value, residual, panels = adaptive_gauss_legendre(np.sin, [0.0, np.pi])
        assert value == pytest.approx(2.0, rel=1e-12)
        assert panels >= 1
        assert residual < 1e-8

    def test_adaptive_refines_a_kink(self):
        value, _, panels = adaptive_gauss_legendre(lambda x: np.abs(x - 1.0 / 3.0), [0.0, 1.0],
                                                   abs_tol=1e-10, rel_tol=1e-10)
        assert value == pytest.approx(5.0 / 18.0, abs=1e-9)
        assert panels > 1

    def test_empty_interval(self):
        assert adaptive_gauss_legendre(np.cos, [1.0, 1.0]) == (0.0, 0.0, 0)

    def test_panel_budget(self):
        with pytest.raises(QuadratureError) as info:
            adaptive_gauss_legendre(lambda x: np.abs(x - 1.0 / 3.0), [0.0, 1.0], order=4,
                                    abs_tol=1e-15, rel_tol=1e-15, max_panels=4, dimension="y")
        assert info.value.dimension == "y"


class TestGilPelaez:
    @pytest.mark.parametrize("z", [0.5, 2.0, 4.0, 8.0])
    def test_gamma_law(self, z):
        assert gil_pelaez_cdf(gamma_cf, z, scale=SHAPE) == pytest.approx(stats.gamma.cdf(z, SHAPE), abs=1e-6)

    def test_atom_at_zero(self):
        atom = 0.3

        def cf(omega):
            return atom + (1.0 - atom) * gamma_cf(omega)

        assert gil_pelaez_cdf(cf, 0.0, SHAPE, atom) == atom
        assert gil_pelaez_cdf(cf, -1.0, SHAPE, atom) == 0.0
        expected = atom + (1.0 - atom) * stats.gamma.cdf(3.0, SHAPE)
        assert gil_pelaez_cdf(cf, 3.0, SHAPE, atom) == pytest.approx(expected, abs=1e-6)

    def test_exponential_round_trip(self):
        z = np.linspace(0.1, 6.0, 12)
        recovered = [gil_pelaez_cdf(lambda omega: 1.0 / (1.0 - 1j * omega), point, 1.0) for point in z]
        assert np.max(np.abs(np.array(recovered) + np.expm1(-z))) < 1e-4

    def test_non_decaying_transform(self):
        with pytest.raises(InversionError):
            gil_pelaez_cdf(lambda omega: np.ones(np.shape(omega), dtype=complex), 1.0, 1.0,
                           controls=QuadControls(omega_max=1e3))


class TestFilonCdf:
    def test_gamma_law_on_a_grid(self):
        law = FilonCdf(gamma_log_cf, 0.0, 1.0)
        z = np.array([0.25, 1.0, 3.0, 6.0, 15.0])
        np.testing.assert_allclose(law(z), stats.gamma.cdf(z, SHAPE), atol=1e-5)
        assert law.pieces > 0
        assert law.omega_end > 1.0

    def test_scalar_and_edges(self):
        law = FilonCdf(gamma_log_cf, 0.0, 1.0)
        assert isinstance(law(2.0), float)
        assert law(0.0) == 0.0
        assert law(-3.0) == 0.0

    def test_agrees_with_marching_inversion(self):
        law = FilonCdf(gamma_log_cf, 0.0, 1.0)
        for z in (0.7, 5.0):
            assert law(z) == pytest.approx(gil_pelaez_cdf(gamma_cf, z, SHAPE), abs=1e-5)

    def test_rejects_bad_unit(self):
        with pytest.raises(ValueError):
            FilonCdf(gamma_log_cf, 0.0, 0.0)

    def test_reach_extends_the_frequency_budget(self):
        # half the mass at 0, the rest a narrow gamma law far below the declared unit
        scale = 1e-5

        def log_cf(omega):
            return np.log(0.5 + 0.5 * (1.0 - 1j * scale * np.asarray(omega)) ** (-SHAPE))

        with pytest.raises(InversionError):
            FilonCdf(log_cf, 0.5, 1.0)
        law = FilonCdf(log_cf, 0.5, 1.0, reach=1.0 / scale)
        z = scale * np.array([1.0, 4.0, 10.0])
        np.testing.assert_allclose(law(z), 0.5 + 0.5 * stats.gamma.cdf(z, SHAPE, scale=scale), atol=1e-4)

    def test_rejects_bad_reach(self):
        with pytest.raises(ValueError):
            FilonCdf(gamma_log_cf, 0.0, 1.0, reach=-1.0)
