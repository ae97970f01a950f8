import numpy as np
import pytest
from scipy import integrate, stats

from network.channel import (GainPdfCoefficients, gain_ccdf, gain_mean, gain_pdf, gain_pdf_coeffs,
                             gain_quantile_bound, path_loss, sample_fading, sample_mimo_gain)
from network.params import SystemParams


class TestPathLoss:
    def test_formula(self):
        params = SystemParams.default()
        expected = params.kappa * 10.0 ** params.beta / params.k_pen ** 2
        assert path_loss(params, 10.0, 2) == pytest.approx(expected)

    def test_unit_distance_constant(self):
        params = SystemParams.default()
        assert params.kappa == pytest.approx(7748.487, rel=1e-5)
        assert path_loss(params, 1.0, 0) == pytest.approx(params.kappa)

    def test_each_wall_costs_the_penetration_loss(self):
        params = SystemParams.default()
        losses = path_loss(params, np.array([7.0, 7.0]), np.array([0, 1]))
        assert losses[1] / losses[0] == pytest.approx(10.0)

    def test_origin_rejected(self):
        with pytest.raises(ValueError):
            path_loss(SystemParams.default(), 0.0, 0)


class TestGainDensity:
    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_single_stream_is_gamma(self, n):
        coeffs = gain_pdf_coeffs(1, n)
        zeta = np.linspace(0.0, 20.0, 41)
        np.testing.assert_allclose(gain_pdf(coeffs, zeta), stats.gamma.pdf(zeta, n), rtol=1e-10, atol=1e-15)
        assert gain_mean(coeffs) == pytest.approx(float(n))

    @pytest.mark.parametrize("n_t,n_r", [(2, 2), (4, 2), (2, 3)])
    def test_density_integrates_to_one(self, n_t, n_r):
        coeffs = gain_pdf_coeffs(n_t, n_r)
        mass, _ = integrate.quad(lambda x: gain_pdf(coeffs, x), 0.0, np.inf, limit=200)
        assert mass == pytest.approx(1.0, abs=1e-8)

    def test_antenna_roles_are_symmetric(self):
        assert gain_pdf_coeffs(4, 2) == gain_pdf_coeffs(2, 4)

    def test_ccdf_matches_density(self):
        coeffs = gain_pdf_coeffs(4, 2)
        for x in (0.5, 3.0, 9.0):
            tail, _ = integrate.quad(lambda t: gain_pdf(coeffs, t), x, np.inf)
            assert gain_ccdf(coeffs, x) == pytest.approx(tail, abs=1e-10)
        assert gain_ccdf(coeffs, 0.0) == 1.0
        assert gain_ccdf(coeffs, gain_quantile_bound(coeffs)) <= 1e-14

    def test_more_transmit_antennas_dominate(self):
        wide, narrow = gain_pdf_coeffs(4, 2), gain_pdf_coeffs(2, 2)
        x = np.linspace(0.1, 20.0, 60)
        assert np.all(gain_ccdf(wide, x) >= gain_ccdf(narrow, x) - 1e-12)
        assert gain_mean(wide) > gain_mean(narrow)

    def test_mean_between_trace_bounds(self):
        coeffs = gain_pdf_coeffs(4, 2)
        assert 4.0 < gain_mean(coeffs) < 8.0

    def test_json_export(self):
        coeffs = gain_pdf_coeffs(4, 2)
        assert GainPdfCoefficients.from_json(coeffs.to_json()) == coeffs

    def test_bad_antenna_count(self):
        with pytest.raises(ValueError):
            gain_pdf_coeffs(0, 2)


class TestSampling:
    def test_fading_has_unit_mean(self, rng):
        assert np.mean(sample_fading(rng, size=50000)) == pytest.approx(1.0, abs=0.02)

    def test_scalar_draw(self, rng):
        assert isinstance(sample_mimo_gain(4, 2, rng), float)

    def test_sampled_gain_follows_density(self, rng):
        coeffs = gain_pdf_coeffs(4, 2)
        samples = sample_mimo_gain(4, 2, rng, size=20000)
        assert np.mean(samples) == pytest.approx(gain_mean(coeffs), rel=0.01)
        result = stats.kstest(samples, lambda x: 1.0 - gain_ccdf(coeffs, x))
        assert result.pvalue > 1e-3

    def test_single_antenna_gain_is_exponential(self, rng):
        samples = sample_mimo_gain(1, 1, rng, size=20000)
        assert stats.kstest(samples, "expon").pvalue > 1e-3
