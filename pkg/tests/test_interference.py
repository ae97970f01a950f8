from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from network.analysis import AnalyticEngine, interference_cdf
from network.montecarlo import simulate, stratified_interference_cdf


class TestConditionalInterference:
    def test_void_probability(self, engine, serving_loss):
        atom = engine.interferer_void_probability(serving_loss)
        expected = np.exp(-sum(engine.population_mass(n) - engine.intensity(n, serving_loss)
                               for n in engine.active_populations()))
        assert atom == pytest.approx(expected)
        assert engine.conditional_cdf(serving_loss)(0.0) == atom
        assert engine.interferer_void_probability(10.0 * engine.threshold(engine.n_max)) == 1.0

    def test_marching_and_filon_inversions_agree(self, engine, serving_loss):
        mean = engine.mean_interference(serving_loss)
        z = mean * np.array([0.3, 1.0, 3.0])
        curve = engine.interference_cdf_curve(z, serving_loss)
        for point, value in zip(z, curve):
            assert engine.interference_cdf(point, serving_loss) == pytest.approx(value, abs=1e-4)

    def test_is_a_distribution(self, engine, serving_loss):
        mean = engine.mean_interference(serving_loss)
        z = np.linspace(0.0, 50.0 * mean, 200)
        curve = engine.interference_cdf_curve(z, serving_loss)
        assert np.all(np.diff(curve) >= -1e-5)
        assert curve[-1] == pytest.approx(1.0, abs=1e-3)
        assert engine.interference_cdf(-1.0, serving_loss) == 0.0

    def test_conditional_law_is_cached(self, engine, serving_loss):
        assert engine.conditional_cdf(serving_loss) is engine.conditional_cdf(serving_loss)

    def test_concurrent_lookups_share_one_law(self, small_params, policy, serving_loss):
        fresh = AnalyticEngine(small_params, policy)
        with ThreadPoolExecutor(max_workers=4) as pool:
            laws = list(pool.map(fresh.conditional_cdf, [serving_loss] * 4))
        assert all(law is laws[0] for law in laws)
        assert fresh.conditional_cdf(serving_loss) is laws[0]

    def test_series_and_oracle_exponents_agree(self, engine, oracle, serving_loss):
        omega = serving_loss * np.array([0.1, 1.0, 10.0])
        np.testing.assert_allclose(engine.interference_log_cf(omega, serving_loss),
                                   oracle.interference_log_cf(omega, serving_loss), rtol=1e-5, atol=1e-8)

    def test_functional_front_end(self, small_params, policy, engine, serving_loss):
        z = engine.mean_interference(serving_loss)
        assert interference_cdf(small_params, policy, z, serving_loss) == pytest.approx(
            engine.interference_cdf(z, serving_loss))

    def test_rejects_non_positive_loss(self, engine):
        with pytest.raises(ValueError):
            engine.interference_cdf(1.0, 0.0)
        with pytest.raises(ValueError):
            engine.interference_cdf_curve([1.0], -2.0)


@pytest.mark.slow
class TestAgainstSimulation:
    def test_stratified_interference(self, small_params, engine):
        batch = simulate(small_params, 40000, np.random.default_rng(8))
        low, high = np.quantile(batch.l0[np.isfinite(batch.l0)], [0.45, 0.55])
        empirical = stratified_interference_cdf(small_params, (low, high), 0, None, batch=batch)
        law = engine.conditional_cdf(float(np.sqrt(low * high)))
        assert empirical.sup_distance(law) < 0.08
