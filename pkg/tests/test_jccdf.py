import numpy as np
import pytest

from network.analysis import AnalyticEngine, CountingEngine, ScenarioDerived, jccdf, rate_ccdf
from network.analysis.jccdf import LOWER_SHARE
from network.montecarlo import batch_jccdf, batch_rate_ccdf, simulate
from network.params import SystemParams
from utils.units import dbm_to_watt

RATE = 100e3
POWER = float(dbm_to_watt(-25.0))


class TestTargets:
    def test_scenario_quantities(self, small_params):
        scenario = ScenarioDerived.from_targets(small_params, small_params.b_c, 4e-6)
        assert scenario.gamma == pytest.approx(1.0)
        assert scenario.sinr_threshold == pytest.approx(1.0)
        assert scenario.q_star == pytest.approx(4e-6 / (small_params.rho * small_params.xi))
        assert scenario.t_star == pytest.approx((scenario.q_star + small_params.sigma_star2) / 2.0)

    @pytest.mark.parametrize("r_star,q_star", [(0.0, 1e-6), (-5.0, 1e-6), (1e5, -1e-6)])
    def test_scenario_rejects_bad_targets(self, small_params, r_star, q_star):
        with pytest.raises(ValueError):
            ScenarioDerived.from_targets(small_params, r_star, q_star)

    def test_energy_target_must_be_positive(self, engine):
        with pytest.raises(ValueError):
            engine.jccdf(RATE, 0.0)

    def test_unknown_method(self, engine):
        with pytest.raises(ValueError):
            engine.jccdf(RATE, POWER, method="laplace")


class TestServingLossSupport:
    def test_lower_edge_leaves_a_fixed_share(self, engine, policy):
        y_lo, y_hi = engine.loss_support
        assert y_lo < y_hi
        assert engine.min_loss_cdf(y_lo) == pytest.approx(LOWER_SHARE * policy.quad.outer_tol, rel=1e-3)

    def test_conditional_law_at_lower_edge(self, engine):
        y_lo, _ = engine.loss_support
        law = engine.conditional_cdf(y_lo)
        mean = engine.mean_interference(y_lo)
        values = law(np.array([0.0, 0.1 * mean, mean, 10.0 * mean, 1e4 * mean]))
        assert np.all((values >= 0.0) & (values <= 1.0))
        assert np.all(np.diff(values) >= -1e-6)
        assert values[0] == pytest.approx(law.atom, abs=1e-9)
        assert values[-1] >= 0.999

    def test_decay_frequency_covers_every_active_ceiling(self, engine):
        y_lo, _ = engine.loss_support
        reach = engine.decay_frequency(y_lo)
        assert reach >= y_lo
        assert all(reach >= engine.threshold(n) for n in engine.active_populations() if engine.active(n, y_lo))


class TestJointCcdfAtOnePoint:
    def test_bounded_by_the_rate_ccdf(self, engine):
        joint = engine.jccdf(RATE, POWER)
        assert 0.0 < joint <= engine.rate_ccdf(RATE) + 1e-5


@pytest.mark.slow
class TestJointCcdf:
    def test_nonincreasing_in_both_targets(self, engine):
        powers = dbm_to_watt(np.array([-40.0, -30.0, -20.0]))
        by_power = [engine.jccdf(RATE, float(q)) for q in powers]
        assert by_power[0] >= by_power[1] - 1e-5 >= by_power[2] - 2e-5
        by_rate = [engine.jccdf(r, POWER) for r in (20e3, 200e3, 1e6)]
        assert by_rate[0] >= by_rate[1] - 1e-5 >= by_rate[2] - 2e-5
        assert all(0.0 <= value <= 1.0 for value in by_power + by_rate)

    def test_vanishing_energy_target_gives_rate_ccdf(self, engine):
        assert engine.jccdf(RATE, 1e-15) == pytest.approx(engine.rate_ccdf(RATE), abs=1e-4)

    def test_transform_inner_agrees(self, engine):
        scenario = ScenarioDerived.from_targets(engine.params, RATE, POWER)
        y_lo, y_hi = engine.loss_support
        y = float(np.sqrt(y_lo * y_hi))
        assert engine.transform_inner(scenario, y) == pytest.approx(engine.joint_inner(scenario, y), abs=1e-3)

    def test_functional_front_end(self, small_params, policy, engine):
        assert jccdf(small_params, policy, RATE, POWER) == pytest.approx(engine.jccdf(RATE, POWER))
        assert rate_ccdf(small_params, policy, RATE) == pytest.approx(engine.rate_ccdf(RATE))

    def test_counting_engine(self, small_params, policy, engine):
        counting = CountingEngine(small_params, policy)
        value, calls, points = counting.counted_jccdf(RATE, POWER)
        assert value == pytest.approx(engine.jccdf(RATE, POWER))
        assert 0 < calls <= points

    @pytest.mark.parametrize("q_dbm", [-30.0, -20.0])
    def test_matches_simulation(self, small_params, engine, q_dbm):
        batch = simulate(small_params, 4000, np.random.default_rng(17))
        q_star = float(dbm_to_watt(q_dbm))
        estimate, half_width = batch_jccdf(batch, RATE, q_star)
        assert engine.jccdf(RATE, q_star) == pytest.approx(estimate, abs=half_width + 0.02)
        estimate, half_width = batch_rate_ccdf(batch, RATE)
        assert engine.rate_ccdf(RATE) == pytest.approx(estimate, abs=half_width + 0.02)


@pytest.mark.slow
class TestDefaultProfileAgainstSimulation:
    POINTS = [(50e3, -35.0), (100e3, -30.0), (200e3, -25.0), (400e3, -20.0), (800e3, -15.0)]

    @pytest.fixture(scope="class")
    def default_engine(self, policy):
        return AnalyticEngine(SystemParams.default(), policy)

    @pytest.fixture(scope="class")
    def default_batch(self):
        return simulate(SystemParams.default(), 10000, np.random.default_rng(2024))

    @pytest.mark.parametrize("r_star,q_dbm", POINTS)
    def test_joint_ccdf_within_the_confidence_band(self, default_engine, default_batch, r_star, q_dbm):
        q_star = float(dbm_to_watt(q_dbm))
        estimate, half_width = batch_jccdf(default_batch, r_star, q_star)
        assert default_engine.jccdf(r_star, q_star) == pytest.approx(estimate, abs=max(0.02, half_width))
