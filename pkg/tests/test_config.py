import pytest

from network.params import SystemParams, ph_density
from utils.config import RunConfig, header_items, load_config, parse_items, read_config_text
from utils.errors import ConfigError
from utils.output import render_csv


class TestParsing:
    def test_defaults(self):
        config = parse_items({})
        assert config == RunConfig()
        assert config.params == SystemParams.default()
        assert config.grid.q_dbm[0] == -35.0
        assert len(config.grid.rate_kbps) == 40

    def test_logarithmic_units(self):
        config = parse_items({"params.p_tx_dbm": "20", "params.k_pen_db": "-10", "params.sigma_c2_dbm": "-60"})
        assert config.params.p_tx == pytest.approx(0.1)
        assert config.params.k_pen == pytest.approx(0.1)
        assert config.params.sigma_c2 == pytest.approx(1e-9)

    def test_spacing_alias(self):
        config = parse_items({"params.d_ph": "3"})
        assert config.params.lambda_ph == pytest.approx(ph_density(3.0))

    def test_spacing_and_density_conflict(self):
        with pytest.raises(ConfigError) as info:
            parse_items({"params.d_ph": "3", "params.lambda_ph": "0.01"})
        assert info.value.key == "params.d_ph"

    @pytest.mark.parametrize("key", ["params.bogus", "bogus", "grid.nothing", "policy.n_min"])
    def test_unknown_key_is_named(self, key):
        with pytest.raises(ConfigError) as info:
            parse_items({key: "1"})
        assert info.value.key == key

    @pytest.mark.parametrize("key,text", [("seed", "-1"), ("seed", "1.5"), ("level", "1.0"), ("reps", "0"),
                                          ("params.n_t", "two"), ("format", "xml")])
    def test_bad_values(self, key, text):
        with pytest.raises(ConfigError):
            parse_items({key: text})

    def test_invalid_physics_becomes_config_error(self):
        with pytest.raises(ConfigError):
            parse_items({"params.rho": "1.0"})

    def test_large_seed_parsed_exactly(self):
        assert parse_items({"seed": "18446744073709551615"}).seed == 2 ** 64 - 1

    def test_lists_and_policy(self):
        config = parse_items({"grid.rate_kbps": "100, 300", "policy.n_max": "6", "policy.outer_tol": "1e-5"})
        assert config.grid.rate_kbps == (100.0, 300.0)
        assert config.policy.n_max == 6
        assert config.policy.quad.outer_tol == 1e-5

    def test_items_reproduce_the_configuration(self):
        config = parse_items({"seed": "9", "params.d_ph": "7", "params.rho": "0.3", "grid.l0": "1e6",
                              "policy.eta_tol": "1e-9"})
        assert parse_items(dict(config.to_items())) == config


class TestFiles:
    def test_comments_and_spacing(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("# dense deployment\nseed = 7\nparams.d_ph = 3  # metres\n\ngrid.q_dbm = -20, -10\n")
        config = load_config(str(path), {"reps": "500", "level": None})
        assert config.seed == 7 and config.reps == 500 and config.level == 0.75
        assert config.params.lambda_ph == pytest.approx(ph_density(3.0))
        assert config.grid.q_dbm == (-20.0, -10.0)

    def test_read_config_text_keeps_case(self):
        assert read_config_text("params.n_t = 2\n") == {"params.n_t": "2"}

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            load_config(str(tmp_path / "absent.cfg"))
        assert info.value.key == "config"

    def test_header_items_skip_command_and_results(self):
        text = "# command = simulate\n# seed = 3\n# result.void_replications = 0\nz,cdf\n# seed = 4\n"
        assert header_items(text) == {"seed": "3"}

    def test_result_file_is_a_configuration(self, tmp_path):
        config = parse_items({"seed": "11", "params.lambda_w": "0.02", "grid.points": "20"})
        lines = [("command", "analyze --mode minloss")] + config.to_items() + [("result.l0", "1.0")]
        path = tmp_path / "result.csv"
        path.write_text(render_csv(lines, ("alpha", "cdf"), [(0.0, 0.0)]))
        assert load_config(str(path)) == config
