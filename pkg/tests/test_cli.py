import json

import numpy as np
import pytest

from main import EXIT_ACCEPTANCE, EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, run_cli
from network import tradeoff
from network.analysis import ChiTable
from utils.output import read_csv

SMALL = ["--set", "params.r_d=20", "--set", "grid.rate_kbps=100, 300", "--set", "grid.q_dbm=-30, -20"]


def read_rows(path):
    return read_csv(path.read_text())


class TestChiTableCommand:
    def test_writes_every_entry(self, tmp_path):
        out = tmp_path / "chi.csv"
        assert run_cli(["chi-table", "--out", str(out)]) == EXIT_OK
        header, columns, rows = read_rows(out)
        assert columns == ["lambda_w", "eta", "chi", "reference", "within_tolerance"]
        assert len(rows) == 36
        assert header["command"] == f"chi-table --out {out}"
        assert all(row[4] in ("", "1") for row in rows)

    def test_json_output(self, tmp_path):
        out = tmp_path / "chi.json"
        assert run_cli(["chi-table", "--format", "json", "-o", str(out)]) == EXIT_OK
        assert len(json.loads(out.read_text())["rows"]) == 36

    def test_save_and_load(self, tmp_path):
        store, first, second = tmp_path / "chi.pkl", tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli(["chi-table", "-S", str(store), "-o", str(first)]) == EXIT_OK
        assert run_cli(["chi-table", "-L", str(store), "-o", str(second)]) == EXIT_OK
        assert read_rows(first)[2] == read_rows(second)[2]

    def test_mismatch_exit_status(self, tmp_path, monkeypatch):
        monkeypatch.setattr(ChiTable, "reference_mismatches", lambda self: [(1, 0.0, "1.0")])
        assert run_cli(["chi-table", "-o", str(tmp_path / "chi.csv")]) == EXIT_ACCEPTANCE


class TestConfigurationErrors:
    @pytest.mark.parametrize("extra", [["--set", "params.bogus=1"], ["--set", "seed"], ["--level", "1.5"],
                                       ["--config", "/nonexistent/run.cfg"]])
    def test_exit_status(self, tmp_path, extra):
        assert run_cli(["simulate", "-o", str(tmp_path / "x.csv")] + extra) == EXIT_CONFIG
        assert not (tmp_path / "x.csv").exists()


class TestAnalyze:
    def test_min_loss_curve(self, tmp_path):
        out = tmp_path / "minloss.csv"
        assert run_cli(["analyze", "--mode", "minloss", "--set", "params.r_d=20", "--set", "grid.points=10",
                        "-o", str(out)]) == EXIT_OK
        _, columns, rows = read_rows(out)
        assert columns == ["alpha", "cdf", "density"]
        assert len(rows) == 11
        assert rows[0][:2] == ["0", "0"]
        cdf = [float(row[1]) for row in rows]
        assert cdf == sorted(cdf)

    def test_bad_loss_grid(self, tmp_path):
        assert run_cli(["analyze", "--mode", "minloss", "--set", "params.r_d=20", "--set", "grid.alpha_min=10",
                        "--set", "grid.alpha_max=1", "-o", str(tmp_path / "x.csv")]) == EXIT_CONFIG


class TestSimulate:
    def test_same_seed_same_file(self, tmp_path):
        out = tmp_path / "sim.csv"
        args = ["simulate", "--reps", "200", "--seed", "5", "-o", str(out)] + SMALL
        assert run_cli(args) == EXIT_OK
        first = out.read_text()
        assert run_cli(args) == EXIT_OK
        assert out.read_text() == first
        header, columns, rows = read_rows(out)
        assert header["seed"] == "5" and header["reps"] == "200"
        assert "result.void_replications" in header
        assert len(columns) == 6 and len(rows) == 4

    def test_rerun_from_result_header(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli(["simulate", "--reps", "150", "--seed", "9", "-o", str(first)] + SMALL) == EXIT_OK
        assert run_cli(["simulate", "--config", str(first), "-o", str(second)]) == EXIT_OK
        assert read_rows(first)[2] == read_rows(second)[2]

    def test_replication_records(self, tmp_path):
        records = tmp_path / "reps.jsonl"
        args = ["simulate", "--reps", "120", "--jsonl", str(records), "-o", str(tmp_path / "s.csv")] + SMALL
        assert run_cli(args) == EXIT_OK
        assert len(records.read_text().splitlines()) == 120

    def test_too_few_replications(self, tmp_path):
        assert run_cli(["simulate", "--reps", "20", "-o", str(tmp_path / "s.csv")] + SMALL) == EXIT_NUMERIC


class TestTradeoff:
    def test_empty_sweep_writes_header_only(self, tmp_path):
        out = tmp_path / "t.csv"
        assert run_cli(["tradeoff", "--sweep", "d_ph", "--values", "", "-o", str(out)]) == EXIT_OK
        header, columns, rows = read_rows(out)
        assert columns == ["sweep", "value", "member", "r_star_kbps", "q_star_dbm", "level", "max_rate_kbps"]
        assert rows == []
        assert header["level"] == "0.75"

    def test_invalid_sweep_value(self, tmp_path):
        assert run_cli(["tradeoff", "--sweep", "rho", "--values", "1.5", "-o", str(tmp_path / "t.csv")]) == EXIT_NUMERIC

    def test_unparsable_sweep_values(self, tmp_path):
        assert run_cli(["tradeoff", "--values", "a,b", "-o", str(tmp_path / "t.csv")]) == EXIT_CONFIG

    def test_rate_ceiling_is_its_own_column(self, tmp_path, monkeypatch):
        class ExponentialEngine:
            def __init__(self, scale):
                self.scale = scale

            def jccdf(self, r_star, q_star_in):
                return float(np.exp(-q_star_in / self.scale - r_star / 1e5))

            def rate_ccdf(self, r_star):
                return float(np.exp(-r_star / 1e5))

        monkeypatch.setattr(tradeoff, "get_engine", lambda params, policy: ExponentialEngine(params.rho * 1e-5))
        out = tmp_path / "t.csv"
        assert run_cli(["tradeoff", "--sweep", "rho", "--values", "0.5", "--set", "grid.rate_kbps=1,10",
                        "-o", str(out)]) == EXIT_OK
        _, columns, rows = read_rows(out)
        assert len(rows) == 2
        assert all(np.isfinite(float(row[columns.index("q_star_dbm")])) for row in rows)
        ceilings = {float(row[columns.index("max_rate_kbps")]) for row in rows}
        assert len(ceilings) == 1
        assert ceilings.pop() == pytest.approx(100.0 * np.log(4.0 / 3.0), rel=2e-3)
