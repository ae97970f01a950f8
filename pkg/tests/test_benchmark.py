import pytest

from benchmark import plot_benchmark_results, run_benchmark


class TestBenchmark:
    def test_timing_chart_is_saved(self, tmp_path):
        path = tmp_path / "timings.png"
        plot_benchmark_results({"Engine build": 0.5, "Simulation (100 reps)": 2.0}, str(path))
        assert path.stat().st_size > 0

    @pytest.mark.slow
    def test_reports_timings(self, capsys):
        run_benchmark(["-n", "200", "-r", "100", "-q", "-20", "--no-plot"])
        out = capsys.readouterr().out
        assert "Engine build time" in out
        assert "J-CCDF time (average)" in out
