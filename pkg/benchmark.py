#!/usr/bin/env python3
import argparse
import logging
import statistics
import sys
import timeit
from typing import Dict, Optional

import matplotlib.pyplot as plt
import numpy as np

from network.analysis import CountingEngine, TruncationPolicy
from network.montecarlo import batch_jccdf, simulate
from network.params import SystemParams
from utils.units import dbm_to_watt, kbps_to_bps


def plot_benchmark_results(results: Dict[str, float], path: Optional[str] = None):
    """
    Horizontal bar chart of wall-clock times; saved to ``path`` or shown.
    """
    names = list(results.keys())
    times = [results[name] for name in names]

    plt.figure(figsize=(10, 6))
    bars = plt.barh(names, times)
    plt.xscale("log")
    plt.xlabel("Time Taken (seconds)")
    plt.title("Benchmark Results: analytic J-CCDF vs. Monte Carlo")
    for rect, value in zip(bars, times):
        plt.text(rect.get_width() * 1.05, rect.get_y() + rect.get_height() / 2, f"{value:.3g}s", va='center')
    plt.tight_layout()
    if path:
        plt.savefig(path)
        plt.close()
    else:
        plt.show()


def run_benchmark(args_list=None):
    """
    Times the analytic J-CCDF against a Monte Carlo estimate of the same points.

    Args:
        args_list: A list of strings to be parsed as command-line arguments.
                   If None, uses sys.argv (standard command-line arguments).
    """
    parser = argparse.ArgumentParser(
        description="J-CCDF Benchmark",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument('-d', '--d-ph', type=float, default=5.0, help='Power-head spacing in metres.')
    parser.add_argument('-w', '--lambda-w', type=float, default=0.05, help='Walls per metre per axis.')
    parser.add_argument('-r', '--rates', type=str, default='100,300,600', help='Comma-separated rate targets in kbps.')
    parser.add_argument('-q', '--powers', type=str, default='-30,-20', help='Comma-separated power targets in dBm.')
    parser.add_argument('-n', '--reps', type=int, default=20000, help='Monte Carlo replications.')
    parser.add_argument('-s', '--seed', type=int, default=1, help='Seed of the Monte Carlo generator.')
    parser.add_argument('-p', '--plot', type=str, help='Save the timing chart here instead of showing it.')
    parser.add_argument('--no-plot', action='store_true', help='Skip the timing chart.')
    parser.add_argument('--log-level', type=str, default='ERROR', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
                        help='Set the logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL).')
    args = parser.parse_args(args_list)

    logging.basicConfig(level=getattr(logging, args.log_level.upper()))

    params = SystemParams.default(d_ph=args.d_ph, lambda_w=args.lambda_w)
    targets = [(float(r), float(q)) for r in args.rates.split(',') for q in args.powers.split(',')]

    engine = None

    def build():
        nonlocal engine
        engine = CountingEngine(params, TruncationPolicy())

    build_time = timeit.timeit(stmt=build, number=1)

    batch = None

    def run_simulation():
        nonlocal batch
        batch = simulate(params, args.reps, np.random.default_rng(args.seed))

    simulation_time = timeit.timeit(stmt=run_simulation, number=1)

    analytic_times = []
    cf_calls = []
    cf_points = []
    gaps = []
    for rate, q_dbm in targets:
        r_star, q_star = float(kbps_to_bps(rate)), float(dbm_to_watt(q_dbm))
        start_time = timeit.default_timer()
        value, calls, points = engine.counted_jccdf(r_star, q_star)
        analytic_times.append(timeit.default_timer() - start_time)
        cf_calls.append(calls)
        cf_points.append(points)
        estimate, half_width = batch_jccdf(batch, r_star, q_star)
        gaps.append(abs(value - estimate))
        print(f"{rate:8.1f} kbps {q_dbm:7.1f} dBm: analytic {value:.4f}, simulated {estimate:.4f} +- {half_width:.4f}")

    print(f"Engine build time: {build_time:.6f}")
    print(f"Simulation time ({args.reps} replications): {simulation_time:.6f}")
    print(f"J-CCDF time (min): {min(analytic_times):.6f}")
    print(f"J-CCDF time (max): {max(analytic_times):.6f}")
    print(f"J-CCDF time (average): {statistics.mean(analytic_times):.6f}")
    print(f"J-CCDF time (stdev): {statistics.stdev(analytic_times) if len(analytic_times) > 1 else 0:.6f}")
    print(f"Average exponent calls: {statistics.mean(cf_calls):.1f}")
    print(f"Average exponent frequencies: {statistics.mean(cf_points):.1f}")
    print(f"Largest analytic/simulated gap: {max(gaps):.4f}")

    if not args.no_plot:
        timings = {"Engine build": build_time, f"Simulation ({args.reps} reps)": simulation_time}
        timings.update({f"J-CCDF {rate:g} kbps, {q_dbm:g} dBm": elapsed
                        for (rate, q_dbm), elapsed in zip(targets, analytic_times)})
        plot_benchmark_results(timings, args.plot)


if __name__ == "__main__":
    run_benchmark(sys.argv[1:])
