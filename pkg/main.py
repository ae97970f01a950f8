#!/usr/bin/env python3
"""
Command-line front end.

    python main.py chi-table [--save-path F | --load-path F]
    python main.py analyze --mode minloss|interference|jccdf
    python main.py simulate [--jsonl F]
    python main.py tradeoff --sweep d_ph|lambda_w|rho|n_t [--values 3,5,7] [--envelope]

Every subcommand reads the same run configuration (``--config``) and writes
one CSV or JSON table whose header block echoes all settings.
Exit status: 0 success, 2 configuration error, 3 numerical failure,
4 chi table disagreeing with the published values.
"""
import argparse
import logging
import sys
from typing import Dict, List, Optional, Sequence

import numpy as np

from network.analysis import ChiTable, get_engine
from network.montecarlo import batch_jccdf, batch_rate_ccdf, simulate, write_jsonl
from network.tradeoff import envelope, tradeoff_curve
from utils.config import RESULT_PREFIX, RunConfig, load_config
from utils.errors import ConfigError
from utils.output import write_table
from utils.units import bps_to_kbps, dbm_to_watt, kbps_to_bps

logger = logging.getLogger("main")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_ACCEPTANCE = 4

SWEEP_DEFAULTS = {
    "d_ph": (3.0, 5.0, 7.0),
    "lambda_w": (0.0, 0.03, 0.05),
    "rho": (0.1, 0.5, 0.9),
    "n_t": (1, 2, 4),
}


def header(command: Sequence[str], config: RunConfig, results=()) -> List:
    lines = [("command", " ".join(command))]
    lines += config.to_items()
    lines += [(RESULT_PREFIX + key, value) for key, value in results]
    return lines


def run_chi_table(args, config: RunConfig, command) -> int:
    """The chi table for every configured wall density; exit 4 on a published-value mismatch."""
    if args.load_path:
        tables = []
        with open(args.load_path, "rb") as f:
            while True:
                try:
                    tables.append(ChiTable(table_file=f))
                except EOFError:
                    break
        logger.info("loaded %d chi tables from %s", len(tables), args.load_path)
    else:
        tables = [ChiTable.build(lambda_w, config.grid.eta_max) for lambda_w in config.grid.lambda_w]
    if args.save_path:
        with open(args.save_path, "wb") as f:
            for table in tables:
                table.save_table(f)

    rows = []
    failures = 0
    for table in tables:
        reference = table.reference() or ()
        bad = {eta for eta, _, _ in table.reference_mismatches()}
        failures += len(bad)
        for eta, value in enumerate(table.values):
            printed = reference[eta] if eta < len(reference) else None
            rows.append((table.lambda_w, eta, value, printed, None if printed is None else int(eta not in bad)))
    write_table(config.output_path, header(command, config),
                ("lambda_w", "eta", "chi", "reference", "within_tolerance"), rows, config.format)
    if failures:
        logger.error("%d chi entries deviate from the published table", failures)
        return EXIT_ACCEPTANCE
    return EXIT_OK


def _loss_grid(engine, grid) -> np.ndarray:
    low, high = engine.loss_support
    if not np.isfinite(low):
        low, high = engine.params.kappa, engine.params.loss_ceiling(0)
    low = grid.alpha_min if grid.alpha_min is not None else low
    high = grid.alpha_max if grid.alpha_max is not None else high
    if not 0 < low < high:
        raise ConfigError(f"need 0 < alpha_min < alpha_max, got {low} and {high}", "grid.alpha_min")
    return np.concatenate(([0.0], np.geomspace(low, high, grid.points)))


def run_analyze(args, config: RunConfig, command) -> int:
    engine = get_engine(config.params, config.policy)
    grid = config.grid
    results = []
    if args.mode == "minloss":
        alpha = _loss_grid(engine, grid)
        cdf = np.atleast_1d(engine.min_loss_cdf(alpha))
        density = np.atleast_1d(engine.min_loss_density(alpha))
        columns = ("alpha", "cdf", "density")
        rows = list(zip(alpha, cdf, density))
    elif args.mode == "interference":
        if grid.l0 is not None:
            l0 = grid.l0
        else:
            low, high = engine.loss_support
            if not np.isfinite(low):
                raise ConfigError("no power head can serve; set grid.l0 explicitly", "grid.l0")
            l0 = float(np.sqrt(low * high))
        mean = engine.mean_interference(l0)
        z_max = grid.z_max if grid.z_max is not None else 10.0 * engine.inversion_scale(l0)
        z = np.linspace(0.0, z_max, grid.points)
        cdf = engine.interference_cdf_curve(z, l0)
        results = [("l0", repr(float(l0))), ("conditional_mean", repr(float(mean))),
                   ("void_probability", repr(engine.interferer_void_probability(l0)))]
        columns = ("z", "cdf")
        rows = list(zip(z, cdf))
    else:
        columns = ("r_star_kbps", "q_star_dbm", "jccdf")
        rows = []
        for rate in grid.rate_kbps:
            for q_dbm in grid.q_dbm:
                value = engine.jccdf(float(kbps_to_bps(rate)), float(dbm_to_watt(q_dbm)))
                logger.debug("F_c(%g kbps, %g dBm) = %.6g", rate, q_dbm, value)
                rows.append((rate, q_dbm, value))
    write_table(config.output_path, header(command, config, results), columns, rows, config.format)
    return EXIT_OK


def run_simulate(args, config: RunConfig, command) -> int:
    rng = np.random.default_rng(config.seed)
    batch = simulate(config.params, config.reps, rng, keep=bool(args.jsonl))
    if args.jsonl:
        with open(args.jsonl, "w", encoding="utf-8") as f:
            write_jsonl(batch.records, f)
    rows = []
    for rate in config.grid.rate_kbps:
        r_star = float(kbps_to_bps(rate))
        rate_value, rate_half = batch_rate_ccdf(batch, r_star)
        for q_dbm in config.grid.q_dbm:
            value, half = batch_jccdf(batch, r_star, float(dbm_to_watt(q_dbm)))
            rows.append((rate, q_dbm, value, half, rate_value, rate_half))
    results = [("void_replications", str(batch.void_count))]
    write_table(config.output_path, header(command, config, results),
                ("r_star_kbps", "q_star_dbm", "jccdf", "jccdf_half_width", "rate_ccdf", "rate_ccdf_half_width"),
                rows, config.format)
    return EXIT_OK


def _sweep_params(config: RunConfig, name: str, value: float):
    if name == "d_ph":
        return config.params.replace(d_ph=value)
    if name == "n_t":
        if value != int(value):
            raise ConfigError(f"antenna count must be an integer, got {value}", "values")
        return config.params.replace(n_t=int(value))
    return config.params.replace(**{name: value})


def run_tradeoff(args, config: RunConfig, command) -> int:
    if args.values is None:
        values = SWEEP_DEFAULTS[args.sweep]
    else:
        try:
            values = tuple(float(v) for v in args.values.split(",") if v.strip())
        except ValueError as exc:
            raise ConfigError(f"cannot parse sweep values {args.values!r}", "values") from exc
    rates = [float(kbps_to_bps(r)) for r in config.grid.rate_kbps]
    members = [_sweep_params(config, args.sweep, value) for value in values]

    rows = []
    for value, params in zip(values, members):
        logger.info("solving trade-off curve for %s = %g", args.sweep, value)
        curve = tradeoff_curve(params, config.policy, config.level, rates)
        ceiling = None if curve.max_rate is None else float(bps_to_kbps(curve.max_rate))
        rows += [(args.sweep, value, None, float(bps_to_kbps(p.r_star)), p.q_star_dbm, p.level, ceiling)
                 for p in curve]
    if args.envelope and members:
        merged = envelope(members, config.policy, config.level, rates)
        ceiling = None if merged.max_rate is None else float(bps_to_kbps(merged.max_rate))
        rows += [("envelope", values[p.member], p.member, float(bps_to_kbps(p.r_star)), p.q_star_dbm, p.level,
                  ceiling) for p in merged]
    write_table(config.output_path, header(command, config),
                ("sweep", "value", "member", "r_star_kbps", "q_star_dbm", "level", "max_rate_kbps"), rows,
                config.format)
    return EXIT_OK


def overrides_from(args) -> Dict[str, Optional[str]]:
    items = {"seed": args.seed, "reps": args.reps, "level": args.level,
             "output_path": args.out, "format": args.format}
    for assignment in args.set or ():
        key, sep, value = assignment.partition("=")
        if not sep:
            raise ConfigError(f"expected KEY=VALUE, got {assignment!r}", "set")
        items[key.strip()] = value.strip()
    return items


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', '-c', type=str, help='Run configuration file (or a previous result file).')
    common.add_argument('--seed', type=int, help='Seed of the random generator.')
    common.add_argument('--reps', type=int, help='Monte Carlo replications.')
    common.add_argument('--level', type=float, help='Reliability level of trade-off curves.')
    common.add_argument('--out', '-o', type=str, help='Output file; standard output when omitted.')
    common.add_argument('--format', type=str, choices=['csv', 'json'], help='Output format.')
    common.add_argument('--set', action='append', metavar='KEY=VALUE',
                        help='Override one configuration key, e.g. params.d_ph=3. Repeatable.')
    common.add_argument('--log-level', type=str, default='INFO',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
                        help='Set the logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL).')

    parser = argparse.ArgumentParser(description="Indoor MIMO SWIPT blockage analysis",
                                     formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    commands = parser.add_subparsers(dest="command", required=True)

    chi_parser = commands.add_parser('chi-table', parents=[common], help='Wall weights chi_eta(lambda_w).',
                                     formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    chi_parser.add_argument('--save-path', '-S', type=str, help='Path to save the chi tables.')
    chi_parser.add_argument('--load-path', '-L', type=str, help='Path to load the chi tables from.')

    analyze_parser = commands.add_parser('analyze', parents=[common], help='Analytic curves.',
                                         formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    analyze_parser.add_argument('--mode', type=str, default='jccdf', choices=['minloss', 'interference', 'jccdf'],
                                help='Which curve to evaluate.')

    simulate_parser = commands.add_parser('simulate', parents=[common], help='Monte Carlo estimates.',
                                          formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    simulate_parser.add_argument('--jsonl', type=str, help='Also write every replication as JSON lines.')

    tradeoff_parser = commands.add_parser('tradeoff', parents=[common], help='Rate-energy trade-off curves.',
                                          formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    tradeoff_parser.add_argument('--sweep', type=str, default='rho', choices=sorted(SWEEP_DEFAULTS),
                                 help='Parameter varied between curves.')
    tradeoff_parser.add_argument('--values', type=str,
                                 help='Comma-separated sweep values; defaults depend on --sweep.')
    tradeoff_parser.add_argument('--envelope', action='store_true',
                                 help='Also emit the pointwise best curve over the sweep.')
    return parser


HANDLERS = {
    "chi-table": run_chi_table,
    "analyze": run_analyze,
    "simulate": run_simulate,
    "tradeoff": run_tradeoff,
}


def run_cli(args_list=None) -> int:
    """
    Parse arguments, run one subcommand and return its exit status.

    Args:
        args_list: A list of strings to be parsed as command-line arguments.
                   If None, uses sys.argv (standard command-line arguments).
    """
    parser = build_parser()
    args = parser.parse_args(args_list)
    logging.basicConfig(level=getattr(logging, args.log_level.upper()))
    command = list(sys.argv[1:] if args_list is None else args_list)

    try:
        config = load_config(args.config, overrides_from(args))
        return HANDLERS[args.command](args, config, command)
    except ConfigError as exc:
        logger.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(run_cli(sys.argv[1:]))
