#!/usr/bin/env python3
"""
Run configuration: flat ``key = value`` text with dotted keys.

    # comments start with '#'
    seed = 7
    reps = 10000
    params.d_ph = 5
    params.p_tx_dbm = 30
    policy.eta_tol = 1e-10
    grid.rate_kbps = 100, 300, 600

Powers may be given in dBm (``*_dbm``) or Watt, the penetration gain in dB
(``params.k_pen_db``) or linear. Unknown keys are rejected by name.
"""
import configparser
from dataclasses import dataclass, field, fields
import logging
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from network.analysis import TruncationPolicy
from network.params import SystemParams, ph_density
from utils.errors import ConfigError
from utils.quadrature import QuadControls
from utils.units import db_to_linear, dbm_to_watt, thermal_noise_watt

logger = logging.getLogger(__name__)

SECTION = "run"
FORMATS = ("csv", "json")

PARAM_KEYS = {f.name for f in fields(SystemParams)}
PARAM_ALIASES = {"d_ph", "k_pen_db", "p_tx_dbm", "sigma_n2_dbm", "sigma_c2_dbm", "noise_figure_db"}
POLICY_KEYS = {"n_max", "eta_tol", "eta_cap"}
QUAD_KEYS = {f.name for f in fields(QuadControls)}
LIST_KEYS = {"lambda_w", "rate_kbps", "q_dbm"}



def _text(value) -> str:
    """Exact text for a setting: shortest round-tripping repr for reals."""
    if value is None:
        return "None"
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("boolean settings are not supported")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))

@dataclass(frozen=True)
class GridConfig:
    """Evaluation grids of the command-line modes."""
    lambda_w: Tuple[float, ...] = (0.0, 0.01, 0.02, 0.03, 0.04, 0.05)
    eta_max: int = 5
    points: int = 100
    alpha_min: Optional[float] = None
    alpha_max: Optional[float] = None
    l0: Optional[float] = None
    z_max: Optional[float] = None
    rate_kbps: Tuple[float, ...] = tuple(float(v) for v in np.round(np.logspace(1, np.log10(2000), 40), 6))
    q_dbm: Tuple[float, ...] = (-35.0, -30.0, -25.0, -20.0, -15.0, -10.0)


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams = field(default_factory=SystemParams.default)
    policy: TruncationPolicy = field(default_factory=TruncationPolicy)
    seed: int = 0
    reps: int = 10000
    level: float = 0.75
    output_path: Optional[str] = None
    format: str = "csv"
    grid: GridConfig = field(default_factory=GridConfig)

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("must be an unsigned 64-bit integer", "seed")
        if self.reps < 1:
            raise ConfigError("must be positive", "reps")
        if not 0.0 < self.level < 1.0:
            raise ConfigError("must lie in (0, 1)", "level")
        if self.format not in FORMATS:
            raise ConfigError(f"must be one of {', '.join(FORMATS)}", "format")

    def to_items(self) -> List[Tuple[str, str]]:
        """Every setting as (dotted key, text), in SI units, enough to rerun bit-identically."""
        items = [("seed", str(self.seed)), ("reps", str(self.reps)), ("level", _text(self.level)),
                 ("format", self.format)]
        if self.output_path:
            items.append(("output_path", self.output_path))
        items += [(f"params.{f.name}", _text(getattr(self.params, f.name))) for f in fields(SystemParams)]
        items += [(f"policy.{name}", _text(getattr(self.policy, name))) for name in sorted(POLICY_KEYS)]
        items += [(f"policy.{f.name}", _text(getattr(self.policy.quad, f.name))) for f in fields(QuadControls)]
        for f in fields(GridConfig):
            value = getattr(self.grid, f.name)
            if value is None:
                continue
            text = ", ".join(_text(v) for v in value) if isinstance(value, tuple) else _text(value)
            items.append((f"grid.{f.name}", text))
        return items


def _number(key: str, text: str, kind=float):
    text = text.strip()
    if text == "None":
        return None
    if kind is int and text.lstrip("+-").isdigit():
        return int(text)
    try:
        value = float(text)
    except ValueError as exc:
        raise ConfigError(f"cannot parse {text!r} as {kind.__name__}", key) from exc
    if kind is int:
        if not np.isfinite(value) or value != int(value):
            raise ConfigError(f"expected an integer, got {text!r}", key)
        return int(value)
    return value


def _numbers(key: str, text: str) -> Tuple[float, ...]:
    return tuple(_number(key, part) for part in text.split(",") if part.strip())


def parse_items(items: Mapping[str, str]) -> RunConfig:
    """Validate dotted key/value text into a RunConfig."""
    top: Dict[str, object] = {}
    params: Dict[str, object] = {}
    policy: Dict[str, object] = {}
    quad: Dict[str, object] = {}
    grid: Dict[str, object] = {}
    integers = {"n_t", "n_r", "n_max", "eta_cap", "max_panels", "eta_max", "points", "seed", "reps"}

    for key, text in items.items():
        section, _, name = key.rpartition(".")
        kind = int if name in integers else float
        if section == "":
            if name in ("seed", "reps", "level"):
                top[name] = _number(key, text, kind)
            elif name in ("output_path", "format"):
                top[name] = text.strip()
            else:
                raise ConfigError("unknown key", key)
        elif section == "params" and (name in PARAM_KEYS or name in PARAM_ALIASES):
            params[name] = _number(key, text, kind)
        elif section == "policy" and name in POLICY_KEYS:
            policy[name] = _number(key, text, kind)
        elif section == "policy" and name in QUAD_KEYS:
            quad[name] = _number(key, text, kind)
        elif section == "grid" and name in {f.name for f in fields(GridConfig)}:
            grid[name] = _numbers(key, text) if name in LIST_KEYS else _number(key, text, kind)
        else:
            raise ConfigError("unknown key", key)

    try:
        system = _build_params(params)
        truncation = TruncationPolicy(quad=QuadControls(**quad), **policy)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), "params" if params else "policy") from exc
    return RunConfig(params=system, policy=truncation, grid=GridConfig(**grid), **top)


def _build_params(values: Dict[str, object]) -> SystemParams:
    values = dict(values)
    if "d_ph" in values:
        if "lambda_ph" in values:
            raise ConfigError("give either d_ph or lambda_ph", "params.d_ph")
        values["lambda_ph"] = ph_density(values.pop("d_ph"))
    if "k_pen_db" in values:
        values["k_pen"] = float(db_to_linear(values.pop("k_pen_db")))
    if "p_tx_dbm" in values:
        values["p_tx"] = float(dbm_to_watt(values.pop("p_tx_dbm")))
    if "sigma_c2_dbm" in values:
        values["sigma_c2"] = float(dbm_to_watt(values.pop("sigma_c2_dbm")))
    if "sigma_n2_dbm" in values:
        if "noise_figure_db" in values:
            raise ConfigError("give either sigma_n2_dbm or noise_figure_db", "params.noise_figure_db")
        values["sigma_n2"] = float(dbm_to_watt(values.pop("sigma_n2_dbm")))
    if "noise_figure_db" in values:
        values["sigma_n2"] = thermal_noise_watt(values.get("b_c", 200e3), values.pop("noise_figure_db"))
    values.setdefault("lambda_ph", ph_density(5.0))
    values.setdefault("lambda_w", 0.05)
    return SystemParams(**values)


def read_config_text(text: str) -> Dict[str, str]:
    parser = configparser.ConfigParser(comment_prefixes=("#",), inline_comment_prefixes=("#",),
                                       interpolation=None, delimiters=("=",))
    parser.optionxform = str
    try:
        parser.read_string(f"[{SECTION}]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed configuration: {exc}") from exc
    return dict(parser.items(SECTION))


HEADER_MARK = "# command = "
# header entries reporting results rather than settings
RESULT_PREFIX = "result."


def header_items(text: str) -> Dict[str, str]:
    """Settings echoed in the header block of a result file, without the command line."""
    items = {}
    for line in text.splitlines():
        if not line.startswith("#"):
            break
        key, _, value = line[1:].partition("=")
        key = key.strip()
        if key and key != "command" and not key.startswith(RESULT_PREFIX):
            items[key] = value.strip()
    return items


def load_config(path: Optional[str] = None, overrides: Optional[Mapping[str, str]] = None) -> RunConfig:
    """
    Read a configuration file (optional) and apply command-line overrides on top.

    A result file written by the command line is accepted too: its header block
    carries every setting of the run that produced it.

    Raises:
        ConfigError: unreadable file, unknown key or invalid value.
    """
    items: Dict[str, str] = {}
    if path:
        try:
            with open(path, "r", encoding="utf-8") as f:
                text = f.read()
            items.update(header_items(text) if text.startswith(HEADER_MARK) else read_config_text(text))
        except OSError as exc:
            raise ConfigError(f"cannot read configuration file: {exc}", "config") from exc
        logger.info("configuration read from %s (%d keys)", path, len(items))
    for key, value in (overrides or {}).items():
        if value is not None:
            items[key] = str(value)
    return parse_items(items)
