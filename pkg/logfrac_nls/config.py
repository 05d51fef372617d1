"""Experiment configuration: built-in defaults, JSON config files and .env settings."""
import json
import os
from copy import deepcopy
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from .fractional_ops import FractionalOrder, MomentOrder
from .initial_data import FAMILIES
from .log_nonlinearity import CouplingConstant, RegularizationLevel
from .sim_types import DatumSpec, ExperimentConfig, GridSpec, SimParams

load_dotenv(override=False)

DEFAULT_OUTPUT_DIR = "output"
DEFAULT_SEED = 20240607

TOP_LEVEL_KEYS = {"name", "grid", "params", "initial_datum", "sweeps", "output_dir", "seed", "slack"}
GRID_KEYS = {"d", "n", "L"}
PARAM_KEYS = {"s", "lam", "eps", "dt", "T", "scheme", "sample_every"}
SWEEP_KEYS = {"eps", "s", "alpha", "R", "lam"}
SLACK_KEYS = {"bound", "moment", "refinement"}


class ConfigError(Exception):
    """Raised when a configuration file or override is invalid."""
    pass


def get_output_dir() -> Path:
    return Path(os.getenv("LOGFRAC_OUTPUT_DIR", DEFAULT_OUTPUT_DIR))


def get_seed() -> int:
    raw = os.getenv("LOGFRAC_SEED")
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"LOGFRAC_SEED must be an integer, got '{raw}'")


def debug_enabled() -> bool:
    return os.getenv("LOGFRAC_DEBUG", "0") == "1"


def _gaussian(width: float = 1.0, center: float = 0.0, phase_k: float = 0.0) -> Dict[str, Any]:
    return {"family": "gaussian", "width": width, "center": center, "phase_k": phase_k}


# Built-in defaults per experiment; a config file overrides them key by key.
DEFAULT_CONFIGS: Dict[str, Dict[str, Any]] = {
    "conservation": {
        "grid": {"d": 1, "n": 256, "L": 32.0},
        "params": {"s": 0.5, "lam": -1.0, "eps": 0.1, "dt": 1e-3, "T": 1.0, "scheme": "strang", "sample_every": 10},
        "initial_datum": _gaussian(),
        "sweeps": {"lam": [-1.0, 1.0], "eps": [0.1, 0.03, 0.01, 0.003, 0.001]},
    },
    "growth_bounds": {
        "grid": {"d": 1, "n": 256, "L": 32.0},
        "params": {"s": 0.5, "lam": -1.0, "eps": 0.1, "dt": 1e-3, "T": 1.0, "scheme": "strang", "sample_every": 10},
        "initial_datum": _gaussian(),
        "sweeps": {"s": [0.3, 0.5, 0.7], "lam": [-1.0, 1.0], "eps": [0.0, 0.1]},
    },
    "eps_cauchy": {
        "grid": {"d": 1, "n": 256, "L": 32.0},
        "params": {"s": 0.5, "lam": -1.0, "eps": 0.1, "dt": 1e-3, "T": 1.0, "scheme": "strang", "sample_every": 10},
        "initial_datum": _gaussian(),
        "sweeps": {"eps": [1e-1, 3e-2, 1e-2, 3e-3, 1e-3], "R": [4.0, 8.0]},
    },
    "weighted_moment": {
        "grid": {"d": 1, "n": 256, "L": 32.0},
        "params": {"s": 0.7, "lam": -1.0, "eps": 0.1, "dt": 1e-3, "T": 1.0, "scheme": "strang", "sample_every": 10},
        "initial_datum": _gaussian(),
        "sweeps": {"s": [0.7, 0.4], "alpha": [1.0, 0.5], "lam": [-1.0, 1.0]},
    },
    "commutator_scan": {
        "grid": {"d": 1, "n": 256, "L": 32.0},
        "params": {"s": 0.5, "lam": -1.0, "eps": 0.1, "dt": 1e-3, "T": 1.0, "scheme": "strang", "sample_every": 10},
        "initial_datum": {"family": "random_bandlimited", "band": 3.0, "seed": 0},
        "sweeps": {"s": [0.3, 0.5, 0.7, 0.9], "alpha": [0.25, 0.5, 0.75, 1.0]},
    },
    "gausson": {
        "grid": {"d": 1, "n": 512, "L": 24.0},
        "params": {"s": 1.0, "lam": -1.0, "eps": 0.0, "dt": 1e-3, "T": 1.0, "scheme": "strang", "sample_every": 100},
        "initial_datum": {"family": "gausson"},
        "sweeps": {},
    },
    "operator_crossval": {
        "grid": {"d": 1, "n": 256, "L": 16.0},
        "params": {"s": 0.5, "lam": -1.0, "eps": 0.1, "dt": 1e-3, "T": 1.0, "scheme": "strang", "sample_every": 10},
        "initial_datum": _gaussian(),
        "sweeps": {"s": [0.5]},
    },
    "inequality_suite": {
        "grid": {"d": 1, "n": 256, "L": 32.0},
        "params": {"s": 0.5, "lam": -1.0, "eps": 0.1, "dt": 1e-3, "T": 1.0, "scheme": "strang", "sample_every": 10},
        "initial_datum": _gaussian(),
        "sweeps": {},
    },
    "l2_stability": {
        "grid": {"d": 1, "n": 256, "L": 32.0},
        "params": {"s": 0.5, "lam": -1.0, "eps": 0.1, "dt": 1e-3, "T": 1.0, "scheme": "strang", "sample_every": 10},
        "initial_datum": _gaussian(),
        "sweeps": {"lam": [-1.0, 1.0], "eps": [0.1, 0.01]},
    },
}


def load_config_file(path: Path) -> Dict[str, Any]:
    """Read a JSON experiment config. Key validation happens in build_config."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object")
    return data


def _check_keys(section: str, data: Dict[str, Any], allowed) -> None:
    if not isinstance(data, dict):
        raise ConfigError(f"'{section}' must be an object")
    unknown = set(data) - set(allowed)
    if unknown:
        raise ConfigError(f"Unknown keys in '{section}': {sorted(unknown)}")


def _merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = deepcopy(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict) and key != "initial_datum":
            merged[key] = {**merged[key], **value}
        else:
            merged[key] = deepcopy(value)
    return merged


def _validate_sweeps(sweeps: Dict[str, Any]) -> Dict[str, list]:
    _check_keys("sweeps", sweeps, SWEEP_KEYS)
    checks = {
        "eps": RegularizationLevel,
        "s": FractionalOrder,
        "alpha": MomentOrder,
        "lam": CouplingConstant,
    }
    out = {}
    for key, values in sweeps.items():
        if not isinstance(values, (list, tuple)) or not values:
            raise ConfigError(f"Sweep '{key}' must be a non-empty list")
        try:
            values = [float(v) for v in values]
            for v in values:
                if key == "R":
                    if not v > 0:
                        raise ValueError(f"R must be positive, got {v}")
                else:
                    checks[key](v)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid value in sweep '{key}': {e}")
        out[key] = values
    return out


def build_config(
    name: str,
    overrides: Optional[Dict[str, Any]] = None,
    output_dir: Optional[Path] = None,
    seed: Optional[int] = None,
) -> ExperimentConfig:
    """
    Resolve the config for one experiment.

    Precedence, highest first: explicit arguments (CLI flags), overrides (config
    file), .env settings, built-in defaults.
    """
    if name not in DEFAULT_CONFIGS:
        raise ConfigError(f"Unknown experiment '{name}', expected one of {sorted(DEFAULT_CONFIGS)}")
    overrides = dict(overrides or {})
    _check_keys("config", overrides, TOP_LEVEL_KEYS)
    if overrides.get("name", name) != name:
        raise ConfigError(f"Config names experiment '{overrides['name']}', not '{name}'")

    data = _merge(DEFAULT_CONFIGS[name], overrides)
    _check_keys("grid", data["grid"], GRID_KEYS)
    _check_keys("params", data["params"], PARAM_KEYS)
    _check_keys("slack", data.get("slack", {}), SLACK_KEYS)

    datum = dict(data["initial_datum"])
    family = datum.pop("family", None)
    if family not in FAMILIES:
        raise ConfigError(f"Unresolvable initial datum family '{family}', expected one of {sorted(FAMILIES)}")
    _check_keys(f"initial_datum ({family})", datum, FAMILIES[family])

    try:
        grid = GridSpec(**data["grid"])
        grid.build()
        params = SimParams(**data["params"])
    except Exception as e:
        raise ConfigError(f"Invalid grid or params for '{name}': {e}")

    slack = {"bound": 0.05, "moment": 0.10, "refinement": 0.20}
    slack.update({k: float(v) for k, v in data.get("slack", {}).items()})

    if output_dir is None:
        output_dir = data.get("output_dir") or get_output_dir()
    if seed is None:
        seed = data.get("seed")
        if seed is None:
            seed = get_seed()

    return ExperimentConfig(
        name=name,
        grid=grid,
        params=params,
        initial_datum=DatumSpec(family=family, params=datum),
        sweeps=_validate_sweeps(data.get("sweeps", {})),
        output_dir=Path(output_dir),
        seed=int(seed),
        slack=slack,
    )
