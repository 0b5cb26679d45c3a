"""Strict JSON run configuration.

Unknown keys are rejected and every violation is reported at once; all
defaults become explicit on serialization, so the manifest never
contains silently defaulted parameters.
"""

import json
from dataclasses import dataclass, fields

from .exceptions import ConfigurationError

TASKS = ("ids", "verify", "tails", "decay", "all")
BC_NAMES = ("N", "Dt", "D")


@dataclass(frozen=True)
class ExperimentConfig:
    d: int
    L: int
    p: float
    task: str = "all"
    realizations: int = 1
    seed: int = 0
    boundary_conditions: tuple = BC_NAMES
    grid_points: int = 512
    grid_refine: int = 40
    tail_mode: str = "analytic"
    tail_window: tuple = (1e-8, 1e-3)
    decay_samples: int = 100000
    decay_radius: int | None = None
    threads: int = 1
    emit_graph: bool = False

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "d": self.d,
            "L": self.L,
            "p": self.p,
            "realizations": self.realizations,
            "seed": self.seed,
            "boundary_conditions": list(self.boundary_conditions),
            "grid_points": self.grid_points,
            "grid_refine": self.grid_refine,
            "tail_mode": self.tail_mode,
            "tail_window": list(self.tail_window),
            "decay_samples": self.decay_samples,
            "decay_radius": self.decay_radius,
            "threads": self.threads,
            "emit_graph": self.emit_graph,
        }


_FIELD_NAMES = {f.name for f in fields(ExperimentConfig)}


def config_from_dict(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigurationError("config must be a JSON object")
    problems = []
    for key in data:
        if key not in _FIELD_NAMES:
            problems.append(f"unknown key: {key!r}")
    for key in ("d", "L", "p"):
        if key not in data:
            problems.append(f"missing required key: {key!r}")
    if problems:
        raise ConfigurationError("; ".join(problems))

    kwargs = dict(data)
    if "boundary_conditions" in kwargs:
        kwargs["boundary_conditions"] = tuple(kwargs["boundary_conditions"])
    if "tail_window" in kwargs:
        kwargs["tail_window"] = tuple(kwargs["tail_window"])
    cfg = ExperimentConfig(**kwargs)

    problems = validate(cfg)
    if problems:
        raise ConfigurationError("; ".join(problems))
    return cfg


def validate(cfg: ExperimentConfig) -> list:
    problems = []
    if not isinstance(cfg.d, int) or not 1 <= cfg.d <= 3:
        problems.append(f"d must be an integer in [1,3], got {cfg.d!r}")
    if not isinstance(cfg.L, int) or cfg.L < 2:
        problems.append(f"L must be an integer >= 2, got {cfg.L!r}")
    if not isinstance(cfg.p, (int, float)) or not 0.0 < cfg.p < 1.0:
        problems.append(f"p must satisfy 0 < p < 1, got {cfg.p!r}")
    if not isinstance(cfg.realizations, int) or cfg.realizations < 1:
        problems.append(f"realizations must be >= 1, got {cfg.realizations!r}")
    if cfg.task not in TASKS:
        problems.append(f"task must be one of {TASKS}, got {cfg.task!r}")
    if not cfg.boundary_conditions or any(
        b not in BC_NAMES for b in cfg.boundary_conditions
    ):
        problems.append(
            f"boundary_conditions must be a nonempty subset of {BC_NAMES}, "
            f"got {cfg.boundary_conditions!r}"
        )
    if not isinstance(cfg.seed, int) or cfg.seed < 0:
        problems.append(f"seed must be a nonnegative integer, got {cfg.seed!r}")
    if cfg.grid_points < 2:
        problems.append(f"grid_points must be >= 2, got {cfg.grid_points!r}")
    if cfg.grid_refine < 0:
        problems.append(f"grid_refine must be >= 0, got {cfg.grid_refine!r}")
    if cfg.tail_mode not in ("analytic", "mc"):
        problems.append(f"tail_mode must be 'analytic' or 'mc', got {cfg.tail_mode!r}")
    if (
        len(cfg.tail_window) != 2
        or not 0.0 < cfg.tail_window[0] < cfg.tail_window[1]
    ):
        problems.append(f"tail_window must be [lo, hi] with 0 < lo < hi, got {cfg.tail_window!r}")
    if cfg.decay_samples < 1:
        problems.append(f"decay_samples must be >= 1, got {cfg.decay_samples!r}")
    if cfg.decay_radius is not None and cfg.decay_radius < 2:
        problems.append(f"decay_radius must be >= 2, got {cfg.decay_radius!r}")
    if cfg.threads < 1:
        problems.append(f"threads must be >= 1, got {cfg.threads!r}")
    return problems


def parse_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"malformed JSON in {path}: {exc}") from exc
    return config_from_dict(data)


def serialize_config(cfg: ExperimentConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2, sort_keys=True)
