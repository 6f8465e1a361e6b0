"""Experiment configuration: JSON schema, validation and spec construction."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import jsonschema

from .gaussian import FgnSpec
from .lattice import WalkSpec
from .mdm import MdmSpec
from .rng import MASK64
from .rwrs import RwrsSpec, ScenerySpec
from .scenery_limit import DeltaSpec

EXPERIMENTS = ("persistence_grid", "mean_max", "sup_delta", "identities", "brute_force")

_WALK = {
    "type": "object",
    "properties": {
        "dimension": {"enum": [1, 2, 3]},
        "kind": {"enum": ["simple", "lazy", "stable"]},
        "hold": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
        "alpha": {"type": "number", "exclusiveMinimum": 1, "maximum": 2},
    },
    "additionalProperties": False,
}

GENERATOR_SCHEMAS = {
    "fgn": {
        "type": "object",
        "properties": {
            "type": {"const": "fgn"},
            "hurst": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        },
        "required": ["type", "hurst"],
        "additionalProperties": False,
    },
    "walk": {
        "type": "object",
        "properties": {"type": {"const": "walk"}, **_WALK["properties"]},
        "required": ["type"],
        "additionalProperties": False,
    },
    "rwrs": {
        "type": "object",
        "properties": {
            "type": {"const": "rwrs"},
            "walk": _WALK,
            "scenery": {
                "type": "object",
                "properties": {
                    "law": {"enum": ["rademacher", "lazy_rademacher", "gaussian",
                                     "bounded_uniform", "symmetric_stable"]},
                    "q": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
                    "beta": {"type": "number", "exclusiveMinimum": 1, "maximum": 2},
                    "scale": {"type": "number", "exclusiveMinimum": 0},
                },
                "additionalProperties": False,
            },
        },
        "required": ["type"],
        "additionalProperties": False,
    },
    "mdm": {
        "type": "object",
        "properties": {
            "type": {"const": "mdm"},
            "p": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        },
        "required": ["type"],
        "additionalProperties": False,
    },
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "persistkit experiment",
    "type": "object",
    "properties": {
        "experiment": {"enum": list(EXPERIMENTS)},
        "generator": {
            "type": "object",
            "properties": {"type": {"enum": list(GENERATOR_SCHEMAS)}},
            "required": ["type"],
        },
        "n_grid": {"type": "array", "items": {"type": "integer", "minimum": 1},
                   "minItems": 1, "uniqueItems": True},
        "trials": {"type": "integer", "minimum": 1},
        "level": {"type": "number"},
        "event": {"enum": ["max", "return"]},
        "seed": {"type": "integer", "minimum": 0, "maximum": MASK64},
        "out": {"type": "string", "minLength": 1},
        "workers": {"type": "integer", "minimum": 1},
        "log_correction": {"type": "boolean"},
        "plot": {"type": "boolean"},
        "method": {"enum": ["brute_force", "monte_carlo"]},
        "sup_delta": {
            "type": "object",
            "properties": {
                "driving_alpha": {"type": "number", "exclusiveMinimum": 1, "maximum": 2},
                "inner_steps": {"type": "integer", "minimum": 256},
                "extrapolate": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
    },
    "required": ["experiment", "seed"],
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"experiment": {"enum": ["persistence_grid", "mean_max",
                                                       "identities", "brute_force"]}}},
         "then": {"required": ["generator", "n_grid"]}},
        {"if": {"properties": {"experiment": {"enum": ["persistence_grid", "mean_max",
                                                       "sup_delta"]}}},
         "then": {"required": ["trials"]}},
    ],
}


class ConfigError(ValueError):
    """Invalid configuration; ``field`` is a dotted path into the config."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    seed: int
    generator: dict = field(default_factory=dict)
    n_grid: tuple[int, ...] = ()
    trials: int | None = None
    level: float = -1.0
    event: str = "max"
    out: str = "results"
    workers: int = 1
    log_correction: bool = False
    plot: bool = False
    method: str = "brute_force"
    sup_delta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["n_grid"] = list(self.n_grid)
        return d


def _path(error: jsonschema.ValidationError, prefix: str = "") -> str:
    parts = [prefix] if prefix else []
    parts += [str(p) for p in error.absolute_path]
    if error.validator == "required":
        missing = error.message.split("'")[1]
        parts.append(missing)
    elif error.validator == "additionalProperties" and "'" in error.message:
        parts.append(error.message.split("'")[1])
    return ".".join(parts) or "(root)"


def _check(schema: dict, data, prefix: str = "") -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise ConfigError(_path(e, prefix), e.message)


def build_generator(gen: dict):
    """Turn a validated generator mapping into a process spec."""
    kind = gen["type"]
    try:
        if kind == "fgn":
            return FgnSpec(gen["hurst"])
        if kind == "walk":
            return WalkSpec(**{k: v for k, v in gen.items() if k != "type"})
        if kind == "rwrs":
            return RwrsSpec(WalkSpec(**gen.get("walk", {})), ScenerySpec(**gen.get("scenery", {})))
        return MdmSpec(gen.get("p", 1.0 / 3.0))
    except ValueError as exc:
        raise ConfigError("generator", str(exc)) from None


def build_delta(cfg: ExperimentConfig) -> DeltaSpec:
    opts = {k: v for k, v in cfg.sup_delta.items() if k != "extrapolate"}
    try:
        return DeltaSpec(trials=cfg.trials, **opts)
    except ValueError as exc:
        raise ConfigError("sup_delta", str(exc)) from None


def validate(data: dict) -> ExperimentConfig:
    """Schema and semantic validation; raises ``ConfigError`` naming the offending field."""
    _check(CONFIG_SCHEMA, data)
    gen = data.get("generator")
    if gen is not None:
        _check(GENERATOR_SCHEMAS[gen["type"]], gen, "generator")
        build_generator(gen)
    cfg = ExperimentConfig(**{**data, "n_grid": tuple(data.get("n_grid", ()))})
    if cfg.experiment == "sup_delta":
        build_delta(cfg)
    if cfg.experiment == "brute_force" and max(cfg.n_grid) > 8:
        raise ConfigError("n_grid", "brute force enumeration needs n <= 8")
    if cfg.experiment == "persistence_grid" and cfg.event == "return" and gen["type"] == "fgn":
        raise ConfigError("event", "return times need an integer-valued generator")
    return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    if not isinstance(data, dict):
        raise ConfigError("(root)", "config must be a JSON object")
    return validate(data)
