"""Per-subcommand experiment configuration.

A config file is a flat JSON object::

    {"schema_version": "1", "command": "reconstruct", "m": 8, "n": 4, ...}

Unknown keys are rejected.  ``ExperimentConfig.from_dict(cfg.to_dict())``
reproduces ``cfg`` exactly.
"""

from dataclasses import asdict, dataclass, field, fields
import json
import types
import typing

from .errors import InvalidArgumentError

SCHEMA_VERSION = "1"


@dataclass
class MasksExportConfig:
    m: int = 8
    ordering: str = "natural"
    kind: str = "h"
    screen: int | None = None
    out: str = "masks"


@dataclass
class StateInfoConfig:
    m: int = 8
    profile: str = "uniform"
    n: int | None = None
    waist: float | None = None
    placement: str = "auto"


@dataclass
class GroverRunConfig:
    m: int = 8
    profile: str = "uniform"
    n: int | None = None
    waist: float | None = None
    placement: str = "auto"
    object: str = "builtin:point"
    iterations: str = "1"
    out: str = "probs.csv"


@dataclass
class ReconstructConfig:
    m: int = 8
    profile: str = "uniform"
    n: int | None = None
    waist: float | None = None
    placement: str = "auto"
    object: str = "builtin:point"
    convention: str = "paper"
    support_threshold: float = 0.05
    out_prefix: str = "recon"


@dataclass
class SweepOverlapConfig:
    profile: str = "uniform"
    m_list: list[int] = field(default_factory=lambda: [8, 16, 32])
    n_list: list[int] | None = None
    waist_list: list[float] | None = None
    placement: str = "centered"
    out: str = "heatmap.csv"


@dataclass
class SimulateCountsConfig:
    probs: str = "probs.csv"
    pair_rate: float = 5.0e4
    singles_a: float = 1.0e5
    singles_b: float = 1.0e5
    gate: float = 3e-9
    integration: float = 2.0
    seed: int = 0
    out: str = "counts.csv"


@dataclass
class FiguresConfig:
    preset: str = "fig2g"
    seed: int = 0


COMMANDS = {
    "masks export": MasksExportConfig,
    "state info": StateInfoConfig,
    "grover run": GroverRunConfig,
    "reconstruct": ReconstructConfig,
    "sweep-overlap": SweepOverlapConfig,
    "simulate-counts": SimulateCountsConfig,
    "figures": FiguresConfig,
}


def _coerce(name, value, tp):
    origin = typing.get_origin(tp)
    args = typing.get_args(tp)
    if origin in (typing.Union, types.UnionType):
        if value is None and type(None) in args:
            return None
        inner = [a for a in args if a is not type(None)]
        return _coerce(name, value, inner[0])
    if origin is list:
        if not isinstance(value, list):
            raise InvalidArgumentError(f"config key {name!r} must be a list")
        return [_coerce(name, v, args[0]) for v in value]
    if tp is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise InvalidArgumentError(f"config key {name!r} must be an integer")
        return value
    if tp is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InvalidArgumentError(f"config key {name!r} must be a number")
        return float(value)
    if tp is str:
        if not isinstance(value, str):
            raise InvalidArgumentError(f"config key {name!r} must be a string")
        return value
    raise TypeError(f"unsupported config type {tp!r}")  # pragma: no cover


def build_params(cls, values):
    """Instantiate ``cls`` from a mapping, rejecting unknown keys."""
    hints = typing.get_type_hints(cls)
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise InvalidArgumentError(f"unknown config key(s): {', '.join(unknown)}")
    return cls(**{k: _coerce(k, v, hints[k]) for k, v in values.items()})


@dataclass
class ExperimentConfig:
    command: str
    params: object
    schema_version: str = SCHEMA_VERSION

    def to_dict(self):
        return {"schema_version": self.schema_version, "command": self.command,
                **asdict(self.params)}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise InvalidArgumentError("config must be a JSON object")
        data = dict(data)
        version = data.pop("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise InvalidArgumentError(f"unsupported schema_version {version!r}")
        command = data.pop("command", None)
        if command not in COMMANDS:
            raise InvalidArgumentError(f"config 'command' must be one of {sorted(COMMANDS)}")
        return cls(command, build_params(COMMANDS[command], data), version)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidArgumentError(f"config is not valid JSON: {exc}") from None
        return cls.from_dict(data)
