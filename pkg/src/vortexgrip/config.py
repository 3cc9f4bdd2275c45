"""Toolkit configuration: constants, grids, hyperparameters, seeds.

Configs serialize to a flat ``key = value`` text file with dotted key
groups (see docs/FORMATS.md).  Missing keys take the documented defaults,
unknown keys are rejected so typos cannot silently change a run.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from .aero import AeroConstants, AirModel
from .errors import ParseError


@dataclass(frozen=True)
class ProtocolConstants:
    """Experiment-protocol kinematics and contact model."""

    tissue_stiffness_n_per_mm: float = 0.5
    contact_preload_n: float = 2.0
    ascent_velocity_m_s: float = 0.01
    ascent_acceleration_m_s2: float = 0.01
    sample_interval_s: float = 0.005
    noise_sd: float = 0.05


@dataclass(frozen=True)
class SurrogateParams:
    """Default hyperparameters for the lift surrogate ensemble."""

    forest_n_trees: int = 200
    forest_max_depth: int = 12
    forest_feature_fraction: float = 0.75
    forest_bootstrap: bool = True
    boost_n_stages: int = 100
    boost_max_depth: int = 6
    boost_loss: str = "linear"
    min_samples_leaf: int = 1


@dataclass(frozen=True)
class GridSettings:
    n_radial: int = 64
    n_angular: int = 128
    curve_heights: int = 96
    curve_max_height_mm: float = 10.0


@dataclass(frozen=True)
class Config:
    air: AirModel = field(default_factory=AirModel)
    aero: AeroConstants = field(default_factory=AeroConstants)
    protocol: ProtocolConstants = field(default_factory=ProtocolConstants)
    surrogate: SurrogateParams = field(default_factory=SurrogateParams)
    grid: GridSettings = field(default_factory=GridSettings)
    default_seed: int = 20240

    def replace_aero(self, aero: AeroConstants) -> "Config":
        return dataclasses.replace(self, aero=aero)


_GROUPS = {
    "air": (AirModel, "air"),
    "aero": (AeroConstants, "aero"),
    "protocol": (ProtocolConstants, "protocol"),
    "surrogate": (SurrogateParams, "surrogate"),
    "grid": (GridSettings, "grid"),
}


def parse_key_values(text: str) -> dict[str, str]:
    """Parse the repo's ``key = value`` config syntax.

    Blank lines and ``#`` comments are ignored; keys must be unique.
    """
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ParseError(f"empty key or value in {raw!r}", lineno)
        if key in out:
            raise ParseError(f"duplicate key {key!r}", lineno)
        out[key] = value
    return out


def format_key_values(pairs: dict[str, object], header: str = "") -> str:
    lines = [f"# {header}"] if header else []
    lines += [f"{key} = {_format_value(value)}" for key, value in pairs.items()]
    return "\n".join(lines) + "\n"


def _format_value(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _coerce(value: str, kind: type):
    if kind is bool:
        if value.lower() in ("true", "1", "yes", "on"):
            return True
        if value.lower() in ("false", "0", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {value!r}")
    return kind(value)


def config_to_pairs(config: Config) -> dict[str, object]:
    pairs: dict[str, object] = {}
    for prefix, (_, attr) in _GROUPS.items():
        group = getattr(config, attr)
        for f in dataclasses.fields(group):
            pairs[f"{prefix}.{f.name}"] = getattr(group, f.name)
    pairs["default_seed"] = config.default_seed
    return pairs


def config_from_pairs(pairs: dict[str, str],
                      base: Config | None = None) -> Config:
    base = base or Config()
    updates: dict[str, dict[str, object]] = {name: {} for name in _GROUPS}
    default_seed = base.default_seed
    field_types = {
        prefix: {f.name: f.type for f in dataclasses.fields(cls)}
        for prefix, (cls, _) in _GROUPS.items()
    }
    for key, raw in pairs.items():
        if key == "default_seed":
            default_seed = int(raw)
            continue
        if "." not in key:
            raise ParseError(f"unknown config key {key!r}")
        prefix, name = key.split(".", 1)
        if prefix not in _GROUPS or name not in field_types[prefix]:
            raise ParseError(f"unknown config key {key!r}")
        type_name = field_types[prefix][name]
        kind = {"float": float, "int": int, "bool": bool, "str": str}.get(
            str(type_name), float)
        try:
            updates[prefix][name] = _coerce(raw, kind)
        except ValueError as exc:
            raise ParseError(f"bad value for {key!r}: {exc}") from exc
    groups = {}
    for prefix, (cls, attr) in _GROUPS.items():
        current = getattr(base, attr)
        groups[attr] = dataclasses.replace(current, **updates[prefix]) \
            if updates[prefix] else current
    return Config(default_seed=default_seed, **groups)


def write_config(config: Config, path: str | Path) -> None:
    Path(path).write_text(
        format_key_values(config_to_pairs(config), header="vortexgrip config"),
        encoding="utf-8", newline="\n")


def read_config(path: str | Path, base: Config | None = None) -> Config:
    text = Path(path).read_text(encoding="utf-8")
    return config_from_pairs(parse_key_values(text), base=base)


def load_config(path: str | None) -> Config:
    """Config from an explicit path, or defaults when none is given."""
    if path:
        return read_config(path)
    return Config()
