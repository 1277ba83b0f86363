"""Run configuration: constants, tolerances and resolutions, loaded from JSON with strict key checking."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .bounds import BoundConstants
from .covering import A_THRESHOLD, B_THRESHOLD, PrimedConstants, UncertaintyConstants, derive_primed
from .errors import ConfigError, ExclusionKitError

THREADS_ENV = "EXCLUSIONKIT_THREADS"


@dataclass(frozen=True)
class Tolerances:
    root: float = 1e-12
    oracle_relative: float = 1e-4
    allowance: float = 0.05


@dataclass(frozen=True)
class Resolutions:
    richardson_points: tuple[int, ...] = (200, 400, 800)
    n2_points: int = 128
    n3_points: int = 40


@dataclass(frozen=True)
class Thresholds:
    """Covering thresholds; changing them leaves the proven setting (expert use only)."""

    a: float = A_THRESHOLD
    b: float = B_THRESHOLD


@dataclass(frozen=True)
class Config:
    uncertainty: UncertaintyConstants = field(default_factory=UncertaintyConstants)
    bounds: BoundConstants = field(default_factory=BoundConstants)
    primed: PrimedConstants | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    resolutions: Resolutions = field(default_factory=Resolutions)
    thresholds: Thresholds = field(default_factory=Thresholds)
    output_dir: str = "."
    seed: int = 20240601

    @property
    def primed_constants(self) -> PrimedConstants:
        return self.primed or derive_primed(self.uncertainty, self.bounds.c_anyon)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["primed"] = dataclasses.asdict(self.primed_constants)
        d["resolutions"]["richardson_points"] = list(self.resolutions.richardson_points)
        return d

    def hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def with_tol(self, tol: float | None) -> "Config":
        if tol is None:
            return self
        if not 0 < tol < 1:
            raise ConfigError(f"--tol must lie in (0, 1), got {tol}")
        return dataclasses.replace(self, tolerances=dataclasses.replace(self.tolerances, root=tol))


_SECTIONS = {
    "uncertainty": UncertaintyConstants,
    "bounds": BoundConstants,
    "primed": PrimedConstants,
    "tolerances": Tolerances,
    "resolutions": Resolutions,
    "thresholds": Thresholds,
}
_SCALARS = {"output_dir": str, "seed": int}


def _build(cls, data, where: str):
    if not isinstance(data, dict):
        raise ConfigError(f"section {where!r} must be an object")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"unknown key(s) in {where!r}: {sorted(unknown)}; allowed: {sorted(names)}")
    if cls is Resolutions and "richardson_points" in data:
        data = {**data, "richardson_points": tuple(data["richardson_points"])}
    try:
        return cls(**data)
    except ExclusionKitError as exc:
        raise ConfigError(f"invalid {where!r}: {exc}") from exc
    except TypeError as exc:
        if cls is PrimedConstants:
            raise ConfigError(f"'primed' needs all of c1p, c2p, c3p: {exc}") from exc
        raise ConfigError(f"invalid {where!r}: {exc}") from exc


def config_from_dict(data: dict) -> Config:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = set(data) - set(_SECTIONS) - set(_SCALARS)
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {sorted(unknown)}")
    kwargs = {}
    for key, cls in _SECTIONS.items():
        if key in data:
            kwargs[key] = _build(cls, data[key], key)
    for key, typ in _SCALARS.items():
        if key in data:
            if not isinstance(data[key], typ):
                raise ConfigError(f"{key!r} must be of type {typ.__name__}")
            kwargs[key] = data[key]
    cfg = Config(**kwargs)
    r = cfg.resolutions
    if any(int(p) != p or p < 16 for p in r.richardson_points) or len(r.richardson_points) < 2:
        raise ConfigError("richardson_points needs at least two integers >= 16")
    if r.n3_points > 60:
        raise ConfigError(f"n3_points is capped at 60 per axis, got {r.n3_points}")
    if not 0 < cfg.thresholds.a < cfg.thresholds.b:
        raise ConfigError("thresholds need 0 < a < b")
    return cfg


def load_config(path: str | os.PathLike | None) -> Config:
    if path is None:
        return Config()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data)


def thread_cap() -> int | None:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return None
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n
