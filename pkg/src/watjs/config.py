"""Runtime configuration with flags > env > config file > defaults."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

try:
    import tomllib  # Python 3.11+
except ImportError:  # pragma: no cover - fallback for 3.10
    import tomli as tomllib  # type: ignore[no-redef]

ENV_PREFIX = "WATCHAT_"


@dataclass(frozen=True)
class Config:
    kappa: int = 3
    max_candidates: int = 8
    q: float = 0.1
    q_overrides: dict[int, float] = field(default_factory=dict)
    host: str = "127.0.0.1"
    port: int = 8347
    diag_budget: int = 7
    kappa_v: int = 3
    json_output: bool = False


_FIELD_TYPES: dict[str, type] = {
    "kappa": int,
    "max_candidates": int,
    "q": float,
    "host": str,
    "port": int,
    "diag_budget": int,
    "kappa_v": int,
}


def _coerce(name: str, raw: Any) -> Any:
    if name == "q_overrides":
        if not isinstance(raw, dict):
            raise ValueError("q_overrides must map misconception id to probability")
        return {int(k): float(v) for k, v in raw.items()}
    want = _FIELD_TYPES[name]
    return want(raw)


def load_file(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    data = path.read_bytes()
    if path.suffix == ".toml":
        raw = tomllib.loads(data.decode("utf-8"))
    else:
        raw = json.loads(data.decode("utf-8"))
    if not isinstance(raw, dict):
        raise ValueError(f"config file {path} must hold a table/object")
    return raw


def from_sources(
    cli: Mapping[str, Any] | None = None,
    env: Mapping[str, str] | None = None,
    config_path: str | Path | None = None,
) -> Config:
    """Resolve configuration; later sources are overridden by earlier ones."""
    env = os.environ if env is None else env
    values: dict[str, Any] = {}
    if config_path is not None:
        for key, raw in load_file(config_path).items():
            if key in _FIELD_TYPES or key == "q_overrides":
                values[key] = _coerce(key, raw)
            else:
                raise ValueError(f"unknown config key: {key}")
    for key in _FIELD_TYPES:
        raw = env.get(ENV_PREFIX + key.upper())
        if raw is not None:
            values[key] = _coerce(key, raw)
    if cli:
        for key, raw in cli.items():
            if raw is not None:
                values[key] = _coerce(key, raw) if key in _FIELD_TYPES else raw
    return Config(**values)
