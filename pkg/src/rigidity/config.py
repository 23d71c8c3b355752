"""Central numerical defaults.

Resolution order: built-in defaults, then the JSON file named by the
``RIGIDITY_CONFIG`` environment variable, then an explicit ``--config`` file.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path

ENV_VAR = "RIGIDITY_CONFIG"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    grid_2d: int = 64          # points per axis for d <= 2
    grid_3d: int = 16          # points per axis for d = 3
    grid_high: int = 8         # points per axis for d >= 4
    tol: float = 1e-9          # relative rank threshold
    symmetry_tol: float = 1e-10
    loop_resolution: int = 256
    verify_grid: int = 32

    def grid_for(self, d: int) -> int:
        if d <= 2:
            return self.grid_2d
        return self.grid_3d if d == 3 else self.grid_high

    def updated(self, obj: dict) -> "Config":
        names = {f.name: f for f in dataclasses.fields(self)}
        unknown = sorted(set(obj) - set(names))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        vals = {}
        for k, v in obj.items():
            typ = int if names[k].type in ("int", int) else float
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"config key {k} must be a number")
            vals[k] = typ(v)
        cfg = dataclasses.replace(self, **vals)
        if cfg.tol <= 0 or cfg.symmetry_tol <= 0:
            raise ConfigError("tolerances must be positive")
        if min(cfg.grid_2d, cfg.grid_3d, cfg.grid_high) < 2:
            raise ConfigError("grids need at least 2 points per axis")
        return cfg


def _read(path) -> dict:
    p = Path(path)
    try:
        obj = json.loads(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {p}: invalid JSON at line {exc.lineno}") from None
    if not isinstance(obj, dict):
        raise ConfigError(f"config {p} must hold a JSON object")
    return obj


def load_config(path=None, env=None) -> Config:
    env = os.environ if env is None else env
    cfg = Config()
    if env.get(ENV_VAR):
        cfg = cfg.updated(_read(env[ENV_VAR]))
    if path:
        cfg = cfg.updated(_read(path))
    return cfg
