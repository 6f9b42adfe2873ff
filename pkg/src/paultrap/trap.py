"""Paul-trap drive and its reduction to time-dependent couplings.

The trap potential is g(t)(x^2 + y^2) + g3(t) z^2 with

    g(t)  = +e V(t) / (2 r0^2),    g3(t) = -e V(t) / r0^2,
    V(t)  = Vdc - Vac cos(omega (t - t0)).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError

TRAP_KEYS = ("e", "r0", "vdc", "vac", "omega", "t0")


@dataclass(frozen=True)
class TrapConfig:
    e: float
    r0: float
    vdc: float
    vac: float
    omega: float
    t0: float = 0.0

    def __post_init__(self):
        for name in TRAP_KEYS:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"trap parameter {name!r} must be a number, got {value!r}")
            if not math.isfinite(value):
                raise ConfigError(f"trap parameter {name!r} must be finite")
            object.__setattr__(self, name, float(value))
        if self.r0 <= 0:
            raise ConfigError("r0 must be positive")
        if self.omega <= 0:
            raise ConfigError("omega must be positive")
        if self.vac < 0:
            raise ConfigError("vac must be non-negative")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @classmethod
    def from_dict(cls, doc: dict) -> "TrapConfig":
        if not isinstance(doc, dict):
            raise ConfigError("trap config must be a JSON object")
        unknown = set(doc) - set(TRAP_KEYS)
        if unknown:
            raise ConfigError(f"unknown trap keys: {sorted(unknown)}")
        missing = [k for k in TRAP_KEYS[:-1] if k not in doc]
        if missing:
            raise ConfigError(f"missing trap keys: {missing}")
        return cls(**{k: doc[k] for k in TRAP_KEYS if k in doc})

    @classmethod
    def from_json(cls, path) -> "TrapConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read trap config {path}: {exc}") from exc
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in TRAP_KEYS}

    @classmethod
    def from_mathieu(cls, a_r: float, q_r: float, e=1.0, r0=1.0, omega=2.0, t0=0.0):
        """Inverse of :func:`mathieu_params` for a given charge, size and drive."""
        scale = r0 * r0 * omega * omega / e
        return cls(e=e, r0=r0, vdc=a_r * scale / 4.0, vac=q_r * scale / 2.0, omega=omega, t0=t0)


@dataclass(frozen=True)
class MathieuParams:
    a_r: float
    q_r: float
    a_z: float
    q_z: float


def drive_voltage(cfg: TrapConfig, t):
    return cfg.vdc - cfg.vac * np.cos(cfg.omega * (np.asarray(t) - cfg.t0))


def coupling(cfg: TrapConfig, t):
    """Return ``(g, g3)`` at time(s) ``t``. Always ``g3 == -2 g``."""
    v = drive_voltage(cfg, t)
    g = cfg.e / (2.0 * cfg.r0**2) * v
    return g, -2.0 * g


def radial_coupling(cfg: TrapConfig):
    return lambda t: coupling(cfg, t)[0]


def axial_coupling(cfg: TrapConfig):
    return lambda t: coupling(cfg, t)[1]


def mathieu_params(cfg: TrapConfig) -> MathieuParams:
    """Standard Mathieu form x'' + (a - 2q cos 2tau) x = 0 with tau = omega (t - t0) / 2."""
    if cfg.omega <= 0:
        raise ConfigError("omega must be positive")
    denom = cfg.r0**2 * cfg.omega**2
    a_r = 4.0 * cfg.e * cfg.vdc / denom
    q_r = 2.0 * cfg.e * cfg.vac / denom
    return MathieuParams(a_r=a_r, q_r=q_r, a_z=-2.0 * a_r, q_z=-2.0 * q_r)
