"""Cartesian number states X_nx(x,t) Y_ny(y,t) Z_nz(z,t).

With scaled coordinate s = z / sqrt(phi3(t)) and theta3 the unwrapped phase of xi3,

    Z_n = (2^n n!)^(-1/2) (pi phi3)^(-1/4) exp(-i (n + 1/2) theta3)
          H_n(s) exp(-(s^2 / 2) (1 - i phi3_dot / 2)).

The exp(-i (n + 1/2) theta3) factor is the continuous branch of
(conj(xi3) / xi3)^((n + 1/2) / 2).  X and Y are the same function of the
radial mode.  Every function takes array coordinates and a scalar time; mode
data are interpolated once per call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .modes import ModeSolution, mode_at
from .special import hermite, log_factorial

N_MAX = 60


@dataclass(frozen=True)
class CartesianQN:
    n_x: int
    n_y: int
    n_z: int

    def __post_init__(self):
        for name in ("n_x", "n_y", "n_z"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ConfigError(f"{name} must be a non-negative integer, got {v!r}")
            object.__setattr__(self, name, int(v))


@dataclass(frozen=True)
class ScaledCoords:
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    st: float


def scale_coords(modes, point) -> ScaledCoords:
    """Map (x, y, z, t) to (x/sqrt(phi), y/sqrt(phi), z/sqrt(phi3), t)."""
    radial, axial = modes
    x, y, z, t = point
    phi = mode_at(radial, t)[2]
    phi3 = mode_at(axial, t)[2]
    return ScaledCoords(np.asarray(x) / math.sqrt(phi), np.asarray(y) / math.sqrt(phi),
                        np.asarray(z) / math.sqrt(phi3), float(t))


def _gaussian(s, phi_dot):
    return np.exp(-0.5 * s * s * (1.0 - 0.5j * phi_dot))


def z_extremal(mode: ModeSolution, z, t):
    _, _, phi, phi_dot, theta = mode_at(mode, t)
    s = np.asarray(z, dtype=float) / math.sqrt(phi)
    return (math.pi * phi) ** -0.25 * np.exp(-0.5j * theta) * _gaussian(s, phi_dot)


def z_extremal_naive(mode: ModeSolution, z, t):
    """Extremal Gaussian with only the modulus normalization (no xi phase).

    Normalized at every t but not a solution of the Schrodinger equation in
    general; kept as a negative control.
    """
    _, _, phi, phi_dot, _ = mode_at(mode, t)
    s = np.asarray(z, dtype=float) / math.sqrt(phi)
    return (math.pi * phi) ** -0.25 * _gaussian(s, phi_dot)


def _number_state(mode, n, coord, t, n_max):
    if int(n) != n or n < 0:
        raise ConfigError(f"quantum number must be a non-negative integer, got {n!r}")
    n = int(n)
    if n > n_max:
        raise ConfigError(f"n={n} exceeds n_max={n_max}")
    _, _, phi, phi_dot, theta = mode_at(mode, t)
    s = np.asarray(coord, dtype=float) / math.sqrt(phi)
    log_norm = -0.5 * (n * math.log(2.0) + log_factorial(n)) - 0.25 * math.log(math.pi * phi)
    modulus = np.exp(log_norm - 0.5 * s * s) * hermite(n, s)
    return modulus * np.exp(0.25j * phi_dot * s * s - 1j * (n + 0.5) * theta)


def z_state(mode: ModeSolution, n: int, z, t, n_max: int = N_MAX):
    return _number_state(mode, n, z, t, n_max)


def xy_state(mode: ModeSolution, n: int, coord, t, n_max: int = N_MAX):
    """X_n or Y_n: the axial formula evaluated with the radial mode."""
    return _number_state(mode, n, coord, t, n_max)


def psi_cartesian(modes, qn: CartesianQN, point):
    radial, axial = modes
    x, y, z, t = point
    return (xy_state(radial, qn.n_x, x, t) * xy_state(radial, qn.n_y, y, t)
            * z_state(axial, qn.n_z, z, t))
