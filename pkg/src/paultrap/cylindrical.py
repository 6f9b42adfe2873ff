"""Polar states Omega_{n,m}(r, theta, t) and the cylindrical labels (n_r, l_z).

(n, m) count the two circular quanta; n_r = n + m and l_z = m - n.  Only pairs
with n_r - |l_z| even and non-negative are reachable.  With rho = r / sqrt(phi),
k = min(n, m) and alpha = |n - m|,

    Omega_{n,m} = e^{i(m-n)theta} / sqrt(2 pi) * (-1)^k k! / sqrt(n! m!) * sqrt(2 / phi)
                  * e^{-i(n+m+1) theta_xi} rho^alpha L_k^(alpha)(rho^2)
                  * exp(-(rho^2 / 2)(1 - i phi_dot / 2)).

The (-1)^k sign differs from the textbook 2-D oscillator convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cartesian import z_state
from .errors import ConfigError, SelectionRuleError
from .modes import ModeSolution, mode_at
from .special import glaguerre, log_factorial

SELECTION_RULE_MSG = "selection rule: n_r and l_z parity"


def _check_nonneg_int(name, v):
    if isinstance(v, bool) or int(v) != v or v < 0:
        raise ConfigError(f"{name} must be a non-negative integer, got {v!r}")
    return int(v)


@dataclass(frozen=True)
class PolarQN:
    n: int
    m: int

    def __post_init__(self):
        object.__setattr__(self, "n", _check_nonneg_int("n", self.n))
        object.__setattr__(self, "m", _check_nonneg_int("m", self.m))


@dataclass(frozen=True)
class CylindricalQN:
    n_r: int
    l_z: int

    def __post_init__(self):
        n_r = _check_nonneg_int("n_r", self.n_r)
        if int(self.l_z) != self.l_z:
            raise ConfigError(f"l_z must be an integer, got {self.l_z!r}")
        l_z = int(self.l_z)
        if abs(l_z) > n_r or (n_r - abs(l_z)) % 2:
            raise SelectionRuleError(f"{SELECTION_RULE_MSG} (n_r={n_r}, l_z={l_z})")
        object.__setattr__(self, "n_r", n_r)
        object.__setattr__(self, "l_z", l_z)

    @property
    def l(self) -> int:
        return abs(self.l_z)

    @property
    def k(self) -> int:
        return (self.n_r - self.l) // 2


def polar_to_cyl(qn: PolarQN) -> CylindricalQN:
    return CylindricalQN(n_r=qn.n + qn.m, l_z=qn.m - qn.n)


def cyl_to_polar(qn) -> PolarQN:
    """Inverse of :func:`polar_to_cyl`.

    Accepts a :class:`CylindricalQN` or a raw ``(n_r, l_z)`` pair; raw pairs
    violating the parity rule raise :class:`SelectionRuleError`.
    """
    if not isinstance(qn, CylindricalQN):
        qn = CylindricalQN(*qn)
    return PolarQN(n=(qn.n_r - qn.l_z) // 2, m=(qn.n_r + qn.l_z) // 2)


def _radial_part(mode, k, alpha, n_r, log_coef, sign, r, t):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ConfigError("r must be non-negative")
    _, _, phi, phi_dot, theta_xi = mode_at(mode, t)
    rho = r / math.sqrt(phi)
    rho2 = rho * rho
    log_coef = log_coef + 0.5 * math.log(2.0 / phi)
    modulus = sign * np.exp(log_coef - 0.5 * rho2) * rho**alpha * glaguerre(k, alpha, rho2)
    return modulus * np.exp(0.25j * phi_dot * rho2 - 1j * (n_r + 1) * theta_xi)


def omega_state(mode: ModeSolution, qn: PolarQN, r, theta, t):
    n, m = qn.n, qn.m
    k, alpha = min(n, m), abs(n - m)
    log_coef = log_factorial(k) - 0.5 * (log_factorial(n) + log_factorial(m))
    radial = _radial_part(mode, k, alpha, n + m, log_coef, (-1.0) ** k, r, t)
    return radial * np.exp(1j * (m - n) * np.asarray(theta, dtype=float)) / math.sqrt(2.0 * math.pi)


def theta_factor(l_z: int, theta):
    return np.exp(1j * l_z * np.asarray(theta, dtype=float)) / math.sqrt(2.0 * math.pi)


def radial_state(mode: ModeSolution, qn: CylindricalQN, r, t):
    """R_{n_r,l}(r, t) with the (-1)^((n_r - l)/2) sign convention."""
    if not isinstance(qn, CylindricalQN):
        qn = CylindricalQN(*qn)
    l, k = qn.l, qn.k
    log_coef = 0.5 * (log_factorial(k) - log_factorial(k + l))
    return _radial_part(mode, k, l, qn.n_r, log_coef, (-1.0) ** k, r, t)


def phi_cylindrical(modes, qn, point):
    """Full state R_{n_r,l}(r,t) Theta_{l_z}(theta) Z_{n_z}(z,t); ``qn = (CylindricalQN, n_z)``."""
    radial, axial = modes
    cqn, n_z = qn
    if not isinstance(cqn, CylindricalQN):
        cqn = CylindricalQN(*cqn)
    r, theta, z, t = point
    return radial_state(radial, cqn, r, t) * theta_factor(cqn.l_z, theta) * z_state(axial, n_z, z, t)


class LatticePoint(NamedTuple):
    n: int
    m: int
    n_r: int
    l_z: int


def level_points(N: int) -> list[LatticePoint]:
    """All (n, m) with n + m = N, ordered by increasing l_z."""
    N = _check_nonneg_int("N", N)
    return [LatticePoint(n, N - n, N, N - 2 * n) for n in range(N, -1, -1)]


def level_degeneracy(N: int) -> int:
    return len(level_points(N))


def lattice(n_max: int) -> list[LatticePoint]:
    """Allowed quantum-number points for every level N <= n_max."""
    return [p for N in range(n_max + 1) for p in level_points(N)]
