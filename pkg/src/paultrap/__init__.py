"""Exact time-dependent number states of the three-dimensional Paul trap.

Units are hbar = m = 1 throughout.
"""

from .errors import (
    ConfigError,
    CoverageError,
    NumericsError,
    PaulTrapError,
    SelectionRuleError,
    SpanError,
)
from .trap import MathieuParams, TrapConfig, coupling, drive_voltage, mathieu_params
from .modes import (
    ModeSolution,
    StabilityChart,
    default_ic,
    floquet_ic,
    floquet_stability,
    integrate_mode,
    mode_at,
    sho_mode,
    stability_boundary,
    stability_scan,
)
from .cartesian import CartesianQN, psi_cartesian, xy_state, z_state
from .cylindrical import (
    CylindricalQN,
    PolarQN,
    cyl_to_polar,
    lattice,
    omega_state,
    phi_cylindrical,
    polar_to_cyl,
    radial_state,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CoverageError",
    "NumericsError",
    "PaulTrapError",
    "SelectionRuleError",
    "SpanError",
    "MathieuParams",
    "TrapConfig",
    "coupling",
    "drive_voltage",
    "mathieu_params",
    "ModeSolution",
    "StabilityChart",
    "default_ic",
    "floquet_stability",
    "integrate_mode",
    "mode_at",
    "sho_mode",
    "stability_scan",
    "floquet_ic",
    "stability_boundary",
    "CartesianQN",
    "psi_cartesian",
    "xy_state",
    "z_state",
    "CylindricalQN",
    "PolarQN",
    "cyl_to_polar",
    "lattice",
    "omega_state",
    "phi_cylindrical",
    "polar_to_cyl",
    "radial_state",
]
