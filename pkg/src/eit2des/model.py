"""Physical parameters of the Lambda-type atom and unit handling.

Every rate and frequency is held in wavenumbers (cm^-1). Times are in ps and
only ever enter through ``rate * time`` products, converted with
:func:`to_angular_rate`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .errors import ConfigError

# speed of light in cm/ps
SPEED_OF_LIGHT = 0.0299792458
CM_TO_RAD_PER_PS = 2.0 * math.pi * SPEED_OF_LIGHT

LEVELS = ("a", "b", "c")


def to_angular_rate(x):
    """Convert a wavenumber (cm^-1) into an angular rate (rad/ps)."""
    return CM_TO_RAD_PER_PS * x


def from_angular_rate(w):
    """Inverse of :func:`to_angular_rate`."""
    return w / CM_TO_RAD_PER_PS


@dataclass(frozen=True)
class SystemParams:
    """Rates and transition frequency of the atom, all in cm^-1.

    The control field is on exact resonance with a<->c and every dipole
    moment is 1, so neither appears here.
    """

    omega_ab: float = 12579.0
    Gamma1: float = 1.0
    Gamma2: float = 0.0001
    gamma0_a: float = 80.0
    gamma0_b: float = 1.0
    gamma0_c: float = 1.0
    Omega: float = 50.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigError(f"{f.name} must be a finite number, got {value!r}", key=f.name)
            if value < 0:
                raise ConfigError(f"{f.name} must be >= 0, got {value}", key=f.name)
        if self.omega_ab <= 0:
            raise ConfigError("omega_ab must be > 0", key="omega_ab")

    @property
    def relaxation_sum(self):
        return self.Gamma1 + self.Gamma2

    def without_control(self):
        return replace(self, Omega=0.0)


@dataclass(frozen=True)
class DerivedRates:
    gamma1: float
    gamma2: float
    gamma3: float
    omega_tilde: float
    oscillatory: bool


def derive_rates(params: SystemParams) -> DerivedRates:
    """Composite coherence decay rates and the damped Rabi frequency.

    ``omega_tilde`` is the magnitude 0.5*sqrt(|4 Omega^2 - gamma3^2|); the
    ``oscillatory`` flag tells which side of critical damping it belongs to.
    """
    p = params
    gamma1 = 0.5 * (p.Gamma1 + p.gamma0_a + p.Gamma2 + p.gamma0_b)
    gamma2 = 0.5 * (p.Gamma2 + p.gamma0_b + p.gamma0_c)
    gamma3 = 0.5 * (p.Gamma1 + p.gamma0_a + p.gamma0_c)
    disc = 4.0 * p.Omega**2 - gamma3**2
    return DerivedRates(gamma1, gamma2, gamma3, 0.5 * math.sqrt(abs(disc)), disc > 0)


def fig3_params() -> SystemParams:
    """Parameter set used for every figure of the reference calculation."""
    return SystemParams()
