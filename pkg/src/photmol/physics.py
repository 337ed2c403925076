"""Units, parameter records, dispersion and Bose statistics.

Internally everything is in natural units hbar = k_B = 1 with energies
expressed as angular frequencies (rad/s) and inverse temperatures in
seconds.  The only SI conversions live in this module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants

from .errors import DistributionPoleError

HBAR = constants.hbar
K_B = constants.k
GHZ = 1.0e9
MHZ = 1.0e6

#: below this |x| coth(x) is taken from its Laurent series
COTH_SERIES_CUTOFF = 1.0e-4

RIGHT = "right"
LEFT = "left"


def frequency_to_rad_per_s(value_hz, convention="angular"):
    """Interpret a frequency given in Hz either as rad/s (angular) or as cycles/s."""
    if convention == "angular":
        return float(value_hz)
    if convention == "ordinary":
        return 2.0 * math.pi * float(value_hz)
    raise ValueError(f"unknown frequency convention {convention!r}")


def kelvin_to_rad_per_s(temperature):
    return K_B * temperature / HBAR


def rad_per_s_to_kelvin(energy):
    return HBAR * energy / K_B


@dataclass(frozen=True)
class WaveguideParams:
    """Physical constants of the waveguide photon gas.

    omega0 : band minimum from transverse confinement (rad/s)
    v_e : effective group velocity (m/s)
    v : magnitude of the contact coupling (rad/s * m); its sign is ``attractive``
    Delta : half-width of the interaction band around mu (rad/s)
    mu : chemical potential (rad/s)
    """

    omega0: float = 0.0
    v_e: float = 1.0e5
    v: float = 4.0 * math.pi * 1.0e5
    Delta: float = 40.0e9
    mu: float = 0.0
    attractive: bool = True

    def __post_init__(self):
        if not self.v_e > 0:
            raise ValueError("v_e must be positive")
        if not self.Delta > 0:
            raise ValueError("Delta must be positive")
        if not self.v >= 0:
            raise ValueError("v must be non-negative; the sign is carried by `attractive`")
        if not math.isfinite(self.g):
            raise ValueError("coupling g = v / (2 pi v_e) is not finite")

    @property
    def g(self):
        """Dimensionless coupling v / (2 pi v_e)."""
        return self.v / (2.0 * math.pi * self.v_e)

    @property
    def signed_v(self):
        return -self.v if self.attractive else self.v

    @classmethod
    def from_ratio(cls, v_over_ve, *, v_e=1.0e5, **kw):
        return cls(v=v_over_ve * v_e, v_e=v_e, **kw)


@dataclass(frozen=True)
class ThermalState:
    """Inverse temperature ``beta`` (s) and chemical potential ``mu`` (rad/s)."""

    beta: float
    mu: float = 0.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")

    @classmethod
    def from_kelvin(cls, temperature, mu=0.0):
        if not temperature > 0:
            raise ValueError("temperature must be positive")
        return cls(beta=HBAR / (K_B * temperature), mu=mu)

    @property
    def kelvin(self):
        return HBAR / (K_B * self.beta)

    def shifted(self, multiplier):
        """Same beta with mu scaled, e.g. 2 mu for pair quantities."""
        return ThermalState(self.beta, multiplier * self.mu)


def dispersion(k, params, branch=RIGHT):
    """Photon frequency omega0 +/- v_e k on the right/left-moving branch."""
    if branch == RIGHT:
        return params.omega0 + params.v_e * np.asarray(k, dtype=float)
    if branch == LEFT:
        return params.omega0 - params.v_e * np.asarray(k, dtype=float)
    raise ValueError(f"unknown branch {branch!r}")


def _scaled(omega, thermal):
    y = thermal.beta * (np.asarray(omega, dtype=float) - thermal.mu)
    if np.any(y == 0):
        raise DistributionPoleError("Bose factor evaluated at omega == mu")
    return y


def bose_occupation(omega, thermal):
    """f = 1 / (exp(beta (omega - mu)) - 1)."""
    y = _scaled(omega, thermal)
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1(y)


def bose_occupation_bar(omega, thermal):
    """fbar = 1 + f = exp(beta (omega - mu)) f, evaluated without cancellation."""
    y = _scaled(omega, thermal)
    with np.errstate(over="ignore"):
        return -1.0 / np.expm1(-y)


def coth(x):
    """coth with a Laurent series for |x| < COTH_SERIES_CUTOFF (x may be complex)."""
    x = np.asarray(x)
    small = np.abs(x) < COTH_SERIES_CUTOFF
    with np.errstate(divide="ignore", invalid="ignore"):
        big = 1.0 / np.tanh(np.where(small, 1.0, x))
        ser = 1.0 / x + x / 3.0 - x ** 3 / 45.0
    return np.where(small, ser, big)


def coth_factor(epsilon, thermal):
    """1 + 2 f(epsilon) = coth(beta (epsilon - mu) / 2)."""
    y = _scaled(epsilon, thermal)
    return coth(0.5 * y)
