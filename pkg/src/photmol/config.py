"""Run configuration: flat ``key = value`` files with unit-suffixed keys.

Example::

    # waveguide
    v_over_ve = 12.566370614359172
    omega_ghz = 40
    frequency_convention = angular
    temperature_k = 0.05
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

from .errors import ConfigError
from .physics import GHZ, MHZ, ThermalState, WaveguideParams, frequency_to_rad_per_s

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass
class RunConfig:
    # waveguide
    omega0_rad_per_s: float = 0.0
    v_e_m_per_s: float = 1.0e5
    v_over_ve: float | None = None
    v_coupling_mhz_m: float | None = None
    omega_ghz: float = 40.0
    frequency_convention: str = "angular"
    attractive: bool = True
    mu_rad_per_s: float = 0.0
    # thermal / T-matrix
    temperature_k: float = 0.05
    x_min: float = 1.0
    t_scan_min_k: float | None = None
    t_scan_max_k: float | None = None
    t_scan_points: int = 100
    omega_scan_min_over_delta: float = -0.5
    omega_scan_max_over_delta: float = 0.5
    omega_scan_points: int = 201
    eta_over_delta: float = 1.0e-8
    # nonlinear phase
    sigma_m: float = 1.0e-3
    n_cells: int = 10_000
    courant: float = 1.0
    gate_theta_rad: float | None = None
    # keldysh check (grid in units of Delta)
    keldysh_points: int = 4001
    keldysh_epsilon_over_delta: float = 0.0
    keldysh_eta_over_delta: float = 2.0e-3
    # molecule
    kappa_per_m: float = 1.0
    molecule_cells: int = 256
    molecule_box_m: float = 40.0
    molecule_k_per_m: float = 0.0
    # output
    format: str | None = None

    # ---- construction -------------------------------------------------
    @classmethod
    def keys(cls):
        return [f.name for f in fields(cls)]

    @classmethod
    def from_file(cls, path):
        cfg = cls()
        with open(path) as fh:
            pairs = parse_lines(fh, source=str(path))
        cfg.update(pairs)
        return cfg

    def update(self, pairs):
        types = {f.name: f.type for f in fields(self)}
        for key, raw in pairs.items():
            if key not in types:
                raise ConfigError(f"unknown config key {key!r}")
            setattr(self, key, _coerce(key, raw, types[key]))
        return self

    # ---- validation and resolution -----------------------------------
    def validate(self):
        if self.v_over_ve is not None and self.v_coupling_mhz_m is not None:
            raise ConfigError("set either v_over_ve or v_coupling_mhz_m, not both")
        if self.frequency_convention not in ("angular", "ordinary"):
            raise ConfigError("frequency_convention must be 'angular' or 'ordinary'")
        positive = ["v_e_m_per_s", "omega_ghz", "temperature_k", "x_min", "sigma_m", "kappa_per_m",
                    "molecule_box_m", "eta_over_delta", "keldysh_eta_over_delta"]
        for key in positive:
            value = getattr(self, key)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{key} must be positive and finite, got {value!r}")
        for key in ("t_scan_points", "omega_scan_points", "n_cells", "keldysh_points", "molecule_cells"):
            if getattr(self, key) < 3:
                raise ConfigError(f"{key} must be at least 3")
        if not 0 < self.courant <= 1:
            raise ConfigError("courant must lie in (0, 1]")
        for lo, hi in (("t_scan_min_k", "t_scan_max_k"), ("omega_scan_min_over_delta", "omega_scan_max_over_delta")):
            a, b = getattr(self, lo), getattr(self, hi)
            if a is not None and b is not None and not a < b:
                raise ConfigError(f"{lo} must be below {hi}")
        if self.t_scan_min_k is not None and self.t_scan_min_k <= 0:
            raise ConfigError("t_scan_min_k must be positive")
        if self.v_over_ve is not None and self.v_over_ve < 0:
            raise ConfigError("v_over_ve must be >= 0; use attractive = false for repulsion")
        if self.v_coupling_mhz_m is not None and self.v_coupling_mhz_m < 0:
            raise ConfigError("v_coupling_mhz_m must be >= 0")
        if self.format not in (None, "csv", "json"):
            raise ConfigError("format must be csv or json")
        return self

    @property
    def delta_rad_per_s(self):
        return frequency_to_rad_per_s(self.omega_ghz * GHZ, self.frequency_convention)

    @property
    def v_rad_m_per_s(self):
        if self.v_coupling_mhz_m is not None:
            return frequency_to_rad_per_s(self.v_coupling_mhz_m * MHZ, self.frequency_convention)
        ratio = 4.0 * math.pi if self.v_over_ve is None else self.v_over_ve
        return ratio * self.v_e_m_per_s

    def waveguide(self):
        self.validate()
        try:
            return WaveguideParams(omega0=self.omega0_rad_per_s, v_e=self.v_e_m_per_s, v=self.v_rad_m_per_s,
                                   Delta=self.delta_rad_per_s, mu=self.mu_rad_per_s, attractive=self.attractive)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def thermal(self):
        self.validate()
        return ThermalState.from_kelvin(self.temperature_k, mu=self.mu_rad_per_s)

    def echo(self):
        """Every key with its resolved value plus derived quantities, for output headers."""
        d = asdict(self)
        d["derived_Delta_rad_per_s"] = self.delta_rad_per_s
        d["derived_v_rad_m_per_s"] = self.v_rad_m_per_s
        d["derived_g"] = self.v_rad_m_per_s / (2.0 * math.pi * self.v_e_m_per_s)
        return d


def parse_lines(lines, source="<config>"):
    pairs = {}
    for lineno, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in text.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        if key in pairs:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


def _coerce(key, raw, type_name):
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    if "None" in str(type_name) and text.lower() in ("", "none", "null"):
        return None
    try:
        if "bool" in str(type_name):
            low = text.lower()
            if low in _TRUE:
                return True
            if low in _FALSE:
                return False
            raise ValueError(text)
        if "int" in str(type_name):
            return int(text)
        if "float" in str(type_name):
            return float(text)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    return text
