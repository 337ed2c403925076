"""Real-frequency Keldysh components on uniform grids.

Spectral functions live on a ``SpectralGrid``.  Retarded and advanced
functions are rebuilt from them by a principal-value Hilbert transform,
lesser and greater by the bosonic fluctuation-dissipation relation, and
``time_domain_retarded`` measures how causal a retarded function is.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .errors import DistributionPoleError, GridCoverageError
from .physics import bose_occupation, bose_occupation_bar

EDGE_FRACTION_LIMIT = 1e-2
TIME_EDGE_LIMIT = 1e-6
NORMALIZATION_DEFICIT_LIMIT = 1e-2


@dataclass(frozen=True)
class SpectralGrid:
    """Complex samples on a uniform frequency grid.

    ``singular`` is a frequency-independent part carried separately; it is
    added to retarded/advanced functions only (for the T-matrix, the bare
    coupling).
    """

    omega_min: float
    omega_max: float
    n_points: int
    values: np.ndarray
    singular: complex = 0.0

    def __post_init__(self):
        if int(self.n_points) < 3:
            raise ValueError("a grid needs at least 3 points")
        if not self.omega_max > self.omega_min:
            raise ValueError("omega_max must exceed omega_min")
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (int(self.n_points),):
            raise ValueError(f"values must have shape ({self.n_points},), got {vals.shape}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "n_points", int(self.n_points))

    @classmethod
    def empty(cls, omega_min, omega_max, n_points):
        return cls(omega_min, omega_max, n_points, np.zeros(int(n_points), dtype=complex))

    @property
    def omega(self):
        return np.linspace(self.omega_min, self.omega_max, self.n_points)

    @property
    def d_omega(self):
        return (self.omega_max - self.omega_min) / (self.n_points - 1)

    def with_values(self, values, singular=None):
        return replace(self, values=np.asarray(values, dtype=complex),
                       singular=self.singular if singular is None else singular)

    def integral(self):
        """Trapezoidal int dw/(2 pi) values(w)."""
        v = self.values
        return self.d_omega * (v.sum() - 0.5 * (v[0] + v[-1])) / (2.0 * math.pi)

    def is_real(self, rtol=1e-12):
        scale = np.max(np.abs(self.values)) if self.n_points else 0.0
        return bool(np.all(np.abs(self.values.imag) <= rtol * max(scale, 1e-300)))

    def to_rows(self):
        return [(w, v.real, v.imag) for w, v in zip(self.omega, self.values)]

    def write_csv(self, path_or_file, header_lines=()):
        own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
        fh = open(path_or_file, "w", newline="") if own else path_or_file
        try:
            for line in header_lines:
                fh.write(f"# {line}\n")
            writer = csv.writer(fh)
            writer.writerow(["omega", "re", "im"])
            for w, re, im in self.to_rows():
                writer.writerow([repr(float(w)), repr(float(re)), repr(float(im))])
        finally:
            if own:
                fh.close()

    @classmethod
    def read_csv(cls, path):
        with open(path) as fh:
            rows = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        if rows and rows[0].startswith("omega"):
            rows = rows[1:]
        body = np.array([[float(x) for x in ln.split(",")] for ln in rows])
        w = body[:, 0]
        return cls(w[0], w[-1], w.size, body[:, 1] + 1j * body[:, 2])


def lorentzian_tail_mass(epsilon, eta, omega_min, omega_max):
    """Mass of a unit Lorentzian (in dw/2pi) lying outside [omega_min, omega_max]."""
    inside = (math.atan((omega_max - epsilon) / eta) - math.atan((omega_min - epsilon) / eta)) / math.pi
    return 1.0 - inside


def lorentzian_spectral(epsilon, eta=None, omega_min=-1.0, omega_max=1.0, n_points=4001):
    """Broadened delta: A(w) = 2 eta / ((w - eps)^2 + eta^2), eta defaulting to 1e-3 of the span."""
    span = omega_max - omega_min
    if eta is None:
        eta = 1e-3 * span
    if not eta > 0:
        raise ValueError("eta must be positive")
    grid = SpectralGrid.empty(omega_min, omega_max, n_points)
    deficit = lorentzian_tail_mass(epsilon, eta, omega_min, omega_max)
    if deficit > NORMALIZATION_DEFICIT_LIMIT:
        raise GridCoverageError(
            f"grid [{omega_min}, {omega_max}] holds only {1 - deficit:.4f} of the Lorentzian mass"
        )
    w = grid.omega
    return grid.with_values(2.0 * eta / ((w - epsilon) ** 2 + eta ** 2))


def _tail_kernel(a, b):
    # int_b^inf dx / (x^2 (a - x))  scaled so that anchors multiply b^2 A_edge
    a = np.asarray(a, dtype=complex)
    out = np.empty_like(a)
    small = np.abs(a / b) < 1e-3
    q = a[small] / b
    out[small] = -(1.0 / (2.0 * b * b)) * (1.0 + 2.0 * q / 3.0 + q * q / 2.0 + 2.0 * q ** 3 / 5.0)
    al = a[~small]
    with np.errstate(all="ignore"):
        out[~small] = 1.0 / (al * b) - (np.log(b) - np.log(b - al)) / al ** 2
    return out


def _check_spectral(spectral):
    if not spectral.is_real():
        raise ValueError("spectral function must be real-valued")
    a = spectral.values.real
    peak = np.max(np.abs(a))
    if peak > 0 and max(abs(a[0]), abs(a[-1])) > EDGE_FRACTION_LIMIT * peak:
        raise GridCoverageError("spectral weight at the grid edge exceeds 1e-2 of the peak; widen the grid")
    return a


def retarded_from_spectral(spectral, eta=0.0):
    """C^R(w) = int dw'/(2 pi) A(w') / (w - w' + i eta), plus the singular part.

    ``eta = 0`` gives the principal value with Im C^R = -A/2.  The integral
    is split as A(w) int dw'/(w - w' + i eta), done analytically, plus the
    bounded remainder (A(w') - A(w))/(w - w' + i eta) on the grid.  Beyond
    the grid the spectral function is continued by c/(w - w_c)^2 tails
    matched to the edge values, w_c being its first moment.
    """
    if eta < 0:
        raise ValueError("eta must be >= 0")
    a = _check_spectral(spectral)
    w = spectral.omega
    h = spectral.d_omega
    n = spectral.n_points
    if eta == 0:
        slope = np.gradient(a, h, edge_order=2)
        d_first, d_last = float(slope[0]), float(slope[-1])
    else:
        d_first = d_last = 0.0
    rem = _kernels.hilbert_remainder(np.ascontiguousarray(a), h, float(eta), d_first, d_last)

    weights = np.full(n, h)
    weights[0] = weights[-1] = 0.5 * h
    mass = float(np.dot(weights, a))
    centre = float(np.dot(weights, w * a) / mass) if mass != 0 else 0.5 * (w[0] + w[-1])
    b_right = w[-1] - centre
    b_left = centre - w[0]
    if b_right <= 0 or b_left <= 0:
        raise GridCoverageError("first moment of the spectral function lies outside the grid")
    shift = w - centre + 1j * eta
    a_right, a_left = a[-1], a[0]
    with np.errstate(all="ignore"):
        lo = np.log((w - w[0]) + 1j * eta + 0j)
        hi = np.log((w - w[-1]) + 1j * eta + 0j)
        t_right = a_right * b_right ** 2 * _tail_kernel(shift, b_right)
        t_left = -a_left * b_left ** 2 * _tail_kernel(-shift, b_left)
        total = rem + a * (lo - hi) + t_right + t_left
    if eta == 0:
        # at the grid ends the log singularities of the in-grid and tail parts cancel
        x = w[-1] - centre
        total[-1] = (rem[-1] + a[-1] * lo[-1] - 1j * math.pi * a[-1]
                     + a_right * b_right ** 2 * (1.0 / (x * b_right) - math.log(b_right) / x ** 2)
                     + t_left[-1])
        x = centre - w[0]
        total[0] = (rem[0] - a[0] * hi[0]
                    - a_left * b_left ** 2 * (1.0 / (x * b_left) - math.log(b_left) / x ** 2)
                    + t_right[0])
    return spectral.with_values(total / (2.0 * math.pi) + spectral.singular)


def advanced_from_spectral(spectral, eta=0.0):
    """C^A = (C^R)^* for a real spectral function."""
    ret = retarded_from_spectral(spectral, eta)
    return ret.with_values(np.conj(ret.values), singular=np.conj(spectral.singular))


def fdt_components(spectral, thermal, mu_multiplier=1, mask_pole=False):
    """Lesser and greater components from A by the bosonic FDT.

    lesser = -i f(w - m mu) A, greater = -i fbar(w - m mu) A with m = ``mu_multiplier``.
    A bin sitting exactly on w = m mu raises unless ``mask_pole``, which sets it to NaN.
    """
    if mu_multiplier not in (1, 2):
        raise ValueError("mu_multiplier must be 1 or 2")
    a = spectral.values.real if spectral.is_real() else spectral.values
    state = thermal.shifted(mu_multiplier)
    w = spectral.omega
    on_pole = thermal.beta * (w - state.mu) == 0
    if np.any(on_pole):
        if not mask_pole:
            raise DistributionPoleError(f"grid contains omega = {state.mu} (distribution pole); mask it or shift the grid")
        w = np.where(on_pole, state.mu + 1.0, w)
    f = bose_occupation(w, state)
    fbar = bose_occupation_bar(w, state)
    lesser = -1j * f * a
    greater = -1j * fbar * a
    if np.any(on_pole):
        lesser[on_pole] = np.nan
        greater[on_pole] = np.nan
    return spectral.with_values(lesser, singular=0.0), spectral.with_values(greater, singular=0.0)


@dataclass
class TimeSeries:
    t: np.ndarray
    values: np.ndarray
    leakage: float
    peak: float
    pole_residue: complex
    pole_position: complex


def _tukey(n, fraction):
    x = np.linspace(0.0, 1.0, n)
    win = np.ones(n)
    if fraction > 0:
        m = x < fraction / 2
        win[m] = 0.5 * (1.0 - np.cos(2 * np.pi * x[m] / fraction))
        m = x > 1 - fraction / 2
        win[m] = 0.5 * (1.0 - np.cos(2 * np.pi * (1 - x[m]) / fraction))
    return win


def _fit_outer_pole(w, c, fraction=0.1):
    # 1/C ~ (w - p)/Z is linear in w on the outer part of the grid
    n = w.size
    k = max(int(fraction * n), 8)
    idx = np.r_[0:k, n - k:n]
    design = np.c_[w[idx], np.ones(idx.size)].astype(complex)
    coef, *_ = np.linalg.lstsq(design, 1.0 / c[idx], rcond=None)
    residue = 1.0 / coef[0]
    pole = -coef[1] * residue
    if pole.imag >= 0:
        pole = complex(pole.real, -1e-12 * (w[-1] - w[0]))
    return residue, pole


def time_domain_retarded(retarded, taper=0.1):
    """C^R(t) = int dw/(2 pi) e^{-i w t} C^R(w) with a causality metric.

    The slowly decaying 1/w tail is removed first by subtracting a single
    causal pole fitted to the outer grid; its exact transform
    -i Z theta(t) e^{-i p t} is added back after the FFT.  ``leakage`` is
    max |C(t < 0)| / max |C(t)|.
    """
    c = retarded.values - retarded.singular
    w = retarded.omega
    n = retarded.n_points
    dw = retarded.d_omega
    t = np.fft.fftfreq(n, d=dw / (2.0 * math.pi))
    order = np.argsort(t)
    if not np.any(c):
        return TimeSeries(t[order], np.zeros(n, dtype=complex), 0.0, 0.0, 0j, 0j)
    residue, pole = _fit_outer_pole(w, c)
    rest = c - residue / (w - pole)
    peak_w = np.max(np.abs(c))
    if max(abs(rest[0]), abs(rest[-1])) > TIME_EDGE_LIMIT * peak_w:
        raise GridCoverageError("retarded function does not decay like a single pole at the grid edges; widen the grid")
    ct = dw / (2.0 * math.pi) * np.exp(-1j * w[0] * t) * np.fft.fft(rest * _tukey(n, taper))
    with np.errstate(over="ignore", invalid="ignore"):
        pole_part = np.where(t > 0, -1j * residue * np.exp(-1j * pole * np.where(t > 0, t, 0.0)), 0.0)
    pole_part = np.where(t == 0, -0.5j * residue, pole_part)
    ct = (ct + pole_part)[order]
    t = t[order]
    mags = np.abs(ct)
    peak = float(mags.max())
    leakage = float(mags[t < 0].max() / peak) if peak > 0 else 0.0
    return TimeSeries(t, ct, leakage, peak, complex(residue), complex(pole))
