"""Two-photon bound-state wavefunctions and the nonlinear crossing phase.

Positions are in metres, wavenumbers in 1/m, frequencies in rad/s.
Relative-coordinate grids are periodic: ``x_j = x_0 + j dx`` for
j = 0..N-1 with box length L = N dx.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.special import ndtr

from . import _kernels
from .errors import GridCoverageError

TAIL_MASS_LIMIT = 1e-6
DELTA_MASS_LIMIT = 1e-10
DEFAULT_CELLS = 10_000


def _uniform_spacing(x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 3:
        raise ValueError("grid must be 1-D with at least 3 points")
    steps = np.diff(x)
    dx = steps.mean()
    if not dx > 0 or np.max(np.abs(steps - dx)) > 1e-9 * dx:
        raise ValueError("grid must be uniform and increasing")
    return x, float(dx)


@dataclass
class PairAmplitude:
    """Relative wavefunction chi(x) of a pair with centre-of-mass wavenumber K."""

    x_grid: np.ndarray
    values: np.ndarray
    K: float = 0.0

    @property
    def dx(self):
        return float(self.x_grid[1] - self.x_grid[0])

    @property
    def box_length(self):
        return self.x_grid.size * self.dx

    def norm(self):
        return float(np.sum(np.abs(self.values) ** 2) * self.dx)

    def momentum(self):
        """(k, chi_k) with chi_k = L^{-1/2} sum_j dx chi(x_j) e^{-i k x_j}; sum |chi_k|^2 = norm()."""
        n = self.x_grid.size
        k = 2.0 * math.pi * np.fft.fftfreq(n, d=self.dx)
        chi_k = self.dx / math.sqrt(self.box_length) * np.exp(-1j * k * self.x_grid[0]) * np.fft.fft(self.values)
        return k, chi_k

    def to_rows(self):
        return [(x, v.real, v.imag) for x, v in zip(self.x_grid, self.values)]


def chi_delta_bound(kappa, x_grid, K=0.0):
    """Bound state sqrt(kappa) exp(-kappa |x|) of an attractive contact potential.

    The samples are rescaled so that sum |chi|^2 dx = 1 on the grid.
    """
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    x, dx = _uniform_spacing(x_grid)
    left, right = -x[0], x[-1] + dx
    if left <= 0 or right <= 0:
        raise GridCoverageError("relative grid must contain x = 0")
    tail = 0.5 * math.exp(-2.0 * kappa * left) + 0.5 * math.exp(-2.0 * kappa * right)
    if tail > TAIL_MASS_LIMIT:
        raise GridCoverageError(f"bound-state mass outside the grid is {tail:.3e} (> {TAIL_MASS_LIMIT})")
    chi = math.sqrt(kappa) * np.exp(-kappa * np.abs(x))
    chi = chi / math.sqrt(np.sum(chi ** 2) * dx)
    return PairAmplitude(x, chi.astype(complex), float(K))


def _lattice_index(points, chi):
    steps = (np.asarray(points, dtype=float) - chi.x_grid[0]) / chi.dx
    idx = np.rint(steps)
    if np.max(np.abs(steps - idx), initial=0.0) > 1e-6:
        raise ValueError("coordinates must lie on the lattice of the relative grid")
    return idx.astype(np.int64)


def molecule_wavefunction(chi, x_a, x_b, K=None, form="direct"):
    """phi_K(x_a, x_b) on the grid x_a (rows) by x_b (columns).

    ``direct``:   L^{-1/2} e^{i K (x_a + x_b)/2} chi(x_a - x_b)
    ``momentum``: L^{-1} sum_k chi_k e^{i (K/2 + k) x_a} e^{i (K/2 - k) x_b}

    Both coordinates must sit on the lattice of ``chi`` (the relative
    coordinate is wrapped into the periodic box).
    """
    K = chi.K if K is None else float(K)
    xa = np.asarray(x_a, dtype=float)
    xb = np.asarray(x_b, dtype=float)
    length = chi.box_length
    n = chi.x_grid.size
    if form == "direct":
        ia = _lattice_index(xa, chi)
        ib = _lattice_index(xb, chi)
        # x_a - x_b = x_0 + j dx  (mod L)
        offset = int(round(chi.x_grid[0] / chi.dx))
        j = np.mod(ia[:, None] - ib[None, :] + offset, n)
        com = np.exp(0.5j * K * (xa[:, None] + xb[None, :]))
        return com * chi.values[j] / math.sqrt(length)
    if form == "momentum":
        k, chi_k = chi.momentum()
        left = np.exp(1j * np.outer(xa, 0.5 * K + k)) * chi_k[None, :]
        right = np.exp(1j * np.outer(0.5 * K - k, xb))
        return left @ right / length
    raise ValueError(f"unknown form {form!r}")


def nonlinear_phase(v, v_e):
    """Phase v / (4 v_e) picked up by a counter-propagating pair crossing the contact."""
    if not v_e > 0:
        raise ValueError("v_e must be positive")
    return v / (4.0 * v_e)


def crossing_profile(xi, v, v_e, sigma):
    """Phase accumulated up to relative position ``xi`` for a unit-mass Gaussian contact of width sigma."""
    return nonlinear_phase(v, v_e) * ndtr(np.asarray(xi, dtype=float) / sigma)


@dataclass
class PhaseResult:
    theta: float
    sign: int
    theta_analytic: float
    theta_grid: float | None
    amplitude_deviation: float
    amplitude_deviation_grid: float | None
    half_crossing_phase: float
    sigma: float
    n_cells: int
    dx: float
    courant: float | None
    t_total: float
    t_total_grid: float | None
    omega0: float
    phi_in: complex
    phi_out: complex

    def as_dict(self):
        d = asdict(self)
        for key in ("phi_in", "phi_out"):
            d[key] = [d[key].real, d[key].imag]
        return d


def _gaussian_delta(x, sigma):
    return np.exp(-0.5 * (x / sigma) ** 2) / (math.sqrt(2.0 * math.pi) * sigma)


def _grid_solve(v, v_e, sigma, x, dx, omega0, courant, packet_width):
    span = x[-1] + dx - x[0]
    speed = 2.0 * v_e
    dt = courant * dx / speed
    nsteps = int(round(0.5 * span / (speed * dt)))
    centre = x[0] + 0.25 * span
    width = span / 40.0 if packet_width is None else packet_width
    packet = np.exp(-0.5 * ((x - centre) / width) ** 2).astype(complex)
    a = packet.copy()
    b = packet.copy()
    phase = np.exp(-1j * ((0.5 * v) * _gaussian_delta(x, sigma) + 2.0 * omega0) * dt)
    overlaps = _kernels.upwind_advect(a, b, np.ascontiguousarray(phase), float(courant), nsteps)
    accumulated = np.unwrap(-np.angle(overlaps))[-1]
    mask = np.abs(b) > 1e-3 * np.abs(b).max()
    deviation = float(np.max(np.abs(1.0 - np.abs(a[mask] / b[mask]))))
    return float(abs(accumulated)), deviation, nsteps * dt


def propagate_pair(v, v_e, sigma=None, x_grid=None, phi_in=1.0, *, omega0=0.0, grid_solve=True,
                   courant=1.0, n_cells=DEFAULT_CELLS, packet_width=None, stop_at=None):
    """Phase of a counter-propagating pair crossing a Gaussian-regularized contact.

    Solves i (d_t + 2 v_e d_x) phi = (v/2) delta_sigma(x) phi.  Along
    characteristics this is d phi / d xi = -i (v / 4 v_e) delta_sigma(xi) phi,
    integrated here on ``x_grid``; ``grid_solve`` additionally advects a
    Gaussian packet with a first-order upwind scheme at Courant number
    ``courant`` and reads the phase from its overlap with a free reference.

    Without ``x_grid`` a periodic grid of ``n_cells`` cells spanning
    1000 sigma (sigma defaulting to 1e-3 m) is used.
    """
    if not v_e > 0:
        raise ValueError("v_e must be positive")
    if phi_in == 0:
        raise ValueError("phi_in must be nonzero")
    if x_grid is None:
        sigma = 1e-3 if sigma is None else sigma
        span = 1000.0 * sigma
        x = -0.5 * span + span / n_cells * np.arange(n_cells)
        dx = span / n_cells
    else:
        x, dx = _uniform_spacing(x_grid)
        if sigma is None:
            sigma = 1e-3 * (x[-1] + dx - x[0])
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    if x[0] > -10.0 * sigma or x[-1] < 10.0 * sigma:
        raise GridCoverageError("grid must span at least +-10 sigma around the contact")
    mass = ndtr(x[-1] / sigma) - ndtr(x[0] / sigma)
    if mass < 1.0 - DELTA_MASS_LIMIT:
        raise GridCoverageError(f"contact mass on the grid is {mass:.12f} (< 1 - {DELTA_MASS_LIMIT})")

    strength = nonlinear_phase(v, v_e)
    xi = x if stop_at is None else x[x <= stop_at]
    if xi.size < 2:
        raise ValueError("stop_at lies before the start of the grid")
    profile = strength * cumulative_trapezoid(_gaussian_delta(xi, sigma), xi, initial=0.0)
    t_total = (xi[-1] - xi[0]) / (2.0 * v_e)
    accumulated = profile[-1] + 2.0 * omega0 * t_total
    phi_in = complex(phi_in)
    phi_out = phi_in * np.exp(-1j * accumulated)
    deviation = abs(1.0 - abs(phi_out) / abs(phi_in))

    theta_grid = dev_grid = t_grid = None
    if grid_solve:
        if not 0 < courant <= 1:
            raise ValueError("courant number must lie in (0, 1]")
        theta_grid, dev_grid, t_grid = _grid_solve(v, v_e, sigma, x, dx, omega0, courant, packet_width)

    return PhaseResult(
        theta=float(abs(accumulated)),
        sign=-1 if accumulated >= 0 else 1,
        theta_analytic=strength,
        theta_grid=theta_grid,
        amplitude_deviation=float(deviation),
        amplitude_deviation_grid=dev_grid,
        half_crossing_phase=float(crossing_profile(0.0, v, v_e, sigma)),
        sigma=float(sigma),
        n_cells=int(x.size),
        dx=float(dx),
        courant=float(courant) if grid_solve else None,
        t_total=float(t_total),
        t_total_grid=t_grid,
        omega0=float(omega0),
        phi_in=phi_in,
        phi_out=complex(phi_out),
    )
