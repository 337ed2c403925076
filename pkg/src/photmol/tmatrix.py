"""Retarded T-matrix of contact-interacting photons in one dimension.

With the band variable x = beta (eps - mu) / 2 and s = beta (zeta - 2 mu) / 4
the masked band integral reduces to

    B(s) = int_{x_min}^{Lambda} x coth(x) / (s^2 - x^2) dx,   Lambda = beta Delta / 2,

and the retarded T-matrix is u / (1 - u B / (2 pi v_e)) with u = -v for
attractive coupling.  At zeta - 2 mu = i 0+ this gives the familiar
denominator D = 1 - g I(x_min, Lambda), I = int coth(x)/x dx.

The lower cutoff x_min is explicit: coth(x)/x ~ 1/x^2 near 0 so the integral
from 0 diverges.  The default x_min = 1 places the cut at the coth knee.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from . import _kernels
from .errors import DistributionPoleError, NoBracketError, QuadratureError
from .physics import ThermalState, WaveguideParams, coth, coth_factor, rad_per_s_to_kelvin
from .quadrature import adaptive_gk15, geometric_panels

DEFAULT_X_MIN = 1.0
POLE_PROXIMITY = 1e-12


@dataclass(frozen=True)
class TMatrixQuery:
    zeta: complex
    params: WaveguideParams
    thermal: ThermalState
    x_min: float = DEFAULT_X_MIN
    tol: float = 1e-10

    def __post_init__(self):
        if complex(self.zeta).imag < 0:
            raise ValueError("retarded evaluation needs Im(zeta) >= 0")
        if not self.x_min > 0:
            raise ValueError("x_min must be positive")

    @property
    def lam(self):
        return 0.5 * self.thermal.beta * self.params.Delta


@dataclass(frozen=True)
class TMatrixResult:
    value: complex
    denominator: complex
    band_integral: complex
    near_pole: bool


@dataclass(frozen=True)
class CriticalPoint:
    T_c_kelvin: float
    lambda_c: float
    g: float
    method: str
    x_min: float
    T_c_rad_per_s: float
    params: dict = field(default_factory=dict)

    def as_dict(self):
        return asdict(self)


def pair_propagator_upsilon(epsilon, query):
    """Thermal pair bubble coth(beta (eps - mu)/2) / (zeta - 2 eps)."""
    zeta = complex(query.zeta)
    if epsilon == query.thermal.mu and zeta == 2 * epsilon:
        raise DistributionPoleError("distribution pole and propagator pole coincide")
    return complex(coth_factor(epsilon, query.thermal)) / (zeta - 2.0 * epsilon)


def g2_retarded_numeric(epsilon, zeta, thermal, broadening, *, tol=1e-10):
    """Two-particle retarded function from Lorentzian-broadened spectral functions.

    Evaluates

        i^2 int int dw' dw'' / (2 pi)^2 [G>(w') G>(w'') - G<(w') G<(w'')] / (zeta - w' - w'')

    with G<(w) = -i f(w) A(w), G>(w) = -i fbar(w) A(w) and both particles
    carrying A(w) = 2 gamma / ((w - eps)^2 + gamma^2).  The bracket equals
    A A (1 + f' + f''), the w'' integral of a Lorentzian against
    1/(z - w'') is done in closed form and the remaining w' integral is
    adaptive, with a Cauchy weight at the Bose pole w' = mu.
    """
    if broadening <= 0:
        raise ValueError("broadening must be positive")
    zeta = complex(zeta)
    mu, beta, gam = thermal.mu, thermal.beta, float(broadening)
    if epsilon == mu:
        raise DistributionPoleError("spectral peak sits on the Bose pole")
    side = math.copysign(1.0, zeta.imag) if zeta.imag != 0 else 0.0
    # absolute tolerances follow the natural size of the result
    scale = 1.0 / max(abs(zeta - 2.0 * epsilon), gam)
    epsabs = tol * 1e-3 * scale

    def inner(w):
        # int dw''/(2 pi) A(w'') / (zeta - w - w'')
        z = zeta - w - epsilon
        if side == 0.0:
            return z / (z * z + gam * gam)
        return 1.0 / (z + 1j * side * gam)

    def lorentz(w):
        return 2.0 * gam / ((w - epsilon) ** 2 + gam * gam)

    def regular(w):
        return lorentz(w) * inner(w) * coth(0.5 * beta * (w - mu)) / (2.0 * np.pi)

    def times_pole(w):
        # (w - mu) coth(beta (w - mu)/2) is smooth through w = mu
        y = w - mu
        smooth = 2.0 / beta if y == 0 else y * float(coth(0.5 * beta * y))
        return lorentz(w) * inner(w) * smooth / (2.0 * np.pi)

    pole = zeta.real - epsilon
    gap = abs(epsilon - mu)
    if pole != mu:
        gap = min(gap, abs(pole - mu))
    r = 0.5 * gap
    # integrate in u = (w - epsilon) / L so that QUADPACK sees O(1) abscissae
    L = max(abs(zeta - 2.0 * epsilon), gam, 1.0 / beta)

    def to_u(w):
        return (w - epsilon) / L

    total = 0j
    err = 0.0
    for part in (0, 1):
        pick = (lambda c: c.real) if part == 0 else (lambda c: c.imag)
        val, e = quad(lambda u: pick(times_pole(epsilon + L * u)), to_u(mu - r), to_u(mu + r),
                      weight="cauchy", wvar=to_u(mu), limit=400, epsabs=epsabs, epsrel=tol)
        total += val if part == 0 else 1j * val
        err += e
    marks = sorted({epsilon, pole, epsilon - 50 * gam, epsilon + 50 * gam,
                    epsilon - 5 * gam, epsilon + 5 * gam})
    for lo_end, hi_end in ((-np.inf, mu - r), (mu + r, np.inf)):
        inside = [p for p in marks if lo_end < p < hi_end]
        edges = [lo_end] + inside + [hi_end]
        for lo, hi in zip(edges[:-1], edges[1:]):
            for part in (0, 1):
                pick = (lambda c: c.real) if part == 0 else (lambda c: c.imag)
                val, e = quad(lambda u: pick(regular(epsilon + L * u)), to_u(lo), to_u(hi), limit=500,
                              epsabs=epsabs / L, epsrel=tol)
                total += L * val if part == 0 else 1j * L * val
                err += L * e
    if err > max(1e-6 * abs(total), tol * scale):
        raise QuadratureError(f"g2_retarded_numeric did not converge (error {err:.3e})", achieved=err)
    return total


def _smooth_low(x):
    # (coth x - 1/x) / x, smooth on (0, 1]
    x = np.asarray(x, dtype=float)
    small = x < 0.1
    xs = np.where(small, x, 0.5)
    x2 = xs * xs
    series = 1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 * (-1.0 / 4725.0 + x2 * 2.0 / 93555.0)))
    xb = np.where(small, 0.5, x)
    direct = (1.0 / np.tanh(xb) - 1.0 / xb) / xb
    return np.where(small, series, direct)


def _smooth_high(x):
    # (coth x - 1) / x = 2 / (x (exp(2x) - 1))
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        return 2.0 / (x * np.expm1(2.0 * x))


_HIGH_CAP = 60.0  # (coth x - 1)/x < 1e-52 beyond this


def coth_integral(x_min, lam, tol=1e-10):
    """I(x_min, Lambda) = int_{x_min}^{Lambda} coth(x) / x dx.

    Split at x = 1.  Below, 1/x^2 is integrated exactly and the bounded
    remainder (coth x - 1/x)/x by adaptive Gauss-Kronrod; above, ln x is
    exact and the exponentially small (coth x - 1)/x is integrated.
    """
    if not 0 < x_min <= lam:
        raise ValueError("coth_integral needs 0 < x_min <= lambda")
    if lam == x_min:
        return 0.0
    total = 0.0
    if x_min < 1.0:
        b = min(lam, 1.0)
        val, _ = adaptive_gk15(_smooth_low, x_min, b, epsabs=tol * 1e-2, epsrel=tol)
        total += (1.0 / x_min - 1.0 / b) + val
    if lam > 1.0:
        a = max(x_min, 1.0)
        total += math.log(lam / a)
        b = min(lam, _HIGH_CAP)
        if b > a:
            val, _ = adaptive_gk15(_smooth_high, a, b, epsabs=tol * 1e-2, epsrel=tol)
            total += val
    return total


@lru_cache(maxsize=64)
def _band_nodes(x_min, lam):
    nodes, weights = geometric_panels(x_min, lam, ratio=1.2, order=20,
                                      first_width=min(0.2 * x_min, 0.1, lam - x_min))
    xcoth = nodes / np.tanh(nodes)
    return nodes, weights, xcoth


def band_integral(s, x_min, lam):
    """B(s) = int_{x_min}^{Lambda} x coth(x) / (s^2 - x^2) dx for complex s (array or scalar).

    Real s inside the band is read as s + i0.  Poles near the real axis are
    removed by subtracting h(s)/(s - x), h(x) = x coth x / (s + x), and adding
    back h(s) [ln(s - x_min) - ln(s - Lambda)].
    """
    s_in = np.asarray(s, dtype=complex)
    scalar = s_in.ndim == 0
    s_arr = np.atleast_1d(s_in).astype(complex)
    if lam <= x_min:
        out = np.zeros_like(s_arr)
        return complex(out[0]) if scalar else out
    nodes, weights, xcoth = _band_nodes(float(x_min), float(lam))
    # B depends on s^2 only; fold to Re s >= 0, keeping the side of the cut
    re = s_arr.real
    im = s_arr.imag
    flip = re < 0
    folded = np.where(flip, -re, re) + 1j * np.where(flip, -im, im)
    # numpy drops the sign of a zero imaginary part, restore -0.0 on flipped entries
    folded = np.array([complex(f.real, math.copysign(0.0, -1.0)) if (fl and f.imag == 0) else f
                       for f, fl in zip(folded, flip)], dtype=complex)
    subtract = ((folded.real > 0.5 * x_min) & (folded.real < 2.0 * lam)
                & (np.abs(folded.imag) < folded.real)).astype(np.uint8)
    hs = np.zeros_like(folded)
    logs = np.zeros_like(folded)
    for k in np.flatnonzero(subtract):
        sv = folded[k]
        hs[k] = 0.5 * complex(coth(sv))
        logs[k] = np.log(sv - x_min) - np.log(sv - lam)
    sums = _kernels.band_sums(nodes, weights, xcoth, folded, hs, subtract)
    out = sums + hs * logs
    return complex(out[0]) if scalar else out


def tmatrix_retarded_1d(query):
    """Retarded T-matrix at complex energy ``query.zeta`` (rad/s)."""
    p, th = query.params, query.thermal
    u = p.signed_v
    if u == 0:
        return TMatrixResult(0j, 1 + 0j, 0j, False)
    s = th.beta * (complex(query.zeta) - 2.0 * th.mu) / 4.0
    if s.imag == 0:
        s = complex(s.real, 0.0)
    b = band_integral(s, query.x_min, query.lam)
    denom = 1.0 - u * b / (2.0 * math.pi * p.v_e)
    near = abs(denom) < POLE_PROXIMITY
    value = u / denom if denom != 0 else complex(math.inf, 0.0)
    return TMatrixResult(complex(value), complex(denom), complex(b), bool(near))


@dataclass
class DenominatorScan:
    temperature_kelvin: np.ndarray
    lam: np.ndarray
    integral: np.ndarray
    denominator: np.ndarray
    g: float
    x_min: float

    def sign_changes(self):
        """Row indices i with a sign change between rows i and i + 1."""
        # rows sitting exactly on D = 0 are skipped so a crossing is counted once
        sgn = np.sign(self.denominator)
        live = np.flatnonzero(sgn != 0)
        flips = sgn[live[:-1]] * sgn[live[1:]] < 0
        return live[:-1][flips]

    def rows(self):
        return list(zip(self.temperature_kelvin, self.lam, self.integral, self.denominator))


def _lambda_of_kelvin(temperature, params):
    return 0.5 * ThermalState.from_kelvin(temperature).beta * params.Delta


def denominator_value(lam, params, x_min, tol=1e-10):
    """D = 1 + u I(x_min, Lambda) / (2 pi v_e); equals 1 - g I when attractive."""
    integral = coth_integral(x_min, lam, tol) if lam > x_min else 0.0
    return 1.0 + params.signed_v * integral / (2.0 * math.pi * params.v_e), integral


def denominator_scan(temperatures_kelvin, params, x_min=DEFAULT_X_MIN, tol=1e-10):
    """Tabulate Lambda, I and D over an ascending list of temperatures."""
    t = np.asarray(temperatures_kelvin, dtype=float)
    if t.ndim != 1 or t.size == 0 or np.any(t <= 0):
        raise ValueError("temperatures must be a non-empty 1-D array of positive values")
    if np.any(np.diff(t) <= 0):
        raise ValueError("temperatures must be strictly ascending")
    lam = np.array([_lambda_of_kelvin(x, params) for x in t])
    d = np.empty_like(lam)
    integ = np.empty_like(lam)
    for i, lv in enumerate(lam):
        d[i], integ[i] = denominator_value(lv, params, x_min, tol)
    return DenominatorScan(t, lam, integ, d, params.g, x_min)


def _params_record(params):
    return {
        "omega0": params.omega0, "v_e": params.v_e, "v": params.v, "Delta": params.Delta,
        "mu": params.mu, "attractive": params.attractive, "g": params.g,
    }


def critical_temperature(params, method="asymptotic", x_min=DEFAULT_X_MIN, *, t_range=None, tol=1e-12):
    """Temperature where the pole condition D = 0 is met.

    ``asymptotic`` uses 1 = g ln Lambda, i.e. k_B T_c = (Delta/2) exp(-1/g).
    ``numeric`` root-solves 1 = g I(x_min, Lambda) in ln Lambda; ``t_range``
    (kelvin) restricts the search and raises NoBracketError when the
    denominator keeps its sign there.
    """
    g = params.g
    if not params.attractive or not g > 0:
        raise ValueError("critical temperature needs an attractive coupling with g > 0")
    record = _params_record(params)
    if method == "asymptotic":
        if 1.0 / g > 700:
            raise OverflowError("g too small: exp(1/g) overflows")
        lam_c = math.exp(1.0 / g)
        tc = 0.5 * params.Delta / lam_c
        return CriticalPoint(rad_per_s_to_kelvin(tc), lam_c, g, "asymptotic", x_min, tc, record)
    if method != "numeric":
        raise ValueError(f"unknown method {method!r}")

    def d_of_log(log_lam):
        return 1.0 - g * coth_integral(x_min, math.exp(log_lam), tol=1e-13)

    if t_range is not None:
        t_lo, t_hi = sorted(t_range)
        lo = math.log(max(_lambda_of_kelvin(t_hi, params), x_min))
        hi = math.log(max(_lambda_of_kelvin(t_lo, params), x_min))
        if hi <= lo or d_of_log(lo) * d_of_log(hi) > 0:
            raise NoBracketError(f"no sign change of D for T in [{t_lo}, {t_hi}] K (g = {g})")
    else:
        lo = math.log(x_min)
        # I grows like ln Lambda, so D crosses zero near ln Lambda ~ 1/g
        hi = lo + 1.0
        while d_of_log(hi) > 0:
            lo, hi = hi, hi + max(1.0, 0.5 * (hi - math.log(x_min)))
            if hi > 700:
                raise NoBracketError(f"no sign change of D up to Lambda = e^700 (g = {g})")
    log_lam_c = brentq(d_of_log, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200)
    lam_c = math.exp(log_lam_c)
    tc = 0.5 * params.Delta / lam_c
    return CriticalPoint(rad_per_s_to_kelvin(tc), lam_c, g, "numeric", x_min, tc, record)
