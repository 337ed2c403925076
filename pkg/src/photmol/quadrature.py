"""Quadrature rules used by the T-matrix code.

``adaptive_gk15`` is a globally adaptive Gauss-Kronrod 7/15 integrator for
smooth real integrands; ``geometric_panels`` lays composite Gauss-Legendre
panels whose width grows geometrically, which suits integrands living on a
log scale (the band integral runs from x_min ~ 1 up to Lambda ~ 1e8).
"""
from __future__ import annotations

import heapq

import numpy as np

from .errors import QuadratureError

# Kronrod nodes (positive half, descending) and weights for the 15-point rule
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# Gauss 7-point weights, attached to the odd-index Kronrod nodes (1, 3, 5, 7)
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5]] = _WG[:3]
_GW[7] = _WG[3]
_GW[[9, 11, 13]] = _WG[2::-1]


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fx = f(mid + half * _NODES)
    kron = half * np.dot(_KW, fx)
    gauss = half * np.dot(_GW, fx)
    return kron, abs(kron - gauss)


def adaptive_gk15(f, a, b, *, epsabs=1e-12, epsrel=1e-10, breakpoints=(), max_intervals=2000):
    """Integrate a vectorized real function ``f`` over [a, b].

    Returns ``(value, error_estimate)``.  Raises QuadratureError when the
    tolerance max(epsabs, epsrel*|value|) cannot be met within
    ``max_intervals`` subdivisions.
    """
    if b == a:
        return 0.0, 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    cuts = [a] + sorted(p for p in breakpoints if a < p < b) + [b]
    heap = []
    total = 0.0
    err = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        val, e = _gk15(f, lo, hi)
        heapq.heappush(heap, (-e, lo, hi, val))
        total += val
        err += e
    while err > max(epsabs, epsrel * abs(total)):
        if len(heap) >= max_intervals:
            raise QuadratureError(
                f"adaptive_gk15: tolerance not met on [{a}, {b}] (estimate {err:.3e})", achieved=err
            )
        neg_e, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise QuadratureError("adaptive_gk15: interval collapsed below float resolution", achieved=err)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        total += v1 + v2 - val
        err += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
    # re-sum to shed accumulated round-off from the running updates
    total = sum(item[3] for item in heap)
    return sign * total, err


def geometric_panels(a, b, *, ratio=1.25, order=16, first_width=None):
    """Composite Gauss-Legendre nodes/weights on [a, b] (0 < a < b).

    Panel widths grow by ``ratio``; the first panel is ``first_width``
    (default ``a * (ratio - 1)``).
    """
    if not 0 < a < b:
        raise ValueError("geometric_panels needs 0 < a < b")
    width = a * (ratio - 1.0) if first_width is None else first_width
    edges = [a]
    while edges[-1] < b:
        edges.append(min(edges[-1] + width, b))
        width *= ratio
    if len(edges) > 2 and (edges[-1] - edges[-2]) < 0.1 * (edges[-2] - edges[-3]):
        del edges[-2]
    edges = np.asarray(edges)
    x, w = np.polynomial.legendre.leggauss(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo) + half * x[None, :]).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights
