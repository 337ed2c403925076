"""Pure numpy versions of the compiled kernels (same signatures, same results)."""
import numpy as np

_CHUNK = 512


def hilbert_remainder(values, h, eta, d_first, d_last):
    """Alternating-point rule for int (A(w') - A(w_i)) / (w_i - w' + i eta) dw'.

    Only lattice points at odd offset from ``i`` enter the main sum, so the
    diagonal is never needed except inside the one-cell slivers at the grid
    ends (``d_first``/``d_last`` are dA/dw there, used only when eta == 0).
    """
    values = np.ascontiguousarray(values, dtype=float)
    n = values.size
    idx = np.arange(n)
    out = np.empty(n, dtype=complex)
    for start in range(0, n, _CHUNK):
        rows = idx[start:start + _CHUNK]
        offset = rows[:, None] - idx[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            g = (values[None, :] - values[rows, None]) / (offset * h + 1j * eta)
        g[offset == 0] = 0.0
        odd = (offset % 2) != 0
        total = 2.0 * h * np.where(odd, g, 0.0).sum(axis=1)
        for r, i in enumerate(rows):
            jlo = 1 if i % 2 == 0 else 0
            jhi = n - 1 if (n - 1 - i) % 2 == 1 else n - 2
            s = total[r] - h * (g[r, jlo] + g[r, jhi])
            if jlo == 1:
                g0 = -d_first if i == 0 else g[r, 0]
                s += 0.5 * h * (g0 + g[r, 1])
            if jhi == n - 2:
                g1 = -d_last if i == n - 1 else g[r, n - 1]
                s += 0.5 * h * (g[r, n - 2] + g1)
            out[i] = s
    return out


def upwind_advect(a, b, phase, nu, nsteps):
    """First-order upwind transport (zero inflow) of two fields; ``a`` also picks up ``phase`` each step.

    Updates ``a`` and ``b`` in place and returns the per-step overlaps <b|a>.
    """
    keep = 1.0 - nu
    overlaps = np.empty(nsteps, dtype=complex)
    for step in range(nsteps):
        a[1:] = keep * a[1:] + nu * a[:-1]
        a[0] *= keep
        a *= phase
        b[1:] = keep * b[1:] + nu * b[:-1]
        b[0] *= keep
        overlaps[step] = np.vdot(b, a)
    return overlaps


def band_sums(nodes, weights, xcoth, s, hs, subtract):
    s = np.asarray(s, dtype=complex)
    out = np.empty(s.size, dtype=complex)
    for p, sv in enumerate(s):
        if subtract[p]:
            d = sv - nodes
            with np.errstate(divide="ignore", invalid="ignore"):
                terms = weights * (xcoth / (sv + nodes) - hs[p]) / d
            out[p] = np.sum(np.where(d != 0, terms, 0.0))
        else:
            out[p] = np.sum(weights * xcoth / ((sv - nodes) * (sv + nodes)))
    return out
