# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Semantics mirror ``_pykernels`` exactly."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def hilbert_remainder(const double[::1] values, double h, double eta,
                      double d_first, double d_last):
    # complex arithmetic is spelled out in reals: C99 complex division is slow
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t i, j, jlo, jhi
    cdef double sr, si, den, dr, num, ai, eta2 = eta * eta
    cdef double glo_r, glo_i, ghi_r, ghi_i, g0_r, g0_i, g1_r, g1_i
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] res = out

    for i in range(n):
        ai = values[i]
        jlo = 1 if (i % 2 == 0) else 0
        jhi = n - 1 if ((n - 1 - i) % 2 == 1) else n - 2
        sr = 0.0
        si = 0.0
        j = jlo
        while j <= jhi:
            # (v_j - a_i) / (dr + i eta) = num (dr - i eta) / (dr^2 + eta^2)
            dr = (i - j) * h
            num = (values[j] - ai) / (dr * dr + eta2)
            sr += num * dr
            si -= num * eta
            j += 2
        dr = (i - jlo) * h
        num = (values[jlo] - ai) / (dr * dr + eta2)
        glo_r = num * dr
        glo_i = -num * eta
        dr = (i - jhi) * h
        num = (values[jhi] - ai) / (dr * dr + eta2)
        ghi_r = num * dr
        ghi_i = -num * eta
        sr = 2.0 * h * sr - h * (glo_r + ghi_r)
        si = 2.0 * h * si - h * (glo_i + ghi_i)
        if jlo == 1:
            # i is even; the left sliver touches the diagonal only when i == 0
            if i == 0:
                g0_r = -d_first
                g0_i = 0.0
            else:
                dr = i * h
                num = (values[0] - ai) / (dr * dr + eta2)
                g0_r = num * dr
                g0_i = -num * eta
            sr += 0.5 * h * (g0_r + glo_r)
            si += 0.5 * h * (g0_i + glo_i)
        if jhi == n - 2:
            if i == n - 1:
                g1_r = -d_last
                g1_i = 0.0
            else:
                dr = (i - n + 1) * h
                num = (values[n - 1] - ai) / (dr * dr + eta2)
                g1_r = num * dr
                g1_i = -num * eta
            sr += 0.5 * h * (ghi_r + g1_r)
            si += 0.5 * h * (ghi_i + g1_i)
        res[i] = sr + 1j * si
    return out


def upwind_advect(double complex[::1] a, double complex[::1] b,
                  const double complex[::1] phase, double nu, Py_ssize_t nsteps):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t step, j
    cdef double keep = 1.0 - nu
    cdef double ar, ai, br, bi, par, pai, pbr, pbi, xr, xi, yr, yi, pr, pi_, acc_r, acc_i
    # interleaved (re, im) views so the loop is plain double arithmetic
    cdef double[::1] fa = np.asarray(a).view(np.float64)
    cdef double[::1] fb = np.asarray(b).view(np.float64)
    cdef const double[::1] fp = np.asarray(phase).view(np.float64)
    overlaps = np.empty(nsteps, dtype=np.complex128)
    cdef double complex[::1] ov = overlaps

    for step in range(nsteps):
        acc_r = 0.0
        acc_i = 0.0
        # previous cell before this step's update (zero inflow at the left edge)
        par = 0.0
        pai = 0.0
        pbr = 0.0
        pbi = 0.0
        for j in range(n):
            ar = fa[2 * j]
            ai = fa[2 * j + 1]
            br = fb[2 * j]
            bi = fb[2 * j + 1]
            xr = keep * ar + nu * par
            xi = keep * ai + nu * pai
            yr = keep * br + nu * pbr
            yi = keep * bi + nu * pbi
            pr = fp[2 * j]
            pi_ = fp[2 * j + 1]
            par = ar
            pai = ai
            pbr = br
            pbi = bi
            ar = xr * pr - xi * pi_
            ai = xr * pi_ + xi * pr
            fa[2 * j] = ar
            fa[2 * j + 1] = ai
            fb[2 * j] = yr
            fb[2 * j + 1] = yi
            # conj(b) * a
            acc_r += yr * ar + yi * ai
            acc_i += yr * ai - yi * ar
        ov[step] = acc_r + 1j * acc_i
    return overlaps


def band_sums(const double[::1] nodes, const double[::1] weights, const double[::1] xcoth,
              const double complex[::1] s, const double complex[::1] hs,
              const unsigned char[::1] subtract):
    cdef Py_ssize_t m = nodes.shape[0]
    cdef Py_ssize_t k = s.shape[0]
    cdef Py_ssize_t p, q
    cdef double complex acc, sv, hv, d
    out = np.empty(k, dtype=np.complex128)
    cdef double complex[::1] res = out

    for p in range(k):
        sv = s[p]
        acc = 0.0
        if subtract[p]:
            hv = hs[p]
            for q in range(m):
                d = sv - nodes[q]
                if d != 0:
                    acc = acc + weights[q] * (xcoth[q] / (sv + nodes[q]) - hv) / d
        else:
            for q in range(m):
                acc = acc + weights[q] * xcoth[q] / ((sv - nodes[q]) * (sv + nodes[q]))
        res[p] = acc
    return out
