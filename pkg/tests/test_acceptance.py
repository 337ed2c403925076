"""Acceptance gate: the nine criteria at their stated tolerances and runtime limits.

Each test prints one ``PASS``/``FAIL criterion N: ...`` line.  Run directly with
``python3 tests/test_acceptance.py`` or through pytest.
"""
import math
import sys
import time

import numpy as np
import pytest

from photmol import boundstate as B
from photmol import gate as G
from photmol import keldysh as K
from photmol import tmatrix as T
from photmol.physics import ThermalState, WaveguideParams

from oracles import (CNOT, T_C_ASYMPTOTIC_KELVIN, coth_integral_scipy, coth_tail_constant_scipy,
                     lorentzian_retarded)


@pytest.fixture
def report(capsys):
    """Record a verdict line; the caller asserts afterwards."""
    def emit(number, ok, detail, elapsed, limit):
        timed = elapsed < limit
        verdict = "PASS" if ok and timed else "FAIL"
        with capsys.disabled():
            print(f"\n{verdict} criterion {number}: {detail} [{elapsed:.2f} s, limit {limit:g} s]")
        return ok and timed
    return emit


def test_criterion_1_critical_temperature(report):
    start = time.perf_counter()
    params = WaveguideParams.from_ratio(4 * math.pi, Delta=40e9)
    cp = T.critical_temperature(params, "asymptotic")
    elapsed = time.perf_counter() - start
    rel = abs(cp.T_c_kelvin - 0.1) / 0.1
    exact = abs(cp.T_c_kelvin - T_C_ASYMPTOTIC_KELVIN) / T_C_ASYMPTOTIC_KELVIN
    ok = rel < 0.15 and exact < 1e-12
    assert report(1, ok, f"T_c = {cp.T_c_kelvin:.6g} K, {100 * rel:.1f}% from 0.1 K", elapsed, 1.0)


def test_criterion_2_pole_condition_reduction(report):
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(20):
        g = rng.uniform(0.05, 0.5)
        lam = 10 ** rng.uniform(1.0, 4.0)
        params = WaveguideParams.from_ratio(2 * math.pi * g)
        thermal = ThermalState(2.0 * lam / params.Delta)
        eta = 1e-8 * params.Delta
        value = T.tmatrix_retarded_1d(T.TMatrixQuery(2 * thermal.mu + 1j * eta, params, thermal)).value
        oracle = -params.v / (1.0 - g * coth_integral_scipy(1.0, lam))
        worst = max(worst, abs(value - oracle) / abs(oracle))
    elapsed = time.perf_counter() - start
    assert report(2, worst < 1e-6, f"max relative deviation {worst:.2e} (tol 1e-6)", elapsed, 10.0)


def test_criterion_3_numeric_offset(report):
    start = time.perf_counter()
    c = coth_tail_constant_scipy()
    offsets = []
    for g in (0.05, 0.08, 0.1, 0.2):
        cp = T.critical_temperature(WaveguideParams.from_ratio(2 * math.pi * g), "numeric", x_min=1.0)
        offsets.append(math.log(cp.lambda_c) - 1.0 / g)
    elapsed = time.perf_counter() - start
    worst = max(abs(o + c) for o in offsets)
    detail = "offsets " + ", ".join(f"{o:.6f}" for o in offsets) + f" vs -c = {-c:.6f}"
    assert report(3, worst < 2e-2, detail, elapsed, 10.0)


def test_criterion_4_pole_structure(report):
    start = time.perf_counter()
    params = WaveguideParams.from_ratio(4 * math.pi)
    tc = T.critical_temperature(params, "numeric").T_c_kelvin
    temps = np.geomspace(tc / 10, tc * 10, 100)
    scan = T.denominator_scan(temps, params)
    elapsed = time.perf_counter() - start
    above = scan.denominator[temps > tc]
    below = scan.denominator[temps < tc]
    flips = scan.sign_changes()
    ok = bool(np.all(above > 0) and np.all(below < 0) and len(flips) == 1)
    detail = f"T_c,numeric = {tc:.6g} K, {len(flips)} sign change(s) on 100-point scan"
    assert report(4, ok, detail, elapsed, 5.0)


def test_criterion_5_nonlinear_phase(report):
    v_e = 1e5
    start = time.perf_counter()
    r = B.propagate_pair(4 * math.pi * v_e, v_e, n_cells=10_000)
    elapsed = time.perf_counter() - start
    checks = [abs(r.theta - math.pi) < 1e-9, abs(r.theta_grid - math.pi) < 1e-3,
              r.amplitude_deviation < 1e-10, r.amplitude_deviation_grid < 1e-4]
    detail = (f"theta err {abs(r.theta - math.pi):.1e} / grid {abs(r.theta_grid - math.pi):.1e}, "
              f"unitarity {r.amplitude_deviation:.1e} / {r.amplitude_deviation_grid:.1e}")
    assert report(5, all(checks), detail, elapsed, 5.0)


def test_criterion_6_gate_truth_table(report):
    start = time.perf_counter()
    cz = G.cz_from_phase(math.pi)
    outputs = [G.describe_output(out) for _, out in G.truth_table(cz)]
    exact = np.array_equal(cz, np.diag([1, 1, 1, -1]).astype(complex))
    ih = G.tensor(G.identity(), G.hadamard())
    dev = float(np.max(np.abs(G.compose([ih, cz, ih]) - CNOT)))
    elapsed = time.perf_counter() - start
    ok = exact and outputs == ["|00>", "|01>", "|10>", "-|11>"] and dev < 1e-12
    assert report(6, ok, f"outputs {outputs}, CNOT deviation {dev:.1e}", elapsed, 1.0)


def test_criterion_7_keldysh_suite(report):
    start = time.perf_counter()
    eps, eta = 0.05, 2e-3
    spec = K.lorentzian_spectral(eps, eta, -1.0, 1.0, 4001)
    w = spec.omega
    thermal = ThermalState(beta=40.0, mu=0.013)
    lesser, greater = K.fdt_components(spec, thermal)
    y = thermal.beta * (w - thermal.mu)
    fdt = float(np.max(np.abs(greater.values / lesser.values / np.exp(y) - 1.0)))
    ret = K.retarded_from_spectral(spec)
    exact = lorentzian_retarded(w, eps, eta)
    away = np.abs(w - eps) > 5 * eta
    hilbert = float(np.max((np.abs(ret.values - exact) / np.abs(exact))[away]))
    leakage = K.time_domain_retarded(ret).leakage
    elapsed = time.perf_counter() - start
    ok = fdt < 1e-12 and hilbert < 1e-3 and leakage < 1e-4
    detail = f"FDT {fdt:.1e}, Hilbert {hilbert:.1e}, causality leakage {leakage:.1e}"
    assert report(7, ok, detail, elapsed, 10.0)


def test_criterion_8_pair_propagator(report):
    start = time.perf_counter()
    params = WaveguideParams.from_ratio(4 * math.pi)
    thermal = ThermalState.from_kelvin(0.05)
    d = params.Delta
    eps, zeta = 0.3 * d, (0.8 + 0.05j) * d
    upsilon = T.pair_propagator_upsilon(eps, T.TMatrixQuery(zeta, params, thermal))
    errs = [abs(T.g2_retarded_numeric(eps, zeta, thermal, b * d) - upsilon) / abs(upsilon)
            for b in (4e-4, 2e-4, 1e-4)]
    elapsed = time.perf_counter() - start
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    ok = errs[-1] < 1e-2 and all(abs(r - 2.0) < 0.1 for r in ratios)
    detail = f"error {errs[-1]:.2e} at 1e-4 Delta, halving ratios {ratios[0]:.3f}, {ratios[1]:.3f}"
    assert report(8, ok, detail, elapsed, 30.0)


def test_criterion_9_molecule_wavefunction(report):
    start = time.perf_counter()
    n, box = 256, 40.0
    dx = box / n
    x = (np.arange(n) - n // 2) * dx
    chi = B.chi_delta_bound(1.0, x, K=2 * math.pi * 3 / box)
    direct = B.molecule_wavefunction(chi, x, x, form="direct")
    mom = B.molecule_wavefunction(chi, x, x, form="momentum")
    _, chi_k = chi.momentum()
    diff = float(np.max(np.abs(direct - mom)))
    norm = abs(chi.norm() - 1.0)
    pair_norm = abs(np.sum(np.abs(direct) ** 2) * dx * dx - 1.0)
    parseval = abs(np.sum(np.abs(chi_k) ** 2) - 1.0)
    elapsed = time.perf_counter() - start
    ok = diff < 1e-8 and max(norm, pair_norm, parseval) < 1e-8
    detail = f"direct vs momentum {diff:.1e}, norm {max(norm, pair_norm):.1e}, Parseval {parseval:.1e}"
    assert report(9, ok, detail, elapsed, 5.0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
