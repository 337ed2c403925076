import math

import numpy as np
import pytest

from photmol import keldysh as K
from photmol.errors import DistributionPoleError, GridCoverageError
from photmol.physics import ThermalState

from oracles import lorentzian_retarded, lorentzian_retarded_time

ETA = 2e-3
N = 4001


def lorentz(eps=0.0, eta=ETA, lo=-1.0, hi=1.0, n=N):
    return K.lorentzian_spectral(eps, eta, lo, hi, n)


def two_peaks(w):
    a1 = 0.6 * 2 * 2e-3 / ((w + 0.02) ** 2 + 2e-3 ** 2)
    a2 = 0.4 * 2 * 3e-3 / ((w - 0.02) ** 2 + 3e-3 ** 2)
    return a1 + a2


def test_grid_basics():
    g = K.SpectralGrid.empty(-1.0, 1.0, 5)
    assert g.d_omega == 0.5
    np.testing.assert_array_equal(g.omega, [-1, -0.5, 0, 0.5, 1])
    with pytest.raises(ValueError):
        K.SpectralGrid(1.0, -1.0, 5, np.zeros(5))
    with pytest.raises(ValueError):
        K.SpectralGrid(-1.0, 1.0, 5, np.zeros(4))


def test_lorentzian_peak_and_default_width():
    sp = K.lorentzian_spectral(0.0, None, -1.0, 1.0, 2001)
    assert sp.values[1000].real == pytest.approx(2.0 / 2e-3, rel=1e-15)


def test_lorentzian_mass_concentrates_as_width_shrinks():
    sp = K.lorentzian_spectral(0.0, 1e-7, -1.0, 1.0, 2001)
    v = sp.values.real
    assert v[1000] * sp.d_omega / (2 * math.pi) / sp.integral().real > 0.99


def test_lorentzian_normalization():
    eta = 1e-3 * 2.0
    sp = K.lorentzian_spectral(0.0, eta, -1.0, 1.0, N)
    inside = 2.0 * math.atan(1.0 / eta) / math.pi
    assert abs(sp.integral().real - inside) < 1e-4
    tails = K.lorentzian_tail_mass(0.0, eta, -1.0, 1.0)
    assert abs(sp.integral().real + tails - 1.0) < 1e-4


def test_lorentzian_coverage_error():
    with pytest.raises(GridCoverageError):
        K.lorentzian_spectral(0.99, 0.05, -1.0, 1.0, 1001)
    with pytest.raises(ValueError):
        K.lorentzian_spectral(0.0, 0.0)


def test_retarded_matches_analytic(backend):
    sp = lorentz(0.1)
    ret = K.retarded_from_spectral(sp)
    w = sp.omega
    exact = lorentzian_retarded(w, 0.1, ETA)
    rel = np.abs(ret.values - exact) / np.abs(exact)
    assert rel[np.abs(w - 0.1) > 5 * ETA].max() < 1e-3
    # the whole grid, peak included, is far better than required
    assert rel.max() < 5e-5


def test_retarded_with_extra_broadening(backend):
    sp = lorentz()
    ret = K.retarded_from_spectral(sp, eta=1e-3)
    w = sp.omega
    exact = lorentzian_retarded(w, 0.0, ETA + 1e-3)
    rel = np.abs(ret.values - exact) / np.abs(exact)
    assert rel[np.abs(w) > 5 * ETA].max() < 1e-3


def test_principal_value_imaginary_part_is_minus_half_spectral():
    sp = lorentz(0.3)
    ret = K.retarded_from_spectral(sp)
    np.testing.assert_allclose(ret.values.imag, -0.5 * sp.values.real, rtol=0, atol=1e-12 * sp.values.real.max())


def test_even_spectral_gives_odd_real_part():
    sp = lorentz(0.0)
    re = K.retarded_from_spectral(sp).values.real
    scale = np.abs(re).max()
    assert abs(re[N // 2]) < 1e-12 * scale
    np.testing.assert_allclose(re, -re[::-1], atol=1e-11 * scale)


def test_kramers_kronig_closure(backend):
    sp = lorentz(-0.2)
    ret = K.retarded_from_spectral(sp)
    adv = K.advanced_from_spectral(sp)
    assert np.max(np.abs(1j * (ret.values - adv.values) - sp.values)) < 1e-6


def test_singular_part_added_to_retarded_and_advanced_only():
    sp = lorentz()
    shifted = sp.with_values(sp.values, singular=5.0)
    np.testing.assert_allclose(K.retarded_from_spectral(shifted).values - K.retarded_from_spectral(sp).values, 5.0)
    np.testing.assert_allclose(K.advanced_from_spectral(shifted).values - K.advanced_from_spectral(sp).values, 5.0)
    lesser, greater = K.fdt_components(shifted, ThermalState(3.0, -2.0))
    assert lesser.singular == 0 and greater.singular == 0


def test_retarded_rejects_bad_inputs():
    sp = lorentz()
    with pytest.raises(ValueError):
        K.retarded_from_spectral(sp, eta=-1.0)
    with pytest.raises(ValueError):
        K.retarded_from_spectral(sp.with_values(sp.values * 1j))
    broad = sp.with_values(np.exp(-sp.omega ** 2 / 0.5))
    with pytest.raises(GridCoverageError):
        K.retarded_from_spectral(broad)


@pytest.mark.parametrize("mult", [1, 2])
def test_fdt_ratio_and_sum_rule(mult):
    th = ThermalState(beta=40.0, mu=0.013)
    sp = lorentz(0.05, n=N + 1)
    lesser, greater = K.fdt_components(sp, th, mult)
    y = th.beta * (sp.omega - mult * th.mu)
    ok = np.abs(y) < 500
    ratio = greater.values[ok] / lesser.values[ok]
    np.testing.assert_allclose(ratio, np.exp(y[ok]), rtol=1e-12)
    np.testing.assert_allclose(1j * (greater.values - lesser.values), sp.values, rtol=1e-12, atol=0)


def test_fdt_zero_temperature_limit():
    th = ThermalState(beta=1e6, mu=0.0)
    sp = lorentz(0.2, n=N + 1)
    lesser, _ = K.fdt_components(sp, th)
    above = sp.omega > 0.01
    assert np.all(lesser.values[above] == 0)


def test_fdt_distribution_pole():
    sp = lorentz(0.2)
    th = ThermalState(beta=5.0, mu=0.0)
    with pytest.raises(DistributionPoleError):
        K.fdt_components(sp, th)
    lesser, greater = K.fdt_components(sp, th, mask_pole=True)
    mid = N // 2
    assert np.isnan(lesser.values[mid]) and np.isnan(greater.values[mid])
    assert np.all(np.isfinite(np.delete(lesser.values, mid)))
    with pytest.raises(ValueError):
        K.fdt_components(sp, th, 3)


def test_time_domain_analytic_lorentzian():
    sp = lorentz(0.05)
    ret = sp.with_values(lorentzian_retarded(sp.omega, 0.05, ETA))
    series = K.time_domain_retarded(ret)
    assert series.leakage < 1e-5
    window = np.abs(series.t) < 3.0 / ETA
    exact = lorentzian_retarded_time(series.t, 0.05, ETA)
    assert np.max(np.abs(series.values - exact)[window]) < 1e-4


def test_time_domain_reconstructed_lorentzian(backend):
    series = K.time_domain_retarded(K.retarded_from_spectral(lorentz(0.05)))
    assert series.leakage < 1e-4


def test_time_domain_two_peaks():
    sp = lorentz()
    w = sp.omega
    analytic = 0.6 / (w + 0.02 + 2e-3j) + 0.4 / (w - 0.02 + 3e-3j)
    assert K.time_domain_retarded(sp.with_values(analytic)).leakage < 1e-4
    rebuilt = K.retarded_from_spectral(sp.with_values(two_peaks(w)))
    assert K.time_domain_retarded(rebuilt).leakage < 1e-4


def test_time_domain_zero_input():
    series = K.time_domain_retarded(K.SpectralGrid.empty(-1.0, 1.0, 101))
    assert not np.any(series.values)
    assert series.leakage == 0.0


def test_time_domain_edge_error():
    sp = lorentz()
    # a constant offset is not a decaying single pole: the edges cannot be cleaned
    bad = sp.with_values(lorentzian_retarded(sp.omega, 0.0, ETA) + 0.3)
    with pytest.raises(GridCoverageError):
        K.time_domain_retarded(bad)


def test_csv_round_trip(tmp_path):
    sp = lorentz(n=101).with_values(lorentz(n=101).values * (1 + 0.5j))
    path = tmp_path / "grid.csv"
    sp.write_csv(path, header_lines=["eta = 0.002"])
    text = path.read_text()
    assert text.startswith("# eta = 0.002\nomega,re,im\n")
    back = K.SpectralGrid.read_csv(path)
    np.testing.assert_array_equal(back.values, sp.values)
    np.testing.assert_array_equal(back.omega, sp.omega)
