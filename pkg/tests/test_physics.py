import math

import numpy as np
import pytest

from photmol import physics as P
from photmol.errors import DistributionPoleError


def test_frequency_conventions():
    assert P.frequency_to_rad_per_s(40e9) == 40e9
    assert P.frequency_to_rad_per_s(40e9, "ordinary") == pytest.approx(2 * math.pi * 40e9, rel=1e-15)
    with pytest.raises(ValueError):
        P.frequency_to_rad_per_s(1.0, "radians")


def test_kelvin_round_trip():
    e = P.kelvin_to_rad_per_s(0.1)
    assert P.rad_per_s_to_kelvin(e) == pytest.approx(0.1, rel=1e-15)
    th = P.ThermalState.from_kelvin(0.25, mu=3.0)
    assert th.kelvin == pytest.approx(0.25, rel=1e-15)
    assert th.shifted(2).mu == 6.0 and th.shifted(2).beta == th.beta


@pytest.mark.parametrize("kw", [{"v_e": 0.0}, {"Delta": -1.0}, {"v": -1.0}])
def test_waveguide_validation(kw):
    with pytest.raises(ValueError):
        P.WaveguideParams(**kw)


def test_waveguide_coupling():
    p = P.WaveguideParams.from_ratio(4 * math.pi)
    assert p.g == pytest.approx(2.0, rel=1e-15)
    assert p.signed_v == -p.v
    assert P.WaveguideParams(attractive=False).signed_v > 0


def test_thermal_validation():
    with pytest.raises(ValueError):
        P.ThermalState(0.0)
    with pytest.raises(ValueError):
        P.ThermalState.from_kelvin(-1.0)


def test_dispersion_examples():
    p = P.WaveguideParams(omega0=3.0, v_e=1e5)
    assert P.dispersion(0.0, p) == 3.0
    q = P.WaveguideParams(omega0=0.0, v_e=1e5)
    assert P.dispersion(1e6, q) == pytest.approx(1e11, rel=1e-15)
    with pytest.raises(ValueError):
        P.dispersion(1.0, q, "up")


def test_dispersion_branch_symmetry():
    p = P.WaveguideParams(omega0=2.5e9, v_e=7e4)
    k = np.random.default_rng(3).normal(scale=1e6, size=200)
    np.testing.assert_array_equal(P.dispersion(k, p, P.RIGHT), P.dispersion(-k, p, P.LEFT))


def test_bose_examples():
    th = P.ThermalState(beta=1.0)
    assert P.bose_occupation(math.log(2.0), th) == pytest.approx(1.0, rel=1e-15)
    assert P.bose_occupation(800.0, th) == 0.0
    assert P.bose_occupation_bar(800.0, th) == 1.0
    with pytest.raises(DistributionPoleError):
        P.bose_occupation(0.0, th)
    with pytest.raises(DistributionPoleError):
        P.coth_factor(0.0, th)


def test_coth_examples():
    th = P.ThermalState(beta=1.0)
    assert P.coth_factor(2.0, th) == pytest.approx(1.3130352854993312, rel=1e-15)
    assert P.coth_factor(1e4, th) == 1.0


def test_coth_series_branch_matches_mpmath():
    mpmath = pytest.importorskip("mpmath")
    for x in [1e-9, 3e-7, 5e-5, 9.9e-5, -2e-5]:
        assert float(P.coth(x)) == pytest.approx(float(mpmath.coth(x)), rel=1e-14)


def test_identity_one_plus_two_f():
    rng = np.random.default_rng(1)
    beta = rng.uniform(0.1, 10.0, 400)
    mu = rng.uniform(-1.0, 1.0, 400)
    y = rng.uniform(0.01, 50.0, 400)
    for b, m, yy in zip(beta, mu, y):
        th = P.ThermalState(b, m)
        w = m + yy / b
        lhs = 1.0 + 2.0 * P.bose_occupation(w, th)
        assert abs(lhs - P.coth_factor(w, th)) < 1e-12 * max(1.0, abs(lhs))
