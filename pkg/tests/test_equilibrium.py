
import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from spinlangevin import SignConvention, SpinSystem, ThermalEnv, brillouin, equilibrium_mz, langevin

mp.mp.dps = 50


def brillouin_mp(S, x):
    """Coth form at 50 digits, used as the reference."""
    S, x = mp.mpf(S), mp.mpf(x)
    if x == 0:
        return mp.mpf(0)
    a = (2 * S + 1) / (2 * S)
    b = 1 / (2 * S)
    return a * mp.coth(a * x) - b * mp.coth(b * x)


@pytest.mark.parametrize("S", [0.5, 1.0, 1.5, 3.5, 10.0, 1e4])
@pytest.mark.parametrize("x", [1e-9, 1e-5, 1e-3, 0.05, 0.0999, 0.1001, 0.4, 1.0, 5.0, 30.0, -2.0])
def test_brillouin_matches_high_precision(S, x):
    ref = float(brillouin_mp(S, x))
    assert brillouin(S, x) == pytest.approx(ref, rel=1e-13, abs=1e-300)


def test_spin_half_is_tanh():
    x = np.linspace(-6, 6, 101)
    assert np.allclose(brillouin(0.5, x), np.tanh(x), rtol=1e-14, atol=1e-16)
    assert brillouin(0.5, 5.0) == pytest.approx(0.999909, abs=5e-7)


def test_limits():
    assert brillouin(2.5, 0.0) == 0.0
    assert brillouin(0.5, 50.0) == pytest.approx(1.0, abs=1e-15)


@given(st.sampled_from([0.5, 1, 2.5, 100]), st.floats(1e-6, 50))
def test_odd_and_bounded(S, x):
    b = brillouin(S, x)
    assert 0 < b <= 1
    assert brillouin(S, -x) == -b


@pytest.mark.parametrize("S", [0.5, 2.0, 50.0])
def test_strictly_increasing(S):
    x = np.geomspace(1e-6, 8, 4000)
    assert np.all(np.diff(brillouin(S, x)) > 0)


def test_langevin_small_argument_branch_is_continuous():
    y = np.array([0.0999999999, 0.1, 0.1000000001])
    ref = [float(mp.coth(mp.mpf(v)) - 1 / mp.mpf(v)) for v in y]
    assert np.allclose(langevin(y), ref, rtol=1e-15)


def test_equilibrium_reference_point():
    res = equilibrium_mz(SpinSystem(0.5, 1.0, 8.0), ThermalEnv(10.0))
    assert res.x == pytest.approx(0.4)
    assert res.mz == pytest.approx(float(mp.mpf("0.5") * mp.tanh(mp.mpf("0.4"))), rel=1e-15)
    assert res.mz == pytest.approx(0.18998, abs=1e-5)


def test_cold_saturation_and_zero_field():
    res = equilibrium_mz(SpinSystem(0.5, 1.0, 0.1), ThermalEnv(0.01))
    assert res.x == pytest.approx(5.0)
    assert res.mz == pytest.approx(0.49995, abs=1e-5)
    assert equilibrium_mz(SpinSystem(0.5, 1.0, 0.0), ThermalEnv(1.0)).mz == 0.0


def test_sign_flag():
    s, env = SpinSystem(1.5, 2.0, 1.0), ThermalEnv(0.7)
    up = equilibrium_mz(s, env)
    down = equilibrium_mz(s, env, SignConvention.ANTI_ALIGNED_NEGATIVE)
    assert down.mz == -up.mz and abs(up.mz) <= s.g * s.S


def test_high_temperature_series_holds_below_onset():
    # the cubic term makes |B - (S+1)x/(3S)| ~ c x^3; relative 1e-8 holds once x is small enough
    for S in (0.5, 1.0, 5.0, 1e4):
        x = np.geomspace(1e-9, 1e-4, 30)
        lin = (S + 1) * x / (3 * S)
        assert np.all(np.abs(brillouin(S, x) - lin) <= 1e-8 * x)
