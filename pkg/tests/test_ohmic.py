import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinlangevin import (BathSpec, DegenerateError, DomainError, SpinSystem, ThermalEnv,
                          autocorrelation, classical_autocorrelation, derive_ohmic, mean_moments,
                          response_family, response_imag_omega, response_real_omega)
from spinlangevin.ohmic import complex_tanh

from conftest import regime

mp.mp.dps = 50


def test_reference_parameters_against_50_digit_evaluation():
    sys, bath, env, mz = regime("hot_weak")
    d = derive_ohmic(sys, bath, mz)
    g, H0, gam, Om = (mp.mpf(v) for v in (1, 8, 5, 10**6))
    m = mp.mpf("0.5") * mp.tanh(mp.mpf("0.4"))
    den = 1 + 4 * m**2 * g**2 * gam**2
    w_ref = g * (H0 + 2 * m * Om * gam) / den
    tau_ref = den / (2 * m * gam * g**2 * (H0 + 2 * m * Om * gam))
    assert d.omega_tilde == pytest.approx(float(w_ref), rel=1e-14)
    assert d.tau_R == pytest.approx(float(tau_ref), rel=1e-14)
    assert d.A == pytest.approx(1 / d.tau_R, rel=1e-15)
    assert d.B == d.omega_tilde


def test_initial_condition_and_phase():
    sys, bath, env, mz = regime("cold_weak")
    d = derive_ohmic(sys, bath, mz)
    mx, my = mean_moments(d, 0.0)
    assert mx == pytest.approx(math.sqrt(3 / 5) * d.mxy, rel=1e-15)
    assert my == pytest.approx(math.sqrt(2 / 5) * d.mxy, rel=1e-15)
    assert math.cos(d.phi) ** 2 + math.sin(d.phi) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_undamped_limit_is_larmor_precession():
    sys = SpinSystem(0.5, 1.3, 2.0)
    d = derive_ohmic(sys, BathSpec.ohmic(0.0, 1e3), 0.3, 0.5, 0.0)
    assert d.omega_tilde == pytest.approx(1.3 * 2.0) and d.tau_R == math.inf
    t = np.linspace(0, 20, 301)
    mx, my = mean_moments(d, t)
    assert np.allclose(mx, 0.5 * np.cos(2.6 * t), atol=1e-15)
    assert np.allclose(my, -0.5 * np.sin(2.6 * t), atol=1e-15)


def test_zero_moment_gives_infinite_relaxation():
    sys = SpinSystem(0.5, 1.0, 3.0)
    d = derive_ohmic(sys, BathSpec.ohmic(0.5, 10.0), 0.0)
    assert d.A == 0.0 and d.tau_R == math.inf and d.B == pytest.approx(3.0)


def test_initial_amplitude_bound():
    sys = SpinSystem(0.5)
    with pytest.raises(DomainError):
        derive_ohmic(sys, BathSpec.ohmic(1.0, 1.0), 0.1, 0.9, 0.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 2.0), st.floats(0.0, 10.0), st.floats(0.0, 0.8), st.floats(0.0, 6.3))
def test_transverse_norm_decays_exactly(gamma, H0, frac, phase):
    sys = SpinSystem(0.5, 1.0, H0)
    mz = frac * sys.total_moment
    amp = math.sqrt(sys.total_moment**2 - mz**2)
    d = derive_ohmic(sys, BathSpec.ohmic(gamma, 3.0), mz, amp * math.cos(phase), amp * math.sin(phase))
    t = np.linspace(0, 5, 50)
    mx, my = mean_moments(d, t)
    assert np.allclose(mx**2 + my**2, amp**2 * np.exp(-2 * d.A * t), rtol=1e-12, atol=1e-300)


def test_autocorrelation_values(regime_name):
    sys, bath, env, mz = regime(regime_name)
    d = derive_ohmic(sys, bath, mz)
    M = sys.total_moment
    assert autocorrelation(d, M, 0.0) == pytest.approx(M**2, rel=1e-15)
    half = math.pi / d.omega_tilde
    assert autocorrelation(d, M, half) == pytest.approx(
        mz**2 - (M**2 - mz**2) * math.exp(-math.pi / (d.omega_tilde * d.tau_R)), rel=1e-12)
    t = np.linspace(0, 30 * d.tau_R, 2000)
    assert np.all(np.abs(autocorrelation(d, M, t) - mz**2)
                  <= (M**2 - mz**2) * np.exp(-t / d.tau_R) * (1 + 1e-12) + 1e-15)
    assert autocorrelation(d, M, 60 * d.tau_R) == pytest.approx(mz**2, abs=1e-20)


def test_classical_relaxation_time():
    sys = SpinSystem(0.5, 1.0, 1.0)
    c = classical_autocorrelation(sys, 0.01, 0.19, 0.8, np.array([0.0, 263.15789473684211]))
    assert c[0] == pytest.approx(0.64)
    tau = 1 / (2 * 0.19 * 0.01)
    assert tau == pytest.approx(263.16, abs=0.01)
    assert c[1] == pytest.approx(0.19**2 + (0.64 - 0.19**2) * math.exp(-1) * math.cos(tau), rel=1e-12)
    with pytest.raises(DegenerateError):
        classical_autocorrelation(sys, 0.0, 0.19, 0.8, 0.0)


def test_classical_limit_agrees_with_full_form_for_tiny_damping():
    sys = SpinSystem(0.5, 1.0, 1.0)
    mz, M = 0.19, sys.total_moment
    for gamma in (1e-4, 1e-5):
        # Omega enters only through 2 mz Omega gamma; the smallest admissible cutoff isolates the gamma^2 terms
        d = derive_ohmic(sys, BathSpec.ohmic(gamma, 1e-300), mz)
        t = np.linspace(0, 200, 400)
        full = autocorrelation(d, M, t)
        cl = classical_autocorrelation(sys, gamma, mz, M, t)
        assert np.max(np.abs(full - cl)) / M**2 <= 1e-6


def test_stable_complex_tanh():
    z = np.array([0.3 + 0.2j, -2 + 5j, 1e-3 - 1e-3j, 4 + 1.5j])
    assert np.allclose(complex_tanh(z), np.tanh(z), rtol=1e-14)
    big = complex_tanh(np.array([1e5 + 0.3j, -1e5 + 2j]))
    assert np.all(np.isfinite(big)) and np.allclose(big, [1, -1])


def test_response_at_zero_time(regime_name):
    sys, bath, env, mz = regime(regime_name)
    d = derive_ohmic(sys, bath, mz)
    fam = response_family(d, env, np.array([0.0]))
    fa, fb = 4 * d.A / env.omega_th, 4 * d.B / env.omega_th
    # the cosh may overflow, so compare with the ratio taken through mpmath
    ref = -2 * d.mxy**2 * mp.sin(fa) / (mp.cos(fa) + mp.cosh(fb))
    assert fam.r_total[0] == pytest.approx(float(ref), rel=1e-12, abs=1e-300)


def test_response_parts_and_total_are_tied_by_a_sign(regime_name):
    sys, bath, env, mz = regime(regime_name)
    d = derive_ohmic(sys, bath, mz)
    t = np.linspace(0, 5 * d.tau_R, 400)
    fam = response_family(d, env, t)
    # R''(t) = i c(t) with c = -R'(t); the explicit total is -(R' + i R'')
    assert np.allclose(fam.r_double_prime, -fam.r_prime, rtol=1e-12, atol=1e-14)
    assert np.allclose(fam.r_total, -(fam.r_prime - fam.r_double_prime), rtol=1e-10, atol=1e-14)


def test_total_response_envelope(regime_name):
    sys, bath, env, mz = regime(regime_name)
    d = derive_ohmic(sys, bath, mz)
    t = np.linspace(0, 20 * d.tau_R, 3000)
    fam = response_family(d, env, t)
    fa, fb = 4 * d.A / env.omega_th, 4 * d.B / env.omega_th
    K = 2 * d.mxy**2 * float((1 + mp.sinh(fb)) / (mp.cos(fa) + mp.cosh(fb)))
    assert np.all(np.abs(fam.r_total) <= K * np.exp(-d.A * t) * (1 + 1e-12))


def test_response_real_omega_symmetry_and_decay(regime_name):
    sys, bath, env, mz = regime(regime_name)
    d = derive_ohmic(sys, bath, mz)
    w = np.linspace(0, 5 * d.B, 101)
    assert np.allclose(response_real_omega(d, env, w), response_real_omega(d, env, -w),
                       rtol=1e-10, atol=0)
    far = response_real_omega(d, env, np.array([1e3, 2e3]) * (d.A + d.B)).real
    assert far[0] / far[1] == pytest.approx(4.0, rel=1e-3)


def test_real_axis_pole_is_rejected():
    sys = SpinSystem(0.5, 1.0, 2.0)
    d = derive_ohmic(sys, BathSpec.ohmic(0.0, 1.0), 0.2)
    with pytest.raises(DegenerateError):
        response_real_omega(d, ThermalEnv(1.0), np.array([d.B]))


def test_imaginary_spectrum_is_odd_and_zero_at_origin(regime_name):
    sys, bath, env, mz = regime(regime_name)
    d = derive_ohmic(sys, bath, mz)
    w = np.linspace(0, 3 * d.B, 151)
    assert np.array_equal(response_imag_omega(d, env, -w), -response_imag_omega(d, env, w))
    assert response_imag_omega(d, env, 0.0) == 0.0
