# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Fluctuation-dissipation and Kramers-Kronig checks
#
# The dissipative response follows from the correlation spectrum through the
# fluctuation-dissipation relation, and the reactive part follows from the
# dissipative one by a principal-value transform. Both routes are run
# numerically here and set beside the closed forms.

# %%
import numpy as np

from spinlangevin import (BathSpec, FrequencyGrid, Series, SpinSystem, ThermalEnv, TimeGrid,
                          autocorrelation, derive_ohmic, equilibrium_mz, response_family,
                          response_imag_omega, response_real_omega)
from spinlangevin.spectral import imag_response_time, kramers_kronig_real

cases = {"hot": (10.0, 8.0, 5.0), "cold": (0.01, 0.1, 0.05)}


def setup(T, H0, gamma):
    sys = SpinSystem(0.5, 1.0, H0)
    env = ThermalEnv(T)
    mz = equilibrium_mz(sys, env).mz
    return sys, env, mz, derive_ohmic(sys, BathSpec.ohmic(gamma, 1e6), mz)


# %% [markdown]
# Time domain: subtract mz^2, transform, multiply by tanh and transform back.
# The window is 400 relaxation times so the slow 1/t tail of the tanh step
# does not alias.

# %%
for label, params in cases.items():
    sys, env, mz, d = setup(*params)
    n = 2**16
    grid = TimeGrid(0.0, 400 * d.tau_R / n, n)
    c = Series(grid, autocorrelation(d, sys.total_moment, grid.times) - mz * mz)
    numeric = imag_response_time(c, env).imag
    closed = response_family(d, env, grid.times).r_double_prime
    keep = grid.times <= 3 * d.tau_R
    err = np.linalg.norm(numeric[keep] - closed[keep]) / np.linalg.norm(closed[keep])
    print(f"{label}: relative L2 gap between FFT route and closed form {err:.3g}")

# %% [markdown]
# Frequency domain: principal-value transform of the dissipative part on a
# grid spanning twenty times the precession frequency.

# %%
for label, params in cases.items():
    sys, env, mz, d = setup(*params)
    W = 10 * d.B
    fg = FrequencyGrid(-W, 2 * W / 8000, 8001)
    x = np.linspace(-2 * d.B, 2 * d.B, 40)
    kk = kramers_kronig_real(Series(fg, response_imag_omega(d, env, fg.omegas)), x)
    closed = response_real_omega(d, env, x).real
    peak = np.argmax(np.abs(kk))
    print(f"{label}: transform {kk[peak]:.4g} vs closed form {closed[peak]:.4g} "
          f"at omega = {x[peak]:.4g}")
