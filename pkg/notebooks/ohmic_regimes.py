# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Ohmic bath: four regimes
#
# A spin 1/2 with g = 1 in a field along z, coupled to an Ohmic bath with a
# very high cutoff. We look at hot and cold baths, each with weak and strong
# friction, and tabulate the transverse moments, the autocorrelation and the
# response function.

# %%
import numpy as np

from spinlangevin import (BathSpec, SpinSystem, ThermalEnv, autocorrelation, derive_ohmic,
                          equilibrium_mz, mean_moments, response_family)

regimes = {
    "hot, weak": (10.0, 8.0, 5.0),
    "hot, strong": (10.0, 8.0, 20.0),
    "cold, weak": (0.01, 0.1, 0.05),
    "cold, strong": (0.01, 0.1, 5.0),
}

# %% [markdown]
# The equilibrium moment along the field sets both the frequency shift and the
# damping, so start there.

# %%
for label, (T, H0, gamma) in regimes.items():
    sys = SpinSystem(0.5, 1.0, H0)
    env = ThermalEnv(T)
    mz = equilibrium_mz(sys, env).mz
    d = derive_ohmic(sys, BathSpec.ohmic(gamma, 1e6), mz)
    kind = "underdamped" if d.omega_tilde > 1 / d.tau_R else "overdamped"
    print(f"{label:13s} mz={mz:.4f}  omega~={d.omega_tilde:.4g}  tau_R={d.tau_R:.4g}  {kind}")

# %% [markdown]
# Sample each regime over five relaxation times.

# %%
for label, (T, H0, gamma) in regimes.items():
    sys = SpinSystem(0.5, 1.0, H0)
    env = ThermalEnv(T)
    mz = equilibrium_mz(sys, env).mz
    d = derive_ohmic(sys, BathSpec.ohmic(gamma, 1e6), mz)
    t = np.linspace(0, 5 * d.tau_R, 6)
    mx, my = mean_moments(d, t)
    c = autocorrelation(d, sys.total_moment, t)
    r = response_family(d, env, t).r_total
    print(label)
    for row in zip(t / d.tau_R, mx, my, c, r):
        print("  t/tau_R={:4.1f}  mx={:+.4f}  my={:+.4f}  C={:.4f}  R={:+.3e}".format(*row))

# %% [markdown]
# The autocorrelation always starts at M^2 = 3/4 and settles at mz^2, the
# part of the moment that does not precess.
