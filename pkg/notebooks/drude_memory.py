# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Drude bath: effect of the memory time
#
# With an exponential memory kernel the mean transverse moment obeys a
# second-order equation. Compare a short and a long memory time at the same
# coupling, and check the closed form against direct integration.

# %%
import math

import numpy as np

from spinlangevin import (BathSpec, SpinSystem, ThermalEnv, TimeGrid, derive_drude,
                          drude_mean_moments, equilibrium_mz, transverse_moment)
from spinlangevin.ode import MeanOdeKind, MeanOdeProblem, drude_matrix, integrate_drude_mean
from spinlangevin.ohmic import default_initial_transverse

# %%
sys = SpinSystem(0.5, 1.0, 8.0)
env = ThermalEnv(10.0)
mz = equilibrium_mz(sys, env).mz
mx0, my0 = default_initial_transverse(transverse_moment(sys, mz))

for tau in (0.1, 5.0):
    dc = derive_drude(sys, BathSpec.drude(5.0, tau), mz)
    r1, r2 = dc.roots
    print(f"tau={tau}: roots {r1:.4g}, {r2:.4g}; slowest decay rate {dc.slowest_rate:.4g}")

# %% [markdown]
# A longer memory leaves the precession much less damped. Check the closed
# form against a fixed-step integration of the same equations.

# %%
for tau in (0.1, 5.0):
    bath = BathSpec.drude(5.0, tau)
    dc = derive_drude(sys, bath, mz)
    p = MeanOdeProblem(MeanOdeKind.DRUDE_SECOND_ORDER, sys, bath, mz, mx0, my0)
    _, rate = drude_matrix(p)
    dt = 0.02 / rate
    grid = TimeGrid(0.0, dt, math.ceil(10 * tau / dt) + 1)
    tr = integrate_drude_mean(p, grid)
    mx, my = drude_mean_moments(dc, mx0, my0, grid.times)
    err = np.max(np.hypot(tr.mx - mx, tr.my - my)) / np.max(np.hypot(mx, my))
    print(f"tau={tau}: {grid.n} steps, max relative deviation {err:.2e}")
