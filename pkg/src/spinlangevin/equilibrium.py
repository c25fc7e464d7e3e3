"""Equilibrium z-magnetisation from the Brillouin function."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import SpinSystem, ThermalEnv


class SignConvention(str, enum.Enum):
    ALIGNED_POSITIVE = "aligned_positive"  # mz = +g S B_S(x)
    ANTI_ALIGNED_NEGATIVE = "anti_aligned_negative"  # mz = -g S B_S(x)


# Taylor coefficients of coth(y) - 1/y in odd powers y, y^3, ..., y^11
_LANGEVIN_SERIES = (1 / 3, -1 / 45, 2 / 945, -1 / 4725, 2 / 93555, -1382 / 638512875)
_SERIES_CUTOFF = 0.1


def langevin(y):
    """Langevin function ``coth(y) - 1/y`` without cancellation near 0."""
    y = np.asarray(y, dtype=float)
    out = np.empty_like(y)
    small = np.abs(y) < _SERIES_CUTOFF
    ys = y[small]
    y2 = ys * ys
    acc = np.zeros_like(ys)
    for c in reversed(_LANGEVIN_SERIES):
        acc = acc * y2 + c
    out[small] = acc * ys
    yl = y[~small]
    out[~small] = 1.0 / np.tanh(yl) - 1.0 / yl
    return out if out.ndim else float(out)


def brillouin(S: float, x):
    """Brillouin function B_S(x), odd in x, B_S(0) = 0, B_S(inf) = 1.

    Written as ``a L(a x) - b L(b x)`` with ``a = (2S+1)/(2S)``, ``b = 1/(2S)``
    and L the Langevin function; the two 1/x poles of the coth form cancel
    analytically, so small x needs no special casing beyond L's series.
    """
    a = (2 * S + 1) / (2 * S)
    b = 1 / (2 * S)
    x = np.asarray(x, dtype=float)
    # clip: rounding can push the saturated value a hair past 1
    out = np.clip(a * langevin(a * x) - b * langevin(b * x), -1.0, 1.0)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class EquilibriumResult:
    x: float
    bs: float
    mz: float


def equilibrium_mz(sys: SpinSystem, env: ThermalEnv,
                   sign: SignConvention = SignConvention.ALIGNED_POSITIVE) -> EquilibriumResult:
    """Gibbs-averaged moment along the field, with ``x = S H0 / (k_B T)``."""
    x = sys.S * sys.H0 / (env.kB * env.T)
    bs = float(brillouin(sys.S, x))
    mz = sys.g * sys.S * bs
    if SignConvention(sign) is SignConvention.ANTI_ALIGNED_NEGATIVE:
        mz = -mz
    return EquilibriumResult(x=x, bs=bs, mz=mz)
