"""Fixed-step RK4 integration of the deterministic mean-moment equations.

This module deliberately shares no code with the closed forms so it can act
as an independent check on them.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import BathKind, BathSpec, SpinSystem, TimeGrid, Trajectory
from .errors import DomainError, StepError, StiffnessError


class MeanOdeKind(str, enum.Enum):
    OHMIC_FIRST_ORDER = "ohmic_first_order"
    DRUDE_SECOND_ORDER = "drude_second_order"


@dataclass(frozen=True)
class MeanOdeProblem:
    kind: MeanOdeKind
    sys: SpinSystem
    bath: BathSpec
    mz: float
    mx0: float
    my0: float
    dmx0: float | None = None
    dmy0: float | None = None
    # sign of the mz-ordering term in the y equation; -1 makes it field-like
    # (same sense as H0), +1 flips it
    cross_sign: float = -1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", MeanOdeKind(self.kind))
        want = BathKind.OHMIC if self.kind is MeanOdeKind.OHMIC_FIRST_ORDER else BathKind.DRUDE
        if self.bath.kind is not want:
            raise DomainError(f"{self.kind.value} needs a {want.value} bath")

    def initial_slopes(self) -> tuple[float, float]:
        """Drude start: first-order rotation with the memory integral still empty."""
        if self.dmx0 is not None and self.dmy0 is not None:
            return self.dmx0, self.dmy0
        g, H0 = self.sys.g, self.sys.H0
        w = g * H0 + 2.0 * g * self.bath.gamma * self.mz / self.bath.tau
        return w * self.my0, -w * self.mx0


def rk4(f: Callable[[float, np.ndarray], np.ndarray], y0, t) -> np.ndarray:
    """Classical RK4 over the sample times ``t`` (monotone, either direction)."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y0, dtype=float).copy()
    out = np.empty((t.size,) + y.shape)
    out[0] = y
    for i in range(t.size - 1):
        ti, h = t[i], t[i + 1] - t[i]
        k1 = f(ti, y)
        k2 = f(ti + h / 2, y + h / 2 * k1)
        k3 = f(ti + h / 2, y + h / 2 * k2)
        k4 = f(ti + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[i + 1] = y
    return out


def rk4_linear(J: np.ndarray, y0, grid: TimeGrid) -> np.ndarray:
    """RK4 for the autonomous linear system y' = J y on a uniform grid.

    For linear systems the four RK stages collapse into the fixed matrix
    I + hJ + (hJ)^2/2 + (hJ)^3/6 + (hJ)^4/24, applied once per step. The
    result is identical to :func:`rk4` up to rounding.
    """
    hJ = grid.dt * np.asarray(J, dtype=float)
    step = np.eye(hJ.shape[0])
    term = np.eye(hJ.shape[0])
    for k in range(1, 5):
        term = term @ hJ / k
        step = step + term
    out = np.empty((grid.n, hJ.shape[0]))
    y = np.asarray(y0, dtype=float)
    out[0] = y
    for i in range(1, grid.n):
        y = step @ y
        out[i] = y
    return out


def ohmic_matrix(p: MeanOdeProblem) -> np.ndarray:
    """Explicit 2x2 generator J with d(mx, my)/dt = J (mx, my).

    The mean equations carry time derivatives on both sides,
    L (mx', my') = R (mx, my); L is inverted once here.
    """
    g, H0 = p.sys.g, p.sys.H0
    gamma, Omega, mz = p.bath.gamma, p.bath.Omega, p.mz
    k = 2.0 * gamma * g * mz
    order = 2.0 * Omega * gamma * g * mz
    lhs = np.array([[1.0, -k], [k, 1.0]])
    rhs = np.array([[0.0, g * H0 + order], [-g * H0 + p.cross_sign * order, 0.0]])
    if abs(np.linalg.det(lhs)) < 1e-12:
        raise StiffnessError("derivative-coupling matrix is singular")
    return np.linalg.solve(lhs, rhs)


def ohmic_rhs(p: MeanOdeProblem):
    J = ohmic_matrix(p)
    return lambda t, y: J @ y


def drude_matrix(p: MeanOdeProblem) -> tuple[np.ndarray, float]:
    """Generator of the state (mx, my, mx', my') and its fastest rate max(|b|, a, sqrt|c|)."""
    g, H0, gamma, tau, mz = p.sys.g, p.sys.H0, p.bath.gamma, p.bath.tau, p.mz
    a = 1.0 / tau
    b = g * (H0 + 3.0 * gamma * mz / tau)
    c = (g / tau) * (H0 + 2.0 * gamma * mz / tau)
    J = np.array([
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, c, -a, b],
        [-c, 0.0, -b, -a],
    ])
    return J, max(abs(b), a, math.sqrt(abs(c)))


def drude_rhs(p: MeanOdeProblem):
    J, _ = drude_matrix(p)
    return lambda t, y: J @ y


def _wrap(p: MeanOdeProblem, grid: TimeGrid, xy: np.ndarray) -> Trajectory:
    m = np.column_stack([xy[:, 0], xy[:, 1], np.full(grid.n, p.mz)])
    return Trajectory(grid, m)


def integrate_ohmic_mean(p: MeanOdeProblem, grid: TimeGrid) -> Trajectory:
    if p.kind is not MeanOdeKind.OHMIC_FIRST_ORDER:
        raise DomainError("integrate_ohmic_mean needs an Ohmic first-order problem")
    xy = rk4_linear(ohmic_matrix(p), [p.mx0, p.my0], grid)
    return _wrap(p, grid, xy)


def integrate_drude_mean(p: MeanOdeProblem, grid: TimeGrid) -> Trajectory:
    if p.kind is not MeanOdeKind.DRUDE_SECOND_ORDER:
        raise DomainError("integrate_drude_mean needs a Drude second-order problem")
    J, rate = drude_matrix(p)
    if grid.dt * rate >= 0.1:
        raise StepError(f"dt*rate = {grid.dt * rate:.3g} >= 0.1")
    state = rk4_linear(J, [p.mx0, p.my0, *p.initial_slopes()], grid)
    return _wrap(p, grid, state)
