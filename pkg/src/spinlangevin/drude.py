"""Closed-form results for a spin coupled to a Drude (exponential-memory) bath.

With z = <Mx> + i<My> the two second-order mean equations collapse into one
complex equation

    z'' + (a + i b) z' + i c z = 0,

    a = 1/tau,  b = g (H0 + 3 gamma mz / tau),  c = (g/tau)(H0 + 2 gamma mz / tau).

Its characteristic roots are s = (-(a + i b) +- r1)/2 with
r1 = sqrt((a + i b)^2 - 4 i c).  The conjugate equation, with a - i b and
r2 = sqrt((a - i b)^2 + 4 i c), is solved independently so that the real
projections of the two branches can be checked against each other.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .core import BathKind, BathSpec, SpinSystem
from .errors import DomainError, NumericalError

#: below this |r| the two roots are treated as a double root
DOUBLE_ROOT_TOL = 1e-8
#: accepted imaginary residue relative to the branch magnitudes
BRANCH_TOL = 1e-9


@dataclass(frozen=True)
class DrudeCoefficients:
    a: float
    b: float
    c: float
    r1: complex
    r2: complex
    q1: complex  # initial-slope coefficient of branch 1 under the first-order start
    q2: complex
    phi1: complex  # artanh(q1/r1): the phase in cosh(r1 t/2 + phi1)
    phi2: complex

    @property
    def start_rate(self) -> float:
        """c/a = g(H0 + 2 gamma mz/tau): rotation rate of the first-order start."""
        return self.c / self.a

    @property
    def roots(self) -> tuple[complex, complex]:
        s = -(self.a + 1j * self.b)
        return (s + self.r1) / 2, (s - self.r1) / 2

    @property
    def slowest_rate(self) -> float:
        """Smallest decay rate -Re(s) over both characteristic roots."""
        return min(-r.real for r in self.roots)


def _artanh(w: complex) -> complex:
    try:
        return cmath.atanh(w)
    except ValueError:  # w = +-1: the sinh and cosh parts coincide
        return complex("inf")


def derive_drude(sys: SpinSystem, bath: BathSpec, mz: float) -> DrudeCoefficients:
    if bath.kind is not BathKind.DRUDE:
        raise DomainError("derive_drude needs a Drude bath")
    g, H0, gamma, tau = sys.g, sys.H0, bath.gamma, bath.tau
    a = 1.0 / tau
    b = g * (H0 + 3.0 * gamma * mz / tau)
    c = (g / tau) * (H0 + 2.0 * gamma * mz / tau)
    r1 = cmath.sqrt((a + 1j * b) ** 2 - 4j * c)
    r2 = cmath.sqrt((a - 1j * b) ** 2 + 4j * c)
    # first-order start: z'(0) = -i (c/a) z(0)
    q1 = (a + 1j * b) - 2j * c / a
    q2 = (a - 1j * b) + 2j * c / a
    phi1 = _artanh(q1 / r1) if abs(r1) > DOUBLE_ROOT_TOL else complex("inf")
    phi2 = _artanh(q2 / r2) if abs(r2) > DOUBLE_ROOT_TOL else complex("inf")
    scale = abs(a) + abs(b) + abs(c) ** 0.5
    if abs(r2 - r1.conjugate()) > 1e-12 * scale and abs(r2 + r1.conjugate()) > 1e-12 * scale:
        raise NumericalError("branch roots are not conjugate")
    return DrudeCoefficients(a, b, c, r1, r2, q1, q2, phi1, phi2)


def _branch(p: complex, r: complex, z0: complex, dz0: complex, t: np.ndarray) -> np.ndarray:
    """Solution of z'' + p z' + k z = 0 (with r^2 = p^2 - 4k) for given z(0), z'(0)."""
    u = p * z0 + 2.0 * dz0
    if abs(r) < DOUBLE_ROOT_TOL * max(1.0, abs(p)):
        return np.exp(-p * t / 2) * (z0 + u * t / 2)
    # exponential form avoids cosh overflow on long windows
    s_plus, s_minus = (-p + r) / 2, (-p - r) / 2
    return 0.5 * ((z0 + u / r) * np.exp(s_plus * t) + (z0 - u / r) * np.exp(s_minus * t))


def _project(b1, b2, what):
    re = (b1 + b2) / 2
    im = (b1 - b2) / 2j
    scale = np.abs(b1) + np.abs(b2)
    for part in (re, im):
        if np.any(np.abs(part.imag) > BRANCH_TOL * scale + 1e-300):
            raise NumericalError(f"{what}: conjugate branches do not cancel")
    return re.real, im.real


def drude_mean_moments(dc: DrudeCoefficients, mx0: float, my0: float, t,
                       dmx0: float | None = None, dmy0: float | None = None):
    """Mean transverse moments (mx, my).

    Initial slopes default to the first-order rotation at rate ``c/a`` with the
    memory integral still empty.
    """
    t = np.asarray(t, dtype=float)
    z0 = complex(mx0, my0)
    if dmx0 is None and dmy0 is None:
        dz0 = -1j * dc.start_rate * z0
    elif dmx0 is None or dmy0 is None:
        raise DomainError("give both dmx0 and dmy0 or neither")
    else:
        dz0 = complex(dmx0, dmy0)
    b1 = _branch(dc.a + 1j * dc.b, dc.r1, z0, dz0, t)
    b2 = _branch(dc.a - 1j * dc.b, dc.r2, z0.conjugate(), dz0.conjugate(), t)
    return _project(b1, b2, "mean moments")


def drude_bracket(dc: DrudeCoefficients, t) -> np.ndarray:
    """Normalised branch-1 solution z(t)/z(0) under the first-order start."""
    t = np.asarray(t, dtype=float)
    p = dc.a + 1j * dc.b
    return _branch(p, dc.r1, 1.0, -1j * dc.start_rate, t)


def drude_autocorrelation(dc: DrudeCoefficients, mz: float, mx0: float, my0: float, t):
    t = np.asarray(t, dtype=float)
    f1 = drude_bracket(dc, t)
    f2 = _branch(dc.a - 1j * dc.b, dc.r2, 1.0, 1j * dc.start_rate, t)
    total = f1 + f2
    if np.any(np.abs(total.imag) > BRANCH_TOL * (np.abs(f1) + np.abs(f2)) + 1e-300):
        raise NumericalError("autocorrelation: conjugate branches do not cancel")
    return mz * mz + 0.5 * (mx0 * mx0 + my0 * my0) * total.real
