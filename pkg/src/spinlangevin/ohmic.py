"""Closed-form results for a spin coupled to an Ohmic (delta-correlated) bath.

The z-moment ``mz`` is held fixed; the transverse moment precesses clockwise
about z at the shifted frequency ``omega_tilde`` and relaxes at rate
``A = 1/tau_R``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BathKind, BathSpec, SpinSystem, ThermalEnv, transverse_moment
from .errors import DegenerateError, DomainError, NumericalError

#: relative size of an imaginary (or real) part that is accepted as rounding noise
RESIDUE_TOL = 1e-10


def default_initial_transverse(mxy: float) -> tuple[float, float]:
    """Initial (mx0, my0) that splits the transverse amplitude 3:2 in power."""
    return math.sqrt(3 / 5) * mxy, math.sqrt(2 / 5) * mxy


@dataclass(frozen=True)
class OhmicDerived:
    mz: float
    mxy: float  # sqrt(M^2 - mz^2)
    amplitude: float  # hypot(mx0, my0); equals mxy for the default start
    phi: float
    omega_tilde: float
    tau_R: float
    A: float
    B: float

    @property
    def mx0(self) -> float:
        return self.amplitude * math.cos(self.phi)

    @property
    def my0(self) -> float:
        return self.amplitude * math.sin(self.phi)


def field_and_coupling(g: float, H0: float, gamma: float, Omega: float, mz: float):
    """Return (h, k): the precession rate g(H0 + 2 mz Omega gamma) and the friction coupling 2 gamma g mz."""
    return g * (H0 + 2.0 * mz * Omega * gamma), 2.0 * gamma * g * mz


def derive_ohmic(sys: SpinSystem, bath: BathSpec, mz: float,
                 mx0: float | None = None, my0: float | None = None) -> OhmicDerived:
    if bath.kind is not BathKind.OHMIC:
        raise DomainError("derive_ohmic needs an Ohmic bath")
    mxy = transverse_moment(sys, mz)
    if mx0 is None and my0 is None:
        mx0, my0 = default_initial_transverse(mxy)
    elif mx0 is None or my0 is None:
        raise DomainError("give both mx0 and my0 or neither")
    if mx0 * mx0 + my0 * my0 > mxy * mxy + 1e-12:
        raise DomainError("initial transverse moment exceeds sqrt(M^2 - mz^2)")

    h, k = field_and_coupling(sys.g, sys.H0, bath.gamma, bath.Omega, mz)
    omega_tilde = h / (1.0 + k * k)
    A = k * omega_tilde
    tau_R = math.inf if A == 0 else 1.0 / A
    amplitude = math.hypot(mx0, my0)
    phi = math.atan2(my0, mx0) if amplitude > 0 else 0.0
    return OhmicDerived(mz=mz, mxy=mxy, amplitude=amplitude, phi=phi,
                        omega_tilde=omega_tilde, tau_R=tau_R, A=A, B=omega_tilde)


def mean_moments(d: OhmicDerived, t):
    """Mean transverse moments; returns (mx, my) with (mx, my)(0) = (mx0, my0)."""
    t = np.asarray(t, dtype=float)
    env = d.amplitude * np.exp(-d.A * t)
    arg = d.omega_tilde * t - d.phi
    return env * np.cos(arg), -env * np.sin(arg)


def autocorrelation(d: OhmicDerived, M: float, t):
    t = np.asarray(t, dtype=float)
    return d.mz**2 + (M * M - d.mz**2) * np.exp(-d.A * t) * np.cos(d.omega_tilde * t)


def classical_tau_R(sys: SpinSystem, gamma: float, mz: float) -> float:
    rate = 2.0 * mz * gamma * sys.g**2 * sys.H0
    if rate == 0:
        raise DegenerateError("classical relaxation is infinite when mz*gamma*H0 = 0")
    return 1.0 / rate


def classical_autocorrelation(sys: SpinSystem, gamma: float, mz: float, M: float, t):
    """High-temperature, small-damping correlation: precession at the bare Larmor frequency."""
    tau = classical_tau_R(sys, gamma, mz)
    t = np.asarray(t, dtype=float)
    return mz * mz + (M * M - mz * mz) * np.exp(-t / tau) * np.cos(sys.g * sys.H0 * t)


# -- response functions -------------------------------------------------------

def _inv_cosh(x):
    """1/cosh(x) without overflow."""
    e = np.exp(-2.0 * np.abs(x))
    return 2.0 * np.sqrt(e) / (1.0 + e)


def complex_tanh(z):
    """tanh(u + iv) that stays finite for |u| beyond the cosh overflow threshold."""
    z = np.asarray(z, dtype=complex)
    u2, v2 = 2.0 * z.real, 2.0 * z.imag
    sech = _inv_cosh(u2)
    den = 1.0 + np.cos(v2) * sech
    return (np.tanh(u2) + 1j * np.sin(v2) * sech) / den


def _check_residue(part, scale, what):
    if np.any(np.abs(part) > RESIDUE_TOL * scale + 1e-300):
        raise NumericalError(f"{what}: residue above {RESIDUE_TOL:g} of the magnitude")


@dataclass(frozen=True)
class ResponseFamily:
    r_prime: np.ndarray
    r_double_prime: np.ndarray  # coefficient of i: the closed form is purely imaginary
    r_total: np.ndarray


def response_family(d: OhmicDerived, env: ThermalEnv, t) -> ResponseFamily:
    """Time-domain response functions.

    ``r_double_prime`` holds the real coefficient c(t) with R''(t) = i c(t).
    The explicit total R(t) equals ``-(r_prime - r_double_prime)``, i.e.
    ``-(R' + i R'')``; both parts are returned so callers can check this.
    """
    t = np.asarray(t, dtype=float)
    w_th = env.omega_th
    hbar = env.hbar
    mxy2 = d.mxy**2
    A, B = d.A, d.B
    t_plus = complex_tanh(2.0 * (B + 1j * A) / w_th)
    t_minus = complex_tanh(2.0 * (B - 1j * A) / w_th)
    t_neg = complex_tanh(2.0 * (1j * A - B) / w_th)

    # e^{-(A+iB)t}(...) written as e^{-At}(e^{-iBt}... + e^{iBt}...) so that
    # e^{2iBt} never multiplies a large number
    decay = np.exp(-A * t)
    rot_m, rot_p = np.exp(-1j * B * t), np.exp(1j * B * t)
    rpp = mxy2 * decay * (rot_m * t_minus - rot_p * t_plus) / (2.0 * hbar)
    rp = -1j * mxy2 * decay * (rot_m * t_neg + rot_p * t_plus) / (2.0 * hbar)
    # judged against the envelope so that zero crossings do not trip the check
    scale = mxy2 * decay * (abs(t_plus) + abs(t_minus)) / hbar
    _check_residue(rpp.real, scale, "R''(t) real part")
    _check_residue(rp.imag, scale, "R'(t) imaginary part")

    four_a, four_b = 4.0 * A / w_th, 4.0 * B / w_th
    sech = _inv_cosh(four_b)
    num = np.cos(B * t) * np.sin(four_a) * sech + np.sin(B * t) * np.tanh(four_b)
    den = np.cos(four_a) * sech + 1.0
    total = -2.0 * mxy2 * decay * num / (hbar * den)
    return ResponseFamily(r_prime=rp.real, r_double_prime=rpp.imag, r_total=total)


def correlation_spectrum_closed(d: OhmicDerived, omega):
    """Full-line transform of C(t) - mz^2 (a pair of Lorentzians at +-B)."""
    w = np.asarray(omega, dtype=float)
    A, B = d.A, d.B
    return d.mxy**2 * (A / (A * A + (w - B) ** 2) + A / (A * A + (w + B) ** 2))


def response_imag_omega(d: OhmicDerived, env: ThermalEnv, omega):
    """Dissipative part tanh(w/Omega_th) C(w) / hbar."""
    w = np.asarray(omega, dtype=float)
    return np.tanh(w / env.omega_th) * correlation_spectrum_closed(d, w) / env.hbar


def response_real_omega(d: OhmicDerived, env: ThermalEnv, omega):
    """Closed-form reactive part R'(w); complex dtype, imaginary part is rounding only."""
    w = np.asarray(omega, dtype=float)
    A, B = d.A, d.B
    if A == 0 and np.any(np.abs(np.abs(w) - B) == 0):
        raise DegenerateError("pole on the real axis at |w| = B when A = 0")
    zm, zp = B - 1j * A, B + 1j * A
    tm = complex_tanh(2.0 * zm / env.omega_th)
    tp = complex_tanh(2.0 * zp / env.omega_th)
    term_m = tm * zm / (env.hbar * (zm * zm - w * w))
    term_p = tp * zp / (env.hbar * ((B - w + 1j * A) * (B + w + 1j * A)))
    pref = d.mxy**2 / math.sqrt(2.0 * math.pi)
    out = pref * (term_m + term_p)
    _check_residue(out.imag, pref * (np.abs(term_m) + np.abs(term_p)), "R'(w) imaginary part")
    return out

