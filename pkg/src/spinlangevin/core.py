"""Shared value types, unit conventions and sampling grids.

Everything is expressed in natural units (hbar = k_B = 1 unless a
:class:`ThermalEnv` says otherwise); magnetic moments are in Bohr magnetons.
All types are frozen and safe to share between threads.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

#: tolerance used when clamping |mz| onto the total moment
MOMENT_TOL = 1e-12


class MomentConvention(str, enum.Enum):
    SQRT_S_SPLUS1 = "sqrt_s_splus1"  # M = g sqrt(S(S+1))
    S_ONLY = "s_only"  # M = g S


class BathKind(str, enum.Enum):
    OHMIC = "ohmic"
    DRUDE = "drude"


def _is_half_integer(s: float) -> bool:
    return s > 0 and abs(2 * s - round(2 * s)) < 1e-12


@dataclass(frozen=True)
class SpinSystem:
    """A single spin S with gyromagnetic ratio ``g`` in a static field ``H0`` along z."""

    S: float = 0.5
    g: float = 1.0
    H0: float = 0.0
    moment_convention: MomentConvention = MomentConvention.SQRT_S_SPLUS1

    def __post_init__(self):
        if not _is_half_integer(self.S):
            raise DomainError(f"S must be a positive half-integer, got {self.S}")
        if not self.g > 0:
            raise DomainError(f"g must be positive, got {self.g}")
        if not self.H0 >= 0:
            raise DomainError(f"H0 must be non-negative, got {self.H0}")
        object.__setattr__(self, "moment_convention", MomentConvention(self.moment_convention))

    @property
    def total_moment(self) -> float:
        return total_moment(self)


@dataclass(frozen=True)
class BathSpec:
    """Memory-kernel description of the heat bath.

    Ohmic: ``mu(t) = 2 gamma delta(t)`` with spectral cutoff ``Omega``.
    Drude: ``mu(t) = (gamma/tau) exp(-t/tau)`` for t >= 0.
    """

    kind: BathKind
    gamma: float
    Omega: float | None = None
    tau: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", BathKind(self.kind))
        if not self.gamma >= 0:
            raise DomainError(f"gamma must be non-negative, got {self.gamma}")
        if self.kind is BathKind.OHMIC:
            if self.Omega is None or not self.Omega > 0:
                raise DomainError("Ohmic bath requires Omega > 0")
        elif self.tau is None or not self.tau > 0:
            raise DomainError("Drude bath requires tau > 0")

    @classmethod
    def ohmic(cls, gamma: float, Omega: float) -> "BathSpec":
        return cls(BathKind.OHMIC, gamma, Omega=Omega)

    @classmethod
    def drude(cls, gamma: float, tau: float) -> "BathSpec":
        return cls(BathKind.DRUDE, gamma, tau=tau)

    @property
    def kernel_at_zero(self) -> float:
        """Sum over bath modes of lambda^2/(m w^2): Omega*gamma (Ohmic), gamma/tau (Drude)."""
        if self.kind is BathKind.OHMIC:
            return self.Omega * self.gamma
        return self.gamma / self.tau


@dataclass(frozen=True)
class ThermalEnv:
    T: float
    kB: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("T", "kB", "hbar"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")

    @property
    def omega_th(self) -> float:
        """Thermal frequency 2 k_B T / hbar."""
        return 2.0 * self.kB * self.T / self.hbar


@dataclass(frozen=True)
class TimeGrid:
    t0: float
    dt: float
    n: int

    def __post_init__(self):
        if not self.dt > 0:
            raise DomainError("dt must be positive")
        if int(self.n) != self.n or self.n < 2:
            raise DomainError("n must be an integer >= 2")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def span(cls, t_end: float, n: int, t0: float = 0.0) -> "TimeGrid":
        """Grid of ``n`` samples covering [t0, t_end] inclusive."""
        return cls(t0, (t_end - t0) / (n - 1), n)

    @property
    def times(self) -> np.ndarray:
        # t0 + k dt rather than a cumulative sum: no drift
        return self.t0 + np.arange(self.n) * self.dt

    @property
    def t_end(self) -> float:
        return self.t0 + (self.n - 1) * self.dt

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform angular-frequency grid ``w0 + k dw``, k in [0, n)."""

    w0: float
    dw: float
    n: int

    @property
    def omegas(self) -> np.ndarray:
        return self.w0 + np.arange(self.n) * self.dw

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class SpinState:
    mx: float
    my: float
    mz: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.mx, self.my, self.mz)):
            raise DomainError("spin state components must be finite")

    @property
    def norm(self) -> float:
        return math.sqrt(self.mx**2 + self.my**2 + self.mz**2)

    def as_array(self) -> np.ndarray:
        return np.array([self.mx, self.my, self.mz])


@dataclass(frozen=True)
class Series:
    """Samples on a :class:`TimeGrid` or :class:`FrequencyGrid`."""

    grid: TimeGrid | FrequencyGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape[0] != self.grid.n:
            raise DomainError(f"expected {self.grid.n} samples, got {values.shape[0]}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def axis(self) -> np.ndarray:
        if isinstance(self.grid, TimeGrid):
            return self.grid.times
        return self.grid.omegas


# complex samples share the same container
ComplexSeries = Series


@dataclass(frozen=True)
class Trajectory:
    """Samples of (mx, my, mz) on a time grid; ``m`` has shape (n, 3)."""

    grid: TimeGrid
    m: np.ndarray

    @property
    def t(self) -> np.ndarray:
        return self.grid.times

    @property
    def mx(self) -> np.ndarray:
        return self.m[:, 0]

    @property
    def my(self) -> np.ndarray:
        return self.m[:, 1]

    @property
    def mz(self) -> np.ndarray:
        return self.m[:, 2]


def total_moment(sys: SpinSystem) -> float:
    if sys.moment_convention is MomentConvention.S_ONLY:
        return sys.g * sys.S
    return sys.g * math.sqrt(sys.S * (sys.S + 1.0))


def transverse_moment(sys: SpinSystem, mz: float) -> float:
    """sqrt(M^2 - mz^2); raises DomainError when |mz| exceeds M beyond 1e-12."""
    M = total_moment(sys)
    excess = abs(mz) - M
    if excess > MOMENT_TOL:
        raise DomainError(f"|mz|={abs(mz)} exceeds the total moment {M}")
    return math.sqrt(max(M * M - mz * mz, 0.0))
