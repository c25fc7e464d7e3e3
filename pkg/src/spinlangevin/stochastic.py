"""Colored thermal noise and noise-driven trajectories of the full spin vector.

The moment obeys a Gilbert-type Langevin equation

    dM/dt = g M x (H0 z + f(t) + h_ord - friction),

where the friction is ``eta dM/dt`` for the Ohmic bath (eta = 2 gamma with the
full delta weight) and the exponentially weighted history of dM/dt for the
Drude bath. The optional ordering field ``2 mu(0) Mz z`` reproduces the
frequency shift that appears in the factorised mean equations.

Trajectories are advanced by exact rotations (Rodrigues' formula) about a
midpoint angular velocity, so |M| is conserved up to rounding.
"""
from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import BathKind, BathSpec, SpinState, SpinSystem, ThermalEnv, TimeGrid, Trajectory
from .errors import DomainError, NyquistError, StepError

THREADS_ENV = "SPINLANGEVIN_THREADS"
MAX_ROTATION = 0.5


class DeltaWeight(str, enum.Enum):
    FULL = "full"  # Ohmic friction coefficient 2 gamma
    HALF = "half"  # gamma: half of the delta at the end of the memory window


def worker_count(requested: int | None = None) -> int:
    """Thread count, capped by the SPINLANGEVIN_THREADS environment variable."""
    n = requested or os.cpu_count() or 1
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError as exc:
            raise DomainError(f"{THREADS_ENV} must be an integer, got {cap!r}") from exc
    return max(1, n)


def kernel_spectrum(bath: BathSpec, omega, mass: float = 1.0):
    """Real part of the memory-kernel transform, scaled by the mass."""
    w = np.asarray(omega, dtype=float)
    if bath.kind is BathKind.OHMIC:
        return np.where(np.abs(w) <= bath.Omega, 2.0 * mass * bath.gamma, 0.0)
    return mass * bath.gamma / (1.0 + (w * bath.tau) ** 2)


def _x_coth_x(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-8
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 + x * x / 3.0, safe / np.tanh(safe))


@dataclass(frozen=True)
class NoiseSpectrum:
    bath: BathSpec
    env: ThermalEnv
    mass: float = 1.0
    classical: bool = False

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError("mass must be positive")

    def psd(self, omega):
        """Per-component power spectral density (even, non-negative)."""
        w = np.asarray(omega, dtype=float)
        re_k = kernel_spectrum(self.bath, w, self.mass)
        thermal = 2.0 * self.env.kB * self.env.T
        if self.classical:
            return thermal * re_k
        # hbar w coth(hbar w / 2kT) = 2kT * x coth x
        return thermal * re_k * _x_coth_x(self.env.hbar * w / thermal)

    def variance(self) -> float:
        """(1/2 pi) times the integral of psd over the real line."""
        from scipy.integrate import quad

        if self.bath.kind is BathKind.OHMIC:
            val, _ = quad(self.psd, 0.0, self.bath.Omega, limit=200)
        else:
            val, _ = quad(self.psd, 0.0, np.inf, limit=200)
        return val / math.pi


@dataclass(frozen=True)
class NoisePath:
    grid: TimeGrid
    fx: np.ndarray = field(repr=False)
    fy: np.ndarray = field(repr=False)
    fz: np.ndarray = field(repr=False)

    def as_array(self) -> np.ndarray:
        return np.column_stack([self.fx, self.fy, self.fz])


def _check_sampling(spec: NoiseSpectrum, grid: TimeGrid):
    n = grid.n
    if n & (n - 1):
        raise DomainError(f"noise synthesis needs a power-of-two length, got {n}")
    nyquist = math.pi / grid.dt
    if spec.bath.kind is BathKind.OHMIC:
        if nyquist < spec.bath.Omega:
            raise NyquistError(f"pi/dt = {nyquist:.4g} is below the cutoff {spec.bath.Omega:.4g}")
    elif nyquist < 1.0 / spec.bath.tau:
        raise NyquistError(f"pi/dt = {nyquist:.4g} is below the memory corner 1/tau")


def _noise_batch(spec: NoiseSpectrum, grid: TimeGrid, seeds) -> np.ndarray:
    """Noise for several seeds at once, shape (len(seeds), n, 3).

    A path of twice the requested length is shaped in the frequency domain
    and its second half discarded, which removes the wrap-around correlation
    of the circular embedding.
    """
    _check_sampling(spec, grid)
    L = 2 * grid.n
    omega = 2.0 * np.pi * np.fft.rfftfreq(L, grid.dt)
    sigma = np.sqrt(L * spec.psd(omega) / grid.dt)
    nf = omega.size
    coeffs = np.empty((len(seeds), 3, nf), dtype=complex)
    for i, seed in enumerate(seeds):
        z = np.random.default_rng(seed).standard_normal((3, nf, 2))
        coeffs[i] = (z[..., 0] + 1j * z[..., 1]) / math.sqrt(2.0)
        # DC and Nyquist bins of a real signal are real
        coeffs[i, :, 0] = z[:, 0, 0]
        coeffs[i, :, -1] = z[:, -1, 0]
    paths = np.fft.irfft(coeffs * sigma, n=L, axis=-1)[..., : grid.n]
    return np.swapaxes(paths, 1, 2)


def synthesize_noise(spec: NoiseSpectrum, grid: TimeGrid, seed: int) -> NoisePath:
    f = _noise_batch(spec, grid, [seed])[0]
    return NoisePath(grid, f[:, 0].copy(), f[:, 1].copy(), f[:, 2].copy())


# -- trajectories --------------------------------------------------------------

@dataclass(frozen=True)
class LangevinOptions:
    delta_weight: DeltaWeight = DeltaWeight.FULL
    ordering_field: bool = True

    def __post_init__(self):
        object.__setattr__(self, "delta_weight", DeltaWeight(self.delta_weight))


def _rotate(m, w):
    """Rotate vectors m by the rotation vector w (row-wise, Rodrigues)."""
    th2 = np.einsum("ij,ij->i", w, w)
    th = np.sqrt(th2)
    small = th < 1e-4
    safe = np.where(small, 1.0, th)
    a = np.where(small, 1.0 - th2 / 6.0, np.sin(safe) / safe)
    b = np.where(small, 0.5 - th2 / 24.0, (1.0 - np.cos(safe)) / (safe * safe))
    wxm = np.cross(w, m)
    return m + a[:, None] * wxm + b[:, None] * np.cross(w, wxm)


class _Stepper:
    def __init__(self, sys: SpinSystem, bath: BathSpec, dt: float, opts: LangevinOptions):
        self.g, self.H0, self.dt = sys.g, sys.H0, dt
        self.drude = bath.kind is BathKind.DRUDE
        self.order = 2.0 * bath.kernel_at_zero if opts.ordering_field else 0.0
        if self.drude:
            self.beta = 0.0
            self.mem_rate = bath.gamma / bath.tau
            self.decay = math.exp(-dt / bath.tau)
            self.half_decay = math.exp(-dt / (2.0 * bath.tau))
            self.quarter_decay = math.exp(-dt / (4.0 * bath.tau))
        else:
            eta = 2.0 * bath.gamma if opts.delta_weight is DeltaWeight.FULL else bath.gamma
            self.beta = sys.g * eta

    def omega(self, m, f, mem):
        h = f.copy()
        h[:, 2] += self.H0 + self.order * m[:, 2]
        if mem is not None:
            h -= mem
        a = self.g * h
        if self.beta == 0.0:
            return a
        # dM/dt = M x a - beta M x dM/dt solved for dM/dt = M x omega
        m2 = np.einsum("ij,ij->i", m, m)
        return (a - self.beta * np.cross(m, a)) / (1.0 + self.beta**2 * m2)[:, None]

    def run(self, m0: np.ndarray, f: np.ndarray) -> np.ndarray:
        """Integrate a batch: m0 (N, 3), f (N, n, 3) -> (N, n, 3)."""
        N, n, _ = f.shape
        out = np.empty((N, n, 3))
        m = np.array(m0, dtype=float)
        out[:, 0] = m
        mem = np.zeros_like(m) if self.drude else None
        dt = self.dt
        for i in range(n - 1):
            fi, fmid = f[:, i], 0.5 * (f[:, i] + f[:, i + 1])
            w0 = self.omega(m, fi, mem)
            pred = _rotate(m, -w0 * dt)
            mid = 0.5 * (m + pred)
            mem_mid = None
            if self.drude:
                mem_mid = self.half_decay * mem + self.mem_rate * self.quarter_decay * (mid - m)
            w_mid = self.omega(mid, fmid, mem_mid)
            new = _rotate(m, -w_mid * dt)
            if self.drude:
                mem = self.decay * mem + self.mem_rate * self.half_decay * (new - m)
            m = new
            out[:, i + 1] = m
        return out

    def check_step(self, m0: np.ndarray, f: np.ndarray):
        fmax = float(np.max(np.linalg.norm(f, axis=-1))) if f.size else 0.0
        mmax = float(np.max(np.linalg.norm(m0, axis=-1)))
        angle = self.dt * self.g * (self.H0 + fmax + abs(self.order) * mmax)
        if angle > MAX_ROTATION:
            raise StepError(f"rotation per step {angle:.3g} exceeds {MAX_ROTATION}")


def integrate_trajectory(state0: SpinState, noise: NoisePath, bath: BathSpec, sys: SpinSystem,
                         grid: TimeGrid, options: LangevinOptions = LangevinOptions()) -> Trajectory:
    if state0.norm == 0:
        raise DomainError("initial moment must be non-zero")
    if noise.grid.n != grid.n:
        raise DomainError("noise and time grid lengths differ")
    stepper = _Stepper(sys, bath, grid.dt, options)
    m0 = state0.as_array()[None, :]
    f = noise.as_array()[None, :, :]
    stepper.check_step(m0, f)
    return Trajectory(grid, stepper.run(m0, f)[0])


# -- ensembles -----------------------------------------------------------------

@dataclass(frozen=True)
class EnsembleProblem:
    sys: SpinSystem
    bath: BathSpec
    env: ThermalEnv
    grid: TimeGrid
    state0: SpinState
    mass: float = 1.0
    classical: bool = False
    options: LangevinOptions = LangevinOptions()

    @property
    def spectrum(self) -> NoiseSpectrum:
        return NoiseSpectrum(self.bath, self.env, self.mass, self.classical)


@dataclass(frozen=True)
class EnsembleStats:
    grid: TimeGrid
    n_traj: int
    mean: np.ndarray  # (n, 3)
    stderr: np.ndarray  # (n, 3)
    corr: np.ndarray  # empirical <M(t).M(0)>
    corr_stderr: np.ndarray
    max_norm_drift: float  # max over trajectories and times of ||M(t)| - |M(0)|| / |M(0)|

    @property
    def mean_mx(self):
        return self.mean[:, 0]

    @property
    def mean_my(self):
        return self.mean[:, 1]

    @property
    def mean_mz(self):
        return self.mean[:, 2]


@dataclass
class _Moments:
    """Running count, mean and sum of squared deviations (merged pairwise)."""

    count: int
    mean: np.ndarray
    m2: np.ndarray

    @classmethod
    def of(cls, x: np.ndarray) -> "_Moments":
        mean = x.mean(axis=0)
        return cls(x.shape[0], mean, ((x - mean) ** 2).sum(axis=0))

    def merge(self, other: "_Moments") -> "_Moments":
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.count / n)
        m2 = self.m2 + other.m2 + delta**2 * (self.count * other.count / n)
        return _Moments(n, mean, m2)

    def stderr(self) -> np.ndarray:
        if self.count < 2:
            return np.full_like(self.mean, np.inf)
        return np.sqrt(self.m2 / (self.count - 1) / self.count)


def _run_chunk(problem: EnsembleProblem, seeds):
    f = _noise_batch(problem.spectrum, problem.grid, seeds)
    m0 = np.broadcast_to(problem.state0.as_array(), (len(seeds), 3))
    stepper = _Stepper(problem.sys, problem.bath, problem.grid.dt, problem.options)
    stepper.check_step(m0, f)
    traj = stepper.run(m0, f)
    corr = np.einsum("knj,kj->kn", traj, traj[:, 0])
    norms = np.linalg.norm(traj, axis=-1)
    drift = float(np.max(np.abs(norms - norms[:, :1]) / norms[:, :1]))
    return _Moments.of(traj), _Moments.of(corr), drift


def ensemble_statistics(n: int, seed_base: int, problem: EnsembleProblem, *,
                        chunk: int = 256, threads: int | None = None) -> EnsembleStats:
    """Average ``n`` trajectories seeded ``seed_base + k``.

    Chunks run on a thread pool; the reduction walks chunks in index order so
    the result does not depend on scheduling or the number of threads.
    """
    if n < 1:
        raise DomainError("need at least one trajectory")
    bounds = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
    jobs = [range(seed_base + lo, seed_base + hi) for lo, hi in bounds]
    workers = min(worker_count(threads), len(jobs))
    if workers == 1:
        parts = [_run_chunk(problem, seeds) for seeds in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda s: _run_chunk(problem, s), jobs))
    m_acc, c_acc, drift = parts[0]
    for m_part, c_part, d_part in parts[1:]:
        m_acc, c_acc, drift = m_acc.merge(m_part), c_acc.merge(c_part), max(drift, d_part)
    return EnsembleStats(problem.grid, n, m_acc.mean, m_acc.stderr(), c_acc.mean,
                         c_acc.stderr(), drift)
