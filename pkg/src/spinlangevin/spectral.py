"""Spectra, the fluctuation-dissipation relation and Kramers-Kronig transforms."""
from __future__ import annotations

import math

import numpy as np

from .core import FrequencyGrid, Series, ThermalEnv, TimeGrid
from .errors import DomainError, EdgeError, WindowError

#: how far C(t) must have decayed, relative to C(0), by the end of its window
WINDOW_DECAY = 1e-6
#: closest distance, in grid points, an evaluation point may sit from an edge
EDGE_POINTS = 5


def conjugate_grid(grid: TimeGrid) -> FrequencyGrid:
    """Centred frequency grid of the 2n-point symmetric embedding of ``grid``."""
    L = 2 * grid.n
    dw = 2.0 * math.pi / (L * grid.dt)
    return FrequencyGrid(-(L // 2) * dw, dw, L)


def correlation_spectrum(c: Series) -> Series:
    """Approximate C(w) = integral of C(|t|) e^{-iwt} dt over the real line.

    ``c`` holds C on t = 0, dt, ..., (n-1) dt; it is mirrored into C(|t|) on a
    2n-point periodic grid (the sample at |t| = n dt is set to zero) so the
    result is real and even.
    """
    grid = c.grid
    if not isinstance(grid, TimeGrid):
        raise DomainError("correlation_spectrum needs a time series")
    v = np.asarray(c.values)
    tail = v[-max(2, v.size // 100):]
    if np.max(np.abs(tail)) > WINDOW_DECAY * abs(v[0]):
        raise WindowError("series has not decayed to 1e-6 of C(0) by the window end")
    sym = np.concatenate([v, [0.0], v[:0:-1]])
    spec = grid.dt * np.fft.fft(sym)
    return Series(conjugate_grid(grid), np.fft.fftshift(spec))


def inverse_transform(s: Series, grid: TimeGrid, sign: int = -1) -> np.ndarray:
    """(1/2 pi) integral of S(w) e^{sign i w t} dw on the first ``grid.n`` times.

    ``s`` must live on ``conjugate_grid(grid)``; the result is complex.
    """
    fg = conjugate_grid(grid)
    if s.grid != fg:
        raise DomainError("spectrum is not on the grid conjugate to the requested times")
    raw = np.fft.ifftshift(np.asarray(s.values))
    L = fg.n
    if sign < 0:
        out = np.fft.fft(raw) / (L * grid.dt)
    else:
        out = np.fft.ifft(raw) / grid.dt
    return out[: grid.n]


def fdt_imag_response(c_omega: Series, env: ThermalEnv) -> Series:
    """R''(w) = tanh(w / Omega_th) C(w) / hbar; zero at w = 0."""
    w = c_omega.axis
    return Series(c_omega.grid, np.tanh(w / env.omega_th) * np.asarray(c_omega.values) / env.hbar)


def imag_response_time(c: Series, env: ThermalEnv) -> np.ndarray:
    """Time-domain R''(t) from a decayed correlation via the FDT (complex array).

    The inverse transform uses the e^{-iwt} kernel. For an even, real
    correlation the result is purely imaginary.
    """
    r = fdt_imag_response(correlation_spectrum(c), env)
    # on the periodic grid -pi/dt and +pi/dt coincide, so an odd spectrum is zero there
    values = np.array(r.values)
    values[0] = 0.0
    return inverse_transform(Series(r.grid, values), c.grid, sign=-1)


# -- Kramers-Kronig ---------------------------------------------------------------

def _hilbert_on_grid(w: np.ndarray, f: np.ndarray, m: np.ndarray) -> np.ndarray:
    """PV integral of f(x)/(x - w[m]) over [w[0], w[-1]] for grid indices m.

    The singularity is subtracted: the smooth quotient (f - f_m)/(x - x_m) is
    integrated with the trapezoid rule (its value at x_m is f'(x_m), taken by
    central differences) and the subtracted part f_m ln((b - x_m)/(x_m - a))
    is added back analytically. Second order in the grid spacing.
    """
    h = w[1] - w[0]
    a, b = w[0], w[-1]
    weights = np.full(w.size, h)
    weights[0] = weights[-1] = h / 2
    out = np.empty(m.size)
    for i, k in enumerate(m):
        xk, fk = w[k], f[k]
        diff = w - xk
        diff[k] = 1.0
        q = (f - fk) / diff
        q[k] = (f[k + 1] - f[k - 1]) / (2 * h)
        out[i] = np.dot(weights, q) + fk * math.log((b - xk) / (xk - a))
    return out


def _pv_at(w: np.ndarray, f: np.ndarray, x: np.ndarray) -> np.ndarray:
    """PV integral at arbitrary points, linear between the two neighbouring nodes."""
    h = w[1] - w[0]
    pos = (x - w[0]) / h
    lo = np.floor(pos).astype(int)
    on_grid = np.isclose(pos, np.round(pos), rtol=0, atol=1e-9)
    lo = np.where(on_grid, np.round(pos).astype(int), lo)
    hi = np.where(on_grid, lo, lo + 1)
    if np.any(lo < EDGE_POINTS) or np.any(hi > w.size - 1 - EDGE_POINTS):
        raise EdgeError(f"evaluation point within {EDGE_POINTS} grid points of the boundary")
    nodes = np.unique(np.concatenate([lo, hi]))
    vals = dict(zip(nodes.tolist(), _hilbert_on_grid(w, f, nodes)))
    frac = np.where(on_grid, 0.0, pos - lo)
    v_lo = np.array([vals[k] for k in lo.tolist()])
    v_hi = np.array([vals[k] for k in hi.tolist()])
    return (1.0 - frac) * v_lo + frac * v_hi


def kramers_kronig_real(r_imag: Series, omega_eval, *, tail_correction: bool = False):
    """R'(w) = (1/pi) PV integral of w' R''(w') / (w'^2 - w^2) dw'.

    Uses w'/(w'^2 - w^2) = [1/(w' - w) + 1/(w' + w)]/2, so the result is the
    mean of two principal-value Hilbert integrals at +w and -w.

    ``tail_correction`` adds the contribution of an R'' that keeps decaying as
    1/w'^2 beyond the grid, matched to the edge values.
    """
    grid = r_imag.grid
    if not isinstance(grid, FrequencyGrid):
        raise DomainError("kramers_kronig_real needs a frequency series")
    w = grid.omegas
    f = np.asarray(r_imag.values, dtype=float)
    x = np.atleast_1d(np.asarray(omega_eval, dtype=float))
    result = (_pv_at(w, f, x) + _pv_at(w, f, -x)) / (2.0 * math.pi)
    if tail_correction:
        result = result + _tail(w, f, x)
    return result if np.ndim(omega_eval) else float(result[0])


def _tail(w, f, x):
    """Contribution of |w'| > W for R'' ~ f(+-W) (W/w')^2 outside [-W, W]."""
    W = min(-w[0], w[-1])
    fp, fm = np.interp(W, w, f), np.interp(-W, w, f)
    x2 = x * x
    small = x2 < 1e-12 * W * W
    safe = np.where(small, 1.0, x2)
    # (1/pi) int_W^inf w' (W/w')^2 / (w'^2 - x^2) dw' = W^2/(2 pi x^2) ln(W^2/(W^2 - x^2))
    g = np.where(small, 1.0 / (2.0 * math.pi), W * W / (2.0 * math.pi * safe)
                 * np.log(W * W / (W * W - safe)))
    return (fp - fm) * g
