"""Command-line scenarios: ``spinlangevin <mode> --config FILE [--key value ...] --out PREFIX``.

Configs are ``key = value`` lines; ``#`` starts a comment. Flags override the
file. Every run writes ``PREFIX.csv`` and ``PREFIX.meta``; the meta file is
itself a valid config that reproduces the run.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .core import (BathSpec, FrequencyGrid, Series, SpinState, SpinSystem, ThermalEnv, TimeGrid,
                   transverse_moment)
from .drude import derive_drude, drude_autocorrelation, drude_mean_moments
from .equilibrium import SignConvention, equilibrium_mz
from .errors import ConfigError, SpinLangevinError
from .ohmic import (autocorrelation, default_initial_transverse, derive_ohmic, mean_moments,
                    response_family, response_imag_omega, response_real_omega)
from .spectral import imag_response_time, kramers_kronig_real
from .stochastic import EnsembleProblem, LangevinOptions, ensemble_statistics

MODES = ("equilibrium", "ohmic", "drude", "simulate", "fdt-check", "kk-check", "sweep-tauR")
AXES = ("T", "H0", "gamma")


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _opt_float(text: str):
    return None if text.strip().lower() in ("", "none", "auto") else float(text)


# name -> (parser, default)
SCHEMA = {
    "mode": (str, None),
    "version": (str, None),
    "S": (float, 0.5),
    "g": (float, 1.0),
    "H0": (float, 8.0),
    "moment_convention": (str, "sqrt_s_splus1"),
    "bath": (str, "ohmic"),
    "gamma": (float, 5.0),
    "Omega": (float, 1e6),
    "tau": (float, 1.0),
    "T": (float, 10.0),
    "kB": (float, 1.0),
    "hbar": (float, 1.0),
    "sign": (str, "aligned_positive"),
    "mz": (_opt_float, None),
    "mx0": (_opt_float, None),
    "my0": (_opt_float, None),
    "t0": (float, 0.0),
    "t_end": (_opt_float, None),
    "n": (int, 512),
    "n_traj": (int, 100),
    "seed": (int, 0),
    "mass": (float, 1.0),
    "delta_weight": (str, "full"),
    "ordering_field": (_bool, True),
    "classical": (_bool, False),
    "window": (float, 400.0),
    "omega_points": (int, 4001),
    "omega_span": (float, 20.0),
    "eval_points": (int, 41),
    "axis1": (str, "T"),
    "axis1_min": (float, 0.01),
    "axis1_max": (float, 10.0),
    "axis1_steps": (int, 20),
    "axis1_log": (_bool, True),
    "axis2": (str, "H0"),
    "axis2_min": (float, 0.1),
    "axis2_max": (float, 10.0),
    "axis2_steps": (int, 20),
    "axis2_log": (_bool, True),
}


@dataclass(frozen=True)
class ScenarioConfig:
    mode: str
    params: dict

    def __getitem__(self, key):
        return self.params[key]

    @property
    def sys(self) -> SpinSystem:
        return SpinSystem(self["S"], self["g"], self["H0"], self["moment_convention"])

    @property
    def env(self) -> ThermalEnv:
        return ThermalEnv(self["T"], self["kB"], self["hbar"])

    @property
    def bath(self) -> BathSpec:
        if self["bath"] == "ohmic":
            return BathSpec.ohmic(self["gamma"], self["Omega"])
        if self["bath"] == "drude":
            return BathSpec.drude(self["gamma"], self["tau"])
        raise ConfigError(f"field 'bath': expected ohmic or drude, got {self['bath']!r}")


@dataclass(frozen=True)
class SweepSpec:
    axis1: str
    range1: tuple  # (min, max, steps, log)
    axis2: str
    range2: tuple

    def __post_init__(self):
        for name, (lo, hi, steps, log) in ((self.axis1, self.range1), (self.axis2, self.range2)):
            if name not in AXES:
                raise ConfigError(f"sweep axis must be one of {AXES}, got {name!r}")
            if steps < 2 or not lo < hi or (log and lo <= 0):
                raise ConfigError(f"invalid range for sweep axis {name}: {lo}..{hi} ({steps} steps)")
        if self.axis1 == self.axis2:
            raise ConfigError("sweep axes must differ")

    @staticmethod
    def values(lo, hi, steps, log):
        return np.geomspace(lo, hi, steps) if log else np.linspace(lo, hi, steps)

    @classmethod
    def from_config(cls, cfg: ScenarioConfig) -> "SweepSpec":
        def rng(i):
            return (cfg[f"axis{i}_min"], cfg[f"axis{i}_max"], cfg[f"axis{i}_steps"], cfg[f"axis{i}_log"])
        return cls(cfg["axis1"], rng(1), cfg["axis2"], rng(2))


# -- config parsing ------------------------------------------------------------

def _coerce(key, raw, where):
    if key not in SCHEMA:
        raise ConfigError(f"{where}: unknown key {key!r}")
    parser, _ = SCHEMA[key]
    try:
        return parser(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}: bad value for {key!r}: {exc}") from exc


def parse_config_text(text: str, source: str = "<config>") -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value")
        key, raw = (part.strip() for part in line.split("=", 1))
        out[key] = _coerce(key, raw, f"{source}:{lineno}")
    return out


def parse_overrides(tokens: list[str]) -> dict:
    out = {}
    it = iter(tokens)
    for tok in it:
        if not tok.startswith("--"):
            raise ConfigError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, raw = key.split("=", 1)
        else:
            raw = next(it, None)
            if raw is None:
                raise ConfigError(f"flag --{key} needs a value")
        out[key] = _coerce(key, raw, f"flag --{key}")
    return out


def resolve(mode: str, file_params: dict, overrides: dict) -> ScenarioConfig:
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; choose from {', '.join(MODES)}")
    params = {k: default for k, (_, default) in SCHEMA.items()}
    params.update(file_params)
    params.update(overrides)
    params["mode"] = mode
    params["version"] = __version__
    for key in ("n", "n_traj", "omega_points", "eval_points"):
        if params[key] < 1:
            raise ConfigError(f"field {key!r} must be positive")
    if mode in ("ohmic", "sweep-tauR", "fdt-check", "kk-check"):
        params["bath"] = "ohmic"
    elif mode == "drude":
        params["bath"] = "drude"
    cfg = ScenarioConfig(mode, params)
    try:  # surface invalid physics parameters as configuration errors
        cfg.sys, cfg.env, cfg.bath
        SignConvention(params["sign"])
        LangevinOptions(params["delta_weight"])
        if mode == "sweep-tauR":
            SweepSpec.from_config(cfg)
    except ConfigError:
        raise
    except (SpinLangevinError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


# -- CSV / meta ------------------------------------------------------------------

def _fmt(v) -> str:
    v = float(v)
    if math.isnan(v):
        raise ValueError("refusing to write NaN")
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return "%.17g" % (v + 0.0)  # folds -0 into 0


def write_csv(path, header, columns) -> None:
    cols = [np.asarray(c, dtype=float).ravel() for c in columns]
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*cols):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [[float(x) for x in line.strip().split(",")] for line in fh if line.strip()]
    return header, np.array(rows, dtype=float).reshape(-1, len(header))


def write_meta(path, cfg: ScenarioConfig, results: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        for key in SCHEMA:
            val = cfg.params[key]
            if val is None:
                val = "none"
            elif isinstance(val, bool):
                val = "true" if val else "false"
            elif isinstance(val, float):
                val = _fmt(val)
            fh.write(f"{key} = {val}\n")
        for key, val in results.items():
            fh.write(f"# {key} = {_fmt(val) if isinstance(val, (int, float)) else val}\n")


def read_meta(path) -> dict:
    return parse_config_text(Path(path).read_text(), str(path))


# -- scenarios ---------------------------------------------------------------------

def _mz(cfg: ScenarioConfig) -> float:
    if cfg["mz"] is not None:
        return cfg["mz"]
    return equilibrium_mz(cfg.sys, cfg.env, SignConvention(cfg["sign"])).mz


def _start(cfg: ScenarioConfig, mz: float) -> tuple[float, float]:
    if cfg["mx0"] is not None and cfg["my0"] is not None:
        return cfg["mx0"], cfg["my0"]
    return default_initial_transverse(transverse_moment(cfg.sys, mz))


def _grid(cfg: ScenarioConfig, default_end: float) -> TimeGrid:
    t_end = cfg["t_end"] if cfg["t_end"] is not None else default_end
    if not math.isfinite(t_end) or t_end <= cfg["t0"]:
        raise ConfigError("time window is empty or infinite; set t_end explicitly")
    return TimeGrid.span(t_end, cfg["n"], cfg["t0"])


def _run_equilibrium(cfg):
    res = equilibrium_mz(cfg.sys, cfg.env, SignConvention(cfg["sign"]))
    return ["T", "H0", "x", "bs", "mz"], [[cfg["T"]], [cfg["H0"]], [res.x], [res.bs], [res.mz]], {}


def _run_ohmic(cfg):
    mz = _mz(cfg)
    d = derive_ohmic(cfg.sys, cfg.bath, mz, *_start(cfg, mz))
    grid = _grid(cfg, 5.0 * d.tau_R)
    t = grid.times
    mx, my = mean_moments(d, t)
    c = autocorrelation(d, cfg.sys.total_moment, t)
    r = response_family(d, cfg.env, t).r_total
    return ["t", "mx", "my", "C", "R"], [t, mx, my, c, r], {
        "mz_used": mz, "tau_R": d.tau_R, "omega_tilde": d.omega_tilde}


def _run_drude(cfg):
    mz = _mz(cfg)
    mx0, my0 = _start(cfg, mz)
    dc = derive_drude(cfg.sys, cfg.bath, mz)
    grid = _grid(cfg, 10.0 * cfg["tau"])
    t = grid.times
    mx, my = drude_mean_moments(dc, mx0, my0, t)
    c = drude_autocorrelation(dc, mz, mx0, my0, t)
    return ["t", "mx", "my", "C"], [t, mx, my, c], {"mz_used": mz, "slowest_rate": dc.slowest_rate}


def _run_simulate(cfg):
    mz = _mz(cfg)
    mx0, my0 = _start(cfg, mz)
    bath = cfg.bath
    if bath.kind.value == "ohmic":
        d = derive_ohmic(cfg.sys, bath, mz, mx0, my0)
        default_end = 3.0 * d.tau_R
    else:
        default_end = 10.0 * cfg["tau"]
    grid = _grid(cfg, default_end)
    problem = EnsembleProblem(cfg.sys, bath, cfg.env, grid, SpinState(mx0, my0, mz), cfg["mass"],
                              cfg["classical"], LangevinOptions(cfg["delta_weight"], cfg["ordering_field"]))
    st = ensemble_statistics(cfg["n_traj"], cfg["seed"], problem)
    cols = [grid.times, *st.mean.T, *st.stderr.T, st.corr, st.corr_stderr]
    header = ["t", "mean_mx", "mean_my", "mean_mz", "se_mx", "se_my", "se_mz", "C_hat", "se_C"]
    return header, cols, {"mz_used": mz, "max_norm_drift": st.max_norm_drift}


def _run_fdt(cfg):
    mz = _mz(cfg)
    d = derive_ohmic(cfg.sys, cfg.bath, mz, *_start(cfg, mz))
    if not math.isfinite(d.tau_R):
        raise ConfigError("fdt-check needs a finite relaxation time")
    grid = TimeGrid(0.0, cfg["window"] * d.tau_R / cfg["n"], cfg["n"])
    c = Series(grid, autocorrelation(d, cfg.sys.total_moment, grid.times) - mz * mz)
    fft_part = imag_response_time(c, cfg.env).imag
    closed = response_family(d, cfg.env, grid.times).r_double_prime
    keep = grid.times <= 3.0 * d.tau_R
    err = np.linalg.norm(fft_part[keep] - closed[keep]) / np.linalg.norm(closed[keep])
    t = grid.times[keep]
    return ["t", "R2_fft", "R2_closed"], [t, fft_part[keep], closed[keep]], {"rel_l2_error": err}


def _run_kk(cfg):
    mz = _mz(cfg)
    d = derive_ohmic(cfg.sys, cfg.bath, mz, *_start(cfg, mz))
    half = 0.5 * cfg["omega_span"] * d.B
    n = cfg["omega_points"] | 1  # odd, so that w = 0 is a node
    fg = FrequencyGrid(-half, 2 * half / (n - 1), n)
    r2 = Series(fg, response_imag_omega(d, cfg.env, fg.omegas))
    w = np.linspace(-2 * d.B, 2 * d.B, cfg["eval_points"])
    kk = kramers_kronig_real(r2, w)
    closed = response_real_omega(d, cfg.env, w).real
    err = np.max(np.abs(kk - closed)) / np.max(np.abs(closed))
    return ["omega", "R1_kk", "R1_closed"], [w, kk, closed], {"rel_max_error": err}


def tau_R_at(cfg: ScenarioConfig, **point) -> float:
    """Ohmic relaxation time with mz taken from equilibrium at the given point."""
    p = dict(cfg.params, **point)
    sys_ = SpinSystem(p["S"], p["g"], p["H0"], p["moment_convention"])
    env = ThermalEnv(p["T"], p["kB"], p["hbar"])
    mz = equilibrium_mz(sys_, env, SignConvention(p["sign"])).mz
    if mz <= 0:
        return math.inf
    return derive_ohmic(sys_, BathSpec.ohmic(p["gamma"], p["Omega"]), mz).tau_R


def sweep_relaxation_map(spec: SweepSpec, cfg: ScenarioConfig):
    """Rows (a1, a2, tau_R) over the grid, axis2 varying fastest."""
    v1 = SweepSpec.values(*spec.range1)
    v2 = SweepSpec.values(*spec.range2)
    rows = [(a, b, tau_R_at(cfg, **{spec.axis1: a, spec.axis2: b})) for a in v1 for b in v2]
    return np.array(rows, dtype=float).reshape(-1, 3)


def _run_sweep(cfg):
    spec = SweepSpec.from_config(cfg)
    rows = sweep_relaxation_map(spec, cfg)
    return [spec.axis1, spec.axis2, "tau_R"], list(rows.T), {}


RUNNERS = {
    "equilibrium": _run_equilibrium,
    "ohmic": _run_ohmic,
    "drude": _run_drude,
    "simulate": _run_simulate,
    "fdt-check": _run_fdt,
    "kk-check": _run_kk,
    "sweep-tauR": _run_sweep,
}


def run_scenario(cfg: ScenarioConfig, out_prefix) -> dict:
    header, cols, results = RUNNERS[cfg.mode](cfg)
    out_prefix = str(out_prefix)
    write_csv(out_prefix + ".csv", header, cols)
    write_meta(out_prefix + ".meta", cfg, results)
    return results


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="spinlangevin", description=__doc__.splitlines()[0])
    ap.add_argument("mode", choices=MODES)
    ap.add_argument("--config", type=Path)
    ap.add_argument("--out", required=True)
    args, extra = ap.parse_known_args(argv)
    try:
        file_params = {}
        if args.config is not None:
            try:
                text = args.config.read_text()
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}") from exc
            file_params = parse_config_text(text, str(args.config))
        cfg = resolve(args.mode, file_params, parse_overrides(extra))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        run_scenario(cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SpinLangevinError, ArithmeticError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
