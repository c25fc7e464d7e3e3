import math
import subprocess
import sys

import numpy as np
import pytest

from spinlangevin.cli import (ConfigError, SweepSpec, main, parse_config_text, parse_overrides,
                              read_csv, read_meta, resolve, sweep_relaxation_map, write_csv)

SIMULATE = ["--n", "128", "--n_traj", "100", "--seed", "42", "--H0", "2", "--T", "1",
            "--gamma", "0.2", "--Omega", "20", "--t_end", "1.27"]


def run(mode, tmp_path, *flags, name="out"):
    prefix = tmp_path / name
    code = main([mode, "--out", str(prefix), *flags])
    return code, prefix


def test_equilibrium_without_field_is_zero(tmp_path):
    code, prefix = run("equilibrium", tmp_path, "--H0", "0")
    assert code == 0
    header, data = read_csv(prefix.with_suffix(".csv"))
    assert header == ["T", "H0", "x", "bs", "mz"]
    assert data[0, 4] == 0.0


def test_ohmic_columns_and_results(tmp_path):
    code, prefix = run("ohmic", tmp_path, "--n", "64")
    assert code == 0
    header, data = read_csv(prefix.with_suffix(".csv"))
    assert header == ["t", "mx", "my", "C", "R"]
    assert data.shape == (64, 5) and np.all(np.isfinite(data))
    meta = prefix.with_suffix(".meta").read_text()
    assert "# tau_R = " in meta


def test_drude_mode_uses_the_drude_bath(tmp_path):
    code, prefix = run("drude", tmp_path, "--bath", "ohmic", "--tau", "0.1", "--n", "32")
    assert code == 0
    assert read_meta(prefix.with_suffix(".meta"))["bath"] == "drude"
    header, _ = read_csv(prefix.with_suffix(".csv"))
    assert header == ["t", "mx", "my", "C"]


def test_simulate_is_byte_reproducible(tmp_path):
    a = run("simulate", tmp_path, *SIMULATE, name="a")
    b = run("simulate", tmp_path, *SIMULATE, name="b")
    assert a[0] == b[0] == 0
    assert a[1].with_suffix(".csv").read_bytes() == b[1].with_suffix(".csv").read_bytes()
    header, data = read_csv(a[1].with_suffix(".csv"))
    assert header[0] == "t" and header[-1] == "se_C" and data.shape == (128, 9)


def test_meta_reproduces_the_run(tmp_path):
    code, first = run("simulate", tmp_path, *SIMULATE, name="first")
    assert code == 0
    code, second = run("simulate", tmp_path, "--config", str(first.with_suffix(".meta")),
                       name="second")
    assert code == 0
    assert first.with_suffix(".csv").read_bytes() == second.with_suffix(".csv").read_bytes()


def test_small_sweep_has_one_row_per_point(tmp_path):
    code, prefix = run("sweep-tauR", tmp_path, "--axis1_steps", "2", "--axis2_steps", "2")
    assert code == 0
    header, data = read_csv(prefix.with_suffix(".csv"))
    assert header == ["T", "H0", "tau_R"]
    assert data.shape == (4, 3)


def test_sweep_through_zero_field_gives_infinite_time():
    cfg = resolve("sweep-tauR", {}, {"axis2_min": 0.0, "axis2_log": False, "axis2_steps": 3,
                                     "axis1_steps": 2})
    rows = sweep_relaxation_map(SweepSpec.from_config(cfg), cfg)
    assert np.all(np.isinf(rows[rows[:, 1] == 0.0, 2]))
    assert np.all(np.isfinite(rows[rows[:, 1] > 0.0, 2]))


def test_csv_roundtrip_keeps_values_and_infinities(tmp_path):
    cols = [np.array([0.0, -0.0, 1e-300]), np.array([math.pi, math.inf, -2.5])]
    path = tmp_path / "x.csv"
    write_csv(path, ["a", "b"], cols)
    header, data = read_csv(path)
    assert header == ["a", "b"]
    assert np.array_equal(data, np.column_stack(cols))
    assert "-0" not in path.read_text()
    with pytest.raises(ValueError):
        write_csv(path, ["a"], [np.array([math.nan])])


def test_config_errors_exit_with_two(tmp_path, capsys):
    assert run("ohmic", tmp_path, "--colour", "blue")[0] == 2
    assert run("ohmic", tmp_path, "--S", "0.3")[0] == 2
    assert run("ohmic", tmp_path, "--gamma", "abc")[0] == 2
    assert run("ohmic", tmp_path, "--config", str(tmp_path / "missing.cfg"))[0] == 2
    assert "config error" in capsys.readouterr().err


def test_numerical_failures_exit_with_three(tmp_path, capsys):
    # noise synthesis needs a power-of-two length
    flags = [f for f in SIMULATE]
    flags[flags.index("128")] = "100"
    assert run("simulate", tmp_path, *flags)[0] == 3
    assert "numerical failure" in capsys.readouterr().err


def test_config_parsing_and_override_precedence():
    params = parse_config_text("# comment\nT = 2.5  # trailing\nH0=1\n\nclassical = yes\n")
    assert params == {"T": 2.5, "H0": 1.0, "classical": True}
    over = parse_overrides(["--T", "3", "--mz=none"])
    cfg = resolve("ohmic", params, over)
    assert cfg["T"] == 3.0 and cfg["H0"] == 1.0 and cfg["mz"] is None
    with pytest.raises(ConfigError):
        parse_config_text("T 2")
    with pytest.raises(ConfigError):
        parse_overrides(["--T"])


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "spinlangevin.cli", "equilibrium", "--H0", "1",
                          "--out", str(tmp_path / "e")], capture_output=True, text=True)
    assert out.returncode == 0
    assert (tmp_path / "e.csv").exists() and (tmp_path / "e.meta").exists()
