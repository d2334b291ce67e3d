import json
import subprocess
import sys

import numpy as np
import pytest

from ergodic_lattice.bump import BumpSpec
from ergodic_lattice.cli import main
from ergodic_lattice.config import ConfigError, ExperimentConfig
from ergodic_lattice.io import read_trace_csv, svg_line_plot


def write_config(tmp_path, **kw):
    path = tmp_path / "cfg.json"
    path.write_text(ExperimentConfig(**kw).to_json())
    return path


def run(argv, capsys=None):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out if capsys else ""
    return code, out


def test_generate_deterministic_and_seed_dependent(tmp_path):
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    assert run(["generate", "--seed", 7, "--out", a])[0] == 0
    assert run(["generate", "--seed", 7, "--out", b])[0] == 0
    assert run(["generate", "--seed", 8, "--out", c])[0] == 0
    ta, tb = (a / "trace_seed7.csv").read_bytes(), (b / "trace_seed7.csv").read_bytes()
    assert ta == tb
    _, va = read_trace_csv(ta.decode())
    _, vc = read_trace_csv((c / "trace_seed8.csv").read_text())
    assert np.any(va != vc)
    meta = json.loads((a / "realization_seed7.json").read_text())
    assert meta["seed"] == 7 and meta["bump"] == {"shape": "triangular", "a": 0.25}


def test_generate_q0_is_periodized_bump(tmp_path):
    cfg = write_config(tmp_path, q=0.0, trace_window=[-3.0, 5.0])
    assert run(["generate", "--config", cfg, "--out", tmp_path / "o"])[0] == 0
    t, v = read_trace_csv((tmp_path / "o" / "trace_seed7.csv").read_text())
    b = BumpSpec()
    expected = sum(b(t - m) for m in range(-5, 8))
    assert np.array_equal(v, expected)
    assert t[0] == -3.0 and t[-1] == 5.0
    assert (tmp_path / "o" / "trace_seed7.csv").read_text().splitlines()[0] == "t,value"


def test_invalid_bump_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"bump": {"shape": "triangular", "a": 0.5}}))
    assert run(["verify", "--config", path, "--out", tmp_path])[0] == 2
    assert not (tmp_path / "verify.json").exists()


def test_unknown_key_and_bad_json_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"radius": 10.0, "colour": "red"}))
    assert run(["generate", "--config", path])[0] == 2
    path.write_text("{not json")
    assert run(["generate", "--config", path])[0] == 2
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"orders": [4, 2]})


def test_bad_arguments_exit_2(tmp_path):
    assert run(["frobnicate"])[0] == 2
    assert run(["generate", "--config", tmp_path / "missing.json"])[0] == 2


def test_config_roundtrip():
    cfg = ExperimentConfig(q=0.3, orders=[1, 3], emit_plots=True, shifts=[0.25])
    assert ExperimentConfig.from_json(cfg.to_json()) == cfg
    assert ExperimentConfig.from_json(ExperimentConfig().to_json()) == ExperimentConfig()


def test_invariance_insufficient_samples(tmp_path, capsys):
    cfg = write_config(tmp_path, n_samples=10)
    code, out = run(["invariance", "--config", cfg, "--out", tmp_path, "--json"], capsys)
    assert code == 1
    assert "insufficient samples" in json.loads(out)["error"]


def test_invariance_writes_csv(tmp_path):
    cfg = write_config(tmp_path, n_samples=2000, n_events=3, shifts=[0.5, 3.7])
    code = run(["invariance", "--config", cfg, "--out", tmp_path])[0]
    rows = (tmp_path / "invariance.csv").read_text().splitlines()
    assert rows[0] == "z,event,freq_before,freq_after,exact,p_value"
    assert len(rows) == 1 + 3 * 2
    assert code in (0, 1)


def test_verify_small_config(tmp_path, capsys):
    cfg = write_config(tmp_path, n_samples=2000, n_events=4)
    code, out = run(["verify", "--config", cfg, "--out", tmp_path, "--json"], capsys)
    summary = json.loads(out)
    assert set(summary["suites"]) == {"bijection", "conjugacy", "group_law", "invariance",
                                      "period_equivalence", "equicontinuity"}
    assert code == (0 if summary["passed"] else 1)
    assert json.loads((tmp_path / "verify.json").read_text())["schema_version"] == 1


@pytest.mark.parametrize("q, target", [(0.5, 0.25), (0.3, 0.21)])
def test_decompose_flat_residual_curve(tmp_path, q, target):
    cfg = write_config(tmp_path, q=q, radius=4000.0, orders=[4, 8])
    assert run(["decompose", "--config", cfg, "--out", tmp_path])[0] == 0
    rows = (tmp_path / "residual_curve.csv").read_text().splitlines()
    assert rows[0] == "K,residual_l1,residual_b2,predicted_l1"
    for row in rows[1:]:
        assert abs(float(row.split(",")[1]) - target) < 0.02


def test_decompose_byte_identical_with_svg(tmp_path):
    cfg = write_config(tmp_path, q=0.3, radius=1000.0, orders=[1, 2], emit_plots=True)
    outs = []
    for name in ("one", "two"):
        assert run(["decompose", "--config", cfg, "--out", tmp_path / name])[0] in (0, 1)
        outs.append({p.name: p.read_bytes() for p in sorted((tmp_path / name).iterdir())})
    assert set(outs[0]) == {"decomposition.json", "residual_curve.csv", "residual_curve.svg"}
    assert outs[0] == outs[1]
    assert outs[0]["residual_curve.svg"].startswith(b"<svg")


def test_scan_and_spectrum(tmp_path, capsys):
    cfg = write_config(tmp_path, radius=500.0, scan_window=[0.0, 64.0], scan_max_p=32)
    code, out = run(["scan", "--config", cfg, "--out", tmp_path, "--json"], capsys)
    assert code == 0 and json.loads(out)["accepted"] == []
    assert (tmp_path / "sequence_window.csv").read_text().splitlines()[0] == "x"
    assert run(["spectrum", "--config", cfg, "--out", tmp_path])[0] == 0
    rows = (tmp_path / "spectrum.csv").read_text().splitlines()
    assert rows[0] == "lambda,re,im,abs" and len(rows) == 1 + 5 + 3


def test_svg_deterministic():
    series = {"a": ([1, 2, 4], [0.2, 0.3, 0.25])}
    assert svg_line_plot(series, "t") == svg_line_plot(series, "t")


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "ergodic_lattice", "generate", "--out",
                          str(tmp_path)], capture_output=True, text=True)
    assert res.returncode == 0 and "generate: ok" in res.stdout
