import json
import math

import pytest

from strot.cli import build_parser, main, resolve_config
from strot.io import read_field


def run(tmp_path, *args):
    return main(list(args) + ["--out", str(tmp_path)])


def test_solve_aux_writes_outputs(tmp_path):
    assert run(tmp_path, "solve-aux", "--grid", "8,8,6.283185307179586", "--q", "1.2,1.4") == 0
    for name in ("u.strf", "p.strf", "report.json", "resolved_config.json"):
        assert (tmp_path / name).is_file()
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["residual_pde"] < 1e-12
    assert set(rep["empirical_constant"]) == {"1.2", "1.4"}


def test_resonant_forcing_exit_code(tmp_path, capsys):
    code = run(tmp_path, "solve-aux", "--grid", "8,8,6.283185307179586", "--generator", "random", "--s", "1.0")
    assert code == 2
    assert "resonant" in capsys.readouterr().err


def test_missing_input_names_the_path(tmp_path, capsys):
    code = run(tmp_path, "solve-aux", "--input", str(tmp_path / "missing.strf"))
    assert code == 1
    assert "missing.strf" in capsys.readouterr().err


def test_shape_mismatch_is_structural(tmp_path, capsys):
    assert run(tmp_path / "a", "solve-aux", "--grid", "8,8,6.283185307179586") == 0
    code = run(tmp_path / "b", "solve-aux", "--grid", "16,8,6.283185307179586", "--input", str(tmp_path / "a" / "u.strf"))
    assert code == 1
    assert "does not match" in capsys.readouterr().err


def test_precedence_flags_over_file_over_defaults(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"s": 0.1, "omega": 2.0, "seed": 5}))
    args = build_parser().parse_args(["solve-aux", "--config", str(cfg), "--s", "0.2"])
    resolved = resolve_config(args)
    assert resolved["s"] == 0.2
    assert resolved["omega"] == 2.0
    assert resolved["seed"] == 5
    assert resolved["q"] == [1.2]


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"sss": 1}))
    assert run(tmp_path, "solve-aux", "--config", str(cfg)) == 1
    assert "sss" in capsys.readouterr().err


def test_resolved_config_reproduces_bytes(tmp_path):
    first = tmp_path / "first"
    assert run(first, "solve-aux", "--grid", "8,8,6.283185307179586", "--generator", "random", "--seed", "4", "--q", "1.3") == 0
    second = tmp_path / "second"
    assert main(["solve-aux", "--config", str(first / "resolved_config.json"), "--out", str(second)]) == 0
    for name in ("u.strf", "p.strf", "report.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_resonance_scan(tmp_path):
    assert run(tmp_path, "resonance-scan", "--s", "0.3", "--period", str(3 * math.pi)) == 0
    rep = json.loads((tmp_path / "resonance_report.json").read_text())
    assert rep["commensurable"] and rep["d_omega_T"] == pytest.approx(1 / 3)
    lines = (tmp_path / "spectrum_lines.csv").read_text().splitlines()
    assert lines[0] == "ell,imag,alpha_min,alpha_max" and len(lines) == 8


def test_solve_tp_writes_mode_index(tmp_path):
    assert run(tmp_path, "solve-tp", "--period", str(3 * math.pi), "--q", "1.2", "--threads", "1") == 0
    index = json.loads((tmp_path / "modes.json").read_text())
    assert [m["k"] for m in index["modes"]] == [-2, 1]
    u = read_field(tmp_path / index["modes"][0]["u"])
    assert u.samples.shape == (2, 32, 32, 32, 3)
    rep = json.loads((tmp_path / "tp_report.json").read_text())
    assert rep["max_residual"] < 1e-6


def test_sweep_and_baseline(tmp_path):
    args = ["sweep", "--grid", "8,4,6.283185307179586", "--s-range", "0,1,3", "--omega-values", "1.0", "--q", "1.2", "--threads", "1"]
    base = tmp_path / "base.json"
    assert main(args + ["--out", str(tmp_path / "a"), "--freeze-baseline", str(base)]) == 0
    assert main(args + ["--out", str(tmp_path / "b"), "--baseline", str(base)]) == 0
    assert (tmp_path / "a" / "sweep.csv").read_bytes() == (tmp_path / "b" / "sweep.csv").read_bytes()
    assert main(args + ["--out", str(tmp_path / "c"), "--seed", "1", "--baseline", str(base)]) == 1
