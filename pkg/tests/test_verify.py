import json
import math

import numpy as np
import pytest

from strot.grid import GridSpec
from strot.verify import (
    SweepSpec,
    compare_baseline,
    estimate_sweep,
    freeze_baseline,
    marcinkiewicz_scan,
    oracle_suite,
    rotation_grid,
    scan_at,
)

TWO_PI = 2 * math.pi
SMALL = GridSpec(TWO_PI, TWO_PI, 8, 4)


def _spec(**kw):
    base = dict(
        s_values=(0.0, 0.3, 1.0),
        omega_values=(1.0,),
        q_values=(1.2,),
        grid=SMALL,
        seed=3,
        s_relative=True,
    )
    base.update(kw)
    return SweepSpec(**base)


@pytest.mark.parametrize(
    "kw",
    [dict(q_values=(1.6,)), dict(omega_values=(0.0,)), dict(count=0), dict(s_values=())],
)
def test_sweep_spec_validation(kw):
    with pytest.raises(ValueError):
        _spec(**kw)


def test_fingerprint_tracks_inputs():
    assert _spec().fingerprint()["hash"] == _spec().fingerprint()["hash"]
    assert _spec().fingerprint()["hash"] != _spec(seed=4).fingerprint()["hash"]


def test_sweep_rows_and_thread_independence():
    spec = _spec(amplitudes=(0.0, 1.0))
    one = estimate_sweep(spec, "aux", threads=1)
    many = estimate_sweep(spec, "aux", threads=4)
    assert one.rows == many.rows
    statuses = {(r["s"], r["amplitude"]): r["status"] for r in one.rows}
    assert statuses[(0.0, 1.0)] == "error"  # s = 0 with a mean mode is resonant
    assert statuses[(0.3, 0.0)] == "skipped_zero_forcing"
    assert statuses[(0.3, 1.0)] == "ok"
    # s = 1.0 is a lattice point as well
    assert one.summary["status_counts"] == {"error": 2, "ok": 1, "skipped_zero_forcing": 3}


def test_small_omega_is_excluded():
    res = estimate_sweep(_spec(omega_values=(0.1, 1.0), s_values=(0.3,)), "aux")
    assert res.excluded_omega == [0.1]
    assert {r["omega"] for r in res.rows} == {1.0}


def test_unknown_kind():
    with pytest.raises(ValueError):
        estimate_sweep(_spec(), "nope")


def test_baseline_round_trip_and_tamper(tmp_path):
    res = estimate_sweep(_spec(), "aux")
    path = tmp_path / "base.json"
    freeze_baseline(res, path)
    assert compare_baseline(res, path) == (True, [])

    data = json.loads(path.read_text())
    row = next(r for r in data["rows"] if r["constant"] is not None)
    row["constant"] *= 1 + 1e-8
    path.write_text(json.dumps(data))
    ok, bad = compare_baseline(res, path)
    assert not ok and bad[0]["reason"] == "constant"

    other = estimate_sweep(_spec(seed=9), "aux")
    ok, bad = compare_baseline(other, path)
    assert not ok and bad == [{"reason": "fingerprint mismatch"}]


def test_scan_at_reports_every_order():
    eta = np.array([-3.0, -0.5, 0.5, 3.0])
    xi = np.array([0.1, 0.5, 2.0])
    rows = scan_at(0.25, 1.0, eta, xi, polish=False)
    assert len(rows) == 8 * 16
    assert all(np.isfinite(v["sup"]) for v in rows.values())
    polished = scan_at(0.25, 1.0, eta, xi)
    assert all(polished[key]["sup"] >= rows[key]["sup"] * (1 - 1e-6) for key in rows)
    with pytest.raises(ValueError):
        scan_at(0.25, 1.0, eta, np.array([-1.0, 1.0]))


def test_scan_rejects_bad_s():
    with pytest.raises(ValueError):
        marcinkiewicz_scan([0.0], 1.0)
    with pytest.raises(ValueError):
        marcinkiewicz_scan([0.75], 1.0)


def test_rotation_grid():
    g = rotation_grid(GridSpec(TWO_PI, TWO_PI, 16, 16))
    assert g.n_space == 32 and g.n_time == 8


def test_oracle_suite_catches_corruption():
    clean = oracle_suite(seed=1)
    assert clean.all_passed, [(r.name, r.worst) for r in clean.results]
    bad = oracle_suite(seed=1, corrupt=True)
    failed = {r.name for r in bad.results if not r.passed}
    assert {"single_mode", "aux_residual", "equivariant_cross_check"} <= failed
