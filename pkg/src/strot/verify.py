"""
Batch verification drivers.

* :func:`marcinkiewicz_scan` samples the weighted derivatives of the extended
  symbols and checks that their suprema do not depend on ``s``.
* :func:`estimate_sweep` tabulates empirical estimate constants over
  ``(s, omega, q, forcing)``.
* :func:`oracle_suite` runs the closed-form and cross-solver oracles.
* :func:`freeze_baseline` / :func:`compare_baseline` handle regression files.
"""

from __future__ import annotations

import hashlib
import json
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from strot.aux_solver import AuxProblem, solve_aux
from strot.forcing import (
    manufactured_rotating,
    random_single_mode,
    random_solenoidal,
    single_mode,
    swirl,
)
from strot.grid import (
    GridSpec,
    PhysicalField,
    SpectralField,
    lq_norm,
    spectral_derivative,
    to_physical,
    to_spectral,
)
from strot.io import read_json, write_json
from strot.resonance import dist_to_lattice
from strot.rotation import rot_operator, rotation_term, solve_rot_resolvent
from strot.synthesis import TPProblem, solve_tp
from strot.symbols import (
    DERIVATIVE_ORDERS,
    M_SYMBOLS,
    M_family_stack,
    _mixed_log_difference,
    log_grid,
    reflect,
    richardson_log_derivative,
)

# --------------------------------------------------------------------------
# Multiplier scan
# --------------------------------------------------------------------------

FD_STEP = 0.02
FD_RTOL = 1e-4
FD_ATOL = 1e-8


def _active_axes(alpha: int, beta) -> list[int]:
    return [0] * alpha + [i + 1 for i, b in enumerate(beta) if b]


def _weighted_values(s, omega, coords, active, n_levels=1):
    """Weighted derivatives of all symbols, shape ``(len(M_SYMBOLS), ...)``.

    ``n_levels=0`` is a plain central difference (used while searching),
    ``n_levels=1`` one Richardson step, and ``n_levels=2`` also returns a
    consistency mask comparing the two Richardson extrapolants.
    """

    def fn(*c):
        return M_family_stack(s, omega, *c)

    if n_levels == 0:
        if not active:
            return np.abs(fn(*coords)), None
        return np.abs(_mixed_log_difference(fn, coords, active, FD_STEP)), None
    est = richardson_log_derivative(fn, coords, active, FD_STEP, n_levels=n_levels)
    if len(est) == 1:
        return np.abs(est[0]), None
    a, b = est[-2], est[-1]
    ok = np.abs(a - b) <= np.maximum(FD_RTOL * np.abs(b), FD_ATOL)
    return np.abs(b), ok


_STENCIL = np.array(list(product((-1.0, 0.0, 1.0), repeat=4)))


def _polish(s, omega, active, logs, signs, best, step, tol, bounds, max_iter):
    """Pattern search for larger values in log coordinates.

    ``logs`` is ``(n_sym, n_start, 4)``; every start of row ``i`` is scored on
    symbol ``i``. Each iteration evaluates the full ``3^4`` stencil, moves to
    its best point and halves the step when the centre wins. Moves need a
    relative gain of ``1e-6`` to beat finite-difference noise.
    """
    lo, hi = bounds
    rows = np.arange(logs.shape[0])
    step = np.full(best.shape, float(step))
    for _ in range(max_iter):
        if not (step > tol).any():
            break
        cand = np.clip(logs[:, :, None, :] + step[..., None, None] * _STENCIL, lo, hi)
        pts = signs[:, :, None, :] * np.exp(cand)
        coords = tuple(pts[..., i] for i in range(4))
        vals, _ = _weighted_values(s, omega, coords, active, n_levels=0)
        vals = np.nan_to_num(vals[rows, rows], nan=-np.inf)  # row i scored on symbol i
        k = np.argmax(vals, axis=-1)
        top = np.take_along_axis(vals, k[..., None], -1)[..., 0]
        gain = top > best * (1 + 1e-6) + 1e-300
        moved = np.take_along_axis(cand, k[..., None, None].repeat(4, -1), 2)[:, :, 0]
        logs = np.where(gain[..., None], moved, logs)
        best = np.where(gain, top, best)
        step = np.where(gain, step, step / 2)
    return logs, best


def _take(arr, order):
    idx = order if arr.ndim == 2 else order[..., None].repeat(arr.shape[-1], -1)
    return np.take_along_axis(arr, idx, 1)


def scan_at(
    s: float,
    omega: float,
    eta_grid: np.ndarray,
    xi_grid: np.ndarray,
    polish: bool = True,
    n_seed: int = 6,
    n_keep: int = 2,
    tol: float = 1e-2,
) -> dict:
    """Suprema of all weighted derivatives at one ``s``.

    For each symbol the best grid point of each of the ``n_seed`` strongest
    ``eta`` slices seeds a pattern search; the ``n_keep`` best survivors are
    refined to log-step ``tol`` and the final value is re-evaluated with
    Richardson extrapolation. ``xi_grid`` holds positive values only: all
    weighted derivative magnitudes are invariant under ``xi_j -> -xi_j``.

    Returns ``{(symbol, alpha, beta): {"sup", "point", "consistent"}}``.
    """
    eta_grid = np.asarray(eta_grid, dtype=float)
    xi_grid = np.asarray(xi_grid, dtype=float)
    if np.any(xi_grid <= 0) or not np.any(eta_grid != 0):
        raise ValueError("xi_grid must be positive and eta_grid must have nonzero entries")
    grid_coords = (
        eta_grid[:, None, None, None],
        xi_grid[None, :, None, None],
        xi_grid[None, None, :, None],
        xi_grid[None, None, None, :],
    )
    n_eta, n_xi = len(eta_grid), len(xi_grid)
    abs_eta = np.abs(eta_grid[eta_grid != 0])
    bounds = (
        np.log(np.array([abs_eta.min(), xi_grid.min(), xi_grid.min(), xi_grid.min()])),
        np.log(np.array([abs_eta.max(), xi_grid.max(), xi_grid.max(), xi_grid.max()])),
    )
    spacing = np.diff(np.log(xi_grid)).max() if n_xi > 1 else 1.0
    out = {}
    for alpha, beta in DERIVATIVE_ORDERS:
        active = _active_axes(alpha, beta)
        vals, _ = _weighted_values(s, omega, grid_coords, active)
        vals = np.nan_to_num(vals, nan=0.0).reshape(len(M_SYMBOLS), n_eta, -1)
        arg = vals.argmax(axis=-1)  # best xi per (symbol, eta)
        best = np.take_along_axis(vals, arg[..., None], -1)[..., 0]
        i1, i2, i3 = np.unravel_index(arg, (n_xi,) * 3)
        pts = np.stack(
            [np.broadcast_to(eta_grid, arg.shape), xi_grid[i1], xi_grid[i2], xi_grid[i3]], -1
        )
        if polish:
            order = np.argsort(-best, axis=1)[:, :n_seed]
            pts, best = _take(pts, order), _take(best, order)
            signs, logs = np.sign(pts), np.log(np.abs(pts))
            logs, best = _polish(s, omega, active, logs, signs, best, spacing / 2, 0.05, bounds, 40)
            order = np.argsort(-best, axis=1)[:, :n_keep]
            logs, signs, best = _take(logs, order), _take(signs, order), _take(best, order)
            logs, best = _polish(s, omega, active, logs, signs, best, 0.05, tol, bounds, 40)
            pts = signs * np.exp(logs)
        top = best.argmax(axis=1)
        for i, name in enumerate(M_SYMBOLS):
            point = pts[i, top[i]]
            val, ok = _weighted_values(s, omega, tuple(point), active, n_levels=2)
            out[(name, alpha, tuple(beta))] = {
                "sup": float(val[i]),
                "point": [float(v) for v in point],
                "consistent": bool(ok[i]) if ok is not None else True,
            }
    return out


@dataclass
class ScanResult:
    """Per-(symbol, alpha, beta) suprema across ``s`` and the verdicts.

    ``uniformity_factor`` is the largest ratio ``max_s sup / min_s sup`` over
    rows; ``refinement_change`` the largest relative change of a supremum
    when the grid density is doubled.
    """

    rows: list
    s_values: list
    omega: float
    uniformity_factor: float
    refinement_change: float | None
    finite: bool
    consistent: bool
    stable: bool
    tolerances: dict = field(default_factory=dict)


def default_scan_grids(per_decade: int = 2, lo: float = 1e-3, hi: float = 1e3):
    return reflect(log_grid(lo, hi, per_decade)), log_grid(lo, hi, per_decade)


def marcinkiewicz_scan(
    s_list: Sequence[float],
    omega: float,
    eta_grid=None,
    xi_grid=None,
    per_decade: int = 1,
    refine: bool = True,
    refine_tol: float = 0.05,
    uniformity_tol: float = 1.05,
) -> ScanResult:
    """Scan the extended symbols for each ``s`` and judge stability.

    The default grids are log-spaced over ``[1e-3, 1e3]`` with ``per_decade``
    points per decade. ``refine`` repeats the scan at doubled density (only
    with the default grids). ``stable`` requires finite values, refinement changes
    within ``refine_tol`` and a uniformity factor within ``uniformity_tol``.
    """
    for s in s_list:
        if s == 0 or abs(s) > omega / 2 + 1e-15:
            raise ValueError(f"s values must be nonzero with |s| <= omega/2, got {s}")
    custom = eta_grid is not None or xi_grid is not None
    if eta_grid is None or xi_grid is None:
        d_eta, d_xi = default_scan_grids(per_decade)
        eta_grid = d_eta if eta_grid is None else eta_grid
        xi_grid = d_xi if xi_grid is None else xi_grid
    base = {s: scan_at(s, omega, eta_grid, xi_grid) for s in s_list}
    fine = None
    if refine and not custom:
        fe, fx = default_scan_grids(2 * per_decade)
        fine = {s: scan_at(s, omega, fe, fx) for s in s_list}
    rows = []
    uniform, change = 1.0, 0.0
    finite, consistent = True, True
    for key in base[s_list[0]]:
        name, alpha, beta = key
        per_s = {s: base[s][key]["sup"] for s in s_list}
        sups = list(per_s.values())
        finite &= all(math.isfinite(v) for v in sups)
        consistent &= all(base[s][key]["consistent"] for s in s_list)
        s_max = max(per_s, key=per_s.get)
        ratio = max(sups) / min(sups) if min(sups) > 0 else (1.0 if max(sups) == 0 else math.inf)
        uniform = max(uniform, ratio)
        row = {
            "symbol": name,
            "alpha": alpha,
            "beta": list(beta),
            "sup": max(sups),
            "argmax": {"s": s_max, "point": base[s_max][key]["point"]},
            "per_s": {repr(s): v for s, v in per_s.items()},
            "uniformity": ratio,
        }
        if fine is not None:
            fine_s = {s: fine[s][key]["sup"] for s in s_list}
            rel = max(
                abs(fine_s[s] - per_s[s]) / max(abs(fine_s[s]), 1e-300) for s in s_list
            )
            row["refined_per_s"] = {repr(s): v for s, v in fine_s.items()}
            row["refinement_change"] = rel
            change = max(change, rel)
        rows.append(row)
    stable = (
        finite
        and uniform <= uniformity_tol
        and (fine is None or change <= refine_tol)
    )
    return ScanResult(
        rows=rows,
        s_values=list(s_list),
        omega=omega,
        uniformity_factor=uniform,
        refinement_change=change if fine is not None else None,
        finite=finite,
        consistent=consistent,
        stable=bool(stable),
        tolerances={
            "refine": refine_tol,
            "uniformity": uniformity_tol,
            "fd_step": FD_STEP,
            "fd_rtol": FD_RTOL,
        },
    )


# --------------------------------------------------------------------------
# Estimate sweeps
# --------------------------------------------------------------------------

PROBLEM_KINDS = ("aux", "rot_resolvent", "tp")


@dataclass(frozen=True)
class SweepSpec:
    """Sampling plan of an estimate sweep.

    Attributes:
        s_values: resolvent parameters; multiplied by ``omega`` when
            ``s_relative`` is set. For ``tp`` sweeps they are the base
            frequencies ``2 pi / T`` instead.
        omega_values: rotation speeds.
        q_values: exponents in ``(1, 3/2)``.
        grid: spatial grid; its period and ``n_time`` set the small-omega
            exclusion ``omega < 2 pi / (period * n_time)``.
        seed: ensemble seed.
        count: forcings per cell.
        k_max: temporal band of the random forcings.
        amplitudes: each forcing is used at every amplitude (0 gives a
            skipped cell).
        sigma: width of the localized rotating forcings.
    """

    s_values: tuple
    omega_values: tuple
    q_values: tuple
    grid: GridSpec
    seed: int = 0
    count: int = 1
    k_max: int = 2
    amplitudes: tuple = (1.0,)
    s_relative: bool = False
    sigma: float = 0.4

    def __post_init__(self):
        for name in ("s_values", "omega_values", "q_values", "amplitudes"):
            vals = tuple(float(v) for v in getattr(self, name))
            if not vals:
                raise ValueError(f"{name} must be nonempty")
            object.__setattr__(self, name, vals)
        if any(w <= 0 for w in self.omega_values):
            raise ValueError("omega values must be positive")
        if any(not 1 < q < 1.5 for q in self.q_values):
            raise ValueError("q values must lie in (1, 3/2)")
        if self.count < 1:
            raise ValueError("count must be >= 1")

    def fingerprint(self) -> dict:
        d = {
            "grid": self.grid.fingerprint(),
            "seed": int(self.seed),
            "s_values": list(self.s_values),
            "omega_values": list(self.omega_values),
            "q_values": list(self.q_values),
            "count": self.count,
            "k_max": self.k_max,
            "amplitudes": list(self.amplitudes),
            "s_relative": self.s_relative,
            "sigma": self.sigma,
        }
        blob = json.dumps(d, sort_keys=True).encode()
        d["hash"] = hashlib.sha256(blob).hexdigest()
        return d


def _cell_grid(spec: SweepSpec, omega: float) -> GridSpec:
    g = spec.grid
    return GridSpec(2 * math.pi / omega, g.box_len, g.n_space, g.n_time)


def _run_cell(kind: str, spec: SweepSpec, omega: float, s: float, member: int, amp: float):
    """One sweep cell; returns a list of rows (one per q)."""
    grid = _cell_grid(spec, omega)
    base = {"kind": kind, "omega": omega, "s": s, "member": member, "amplitude": amp}
    q_list = list(spec.q_values)
    seed = [int(spec.seed), member]
    try:
        if amp == 0:
            return [dict(base, q=q, status="skipped_zero_forcing", constant=None) for q in q_list]
        if kind == "aux":
            f = random_solenoidal(grid, seed, k_max=spec.k_max).scale(amp)
            _, _, rep = solve_aux(AuxProblem(s, omega, grid, f), q_list)
            extra = {"dist": rep.dist, "residual": rep.residual_pde}
        elif kind == "rot_resolvent":
            _, _, g = manufactured_rotating(grid, s, omega, spec.sigma, member + int(spec.seed))
            _, _, rep = solve_rot_resolvent(amp * g, s, omega, q_list, grid=grid)
            extra = {"dist": rep.dist, "residual": rep.residual_pde}
        elif kind == "tp":
            if s <= 0:
                raise ValueError("tp sweeps need positive base frequencies 2 pi / T")
            period = 2 * math.pi / s
            ext = GridSpec(period, grid.box_len, grid.n_space, grid.n_time)
            modes = []
            for j, k in enumerate((1, -2)):
                _, _, g = manufactured_rotating(
                    grid, s * k, omega, spec.sigma, 2 * member + j + int(spec.seed)
                )
                modes.append((k, amp * g))
            _, _, rep = solve_tp(TPProblem(period, omega, tuple(modes), ext), q_list)
            extra = {"d_omega_T": rep.d_omega_T, "residual": rep.max_residual}
        else:
            raise ValueError(f"unknown problem kind {kind!r}")
    except Exception as exc:  # recorded in-table, sweep continues
        return [
            dict(base, q=q, status="error", constant=None, error=f"{type(exc).__name__}: {exc}")
            for q in q_list
        ]
    rows = []
    for q in q_list:
        row = dict(base, q=q, status="ok", constant=rep.empirical_constant[q], **extra)
        if kind in ("aux", "rot_resolvent"):
            block = rep.lq_norms[q]
            prefix = "u" if kind == "aux" else "v"
            row["dist_weighted"] = block[f"dist_weighted_{prefix}"]
            row["solution_lq"] = block[f"{prefix}_lq"]
        rows.append(row)
    return rows


@dataclass
class SweepResult:
    kind: str
    rows: list
    summary: dict
    excluded_omega: list
    fingerprint: dict


def estimate_sweep(spec: SweepSpec, problem_kind: str = "aux", threads: int = 1) -> SweepResult:
    """Empirical estimate constants over every ``(omega, s, forcing, q)`` cell.

    Rows come back sorted by ``(omega, s, member, amplitude, q)`` whatever the
    thread count, so tables are reproducible.
    """
    if problem_kind not in PROBLEM_KINDS:
        raise ValueError(f"problem_kind must be one of {PROBLEM_KINDS}")
    cutoff = 2 * math.pi / (spec.grid.period * spec.grid.n_time)
    omegas = [w for w in spec.omega_values if w >= cutoff]
    excluded = [w for w in spec.omega_values if w < cutoff]
    cells = []
    for omega in omegas:
        for s0 in spec.s_values:
            s = s0 * omega if spec.s_relative else s0
            for member in range(spec.count):
                for amp in spec.amplitudes:
                    cells.append((problem_kind, spec, omega, s, member, amp))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda c: _run_cell(*c), cells))
    else:
        chunks = [_run_cell(*c) for c in cells]
    rows = sorted(
        (r for chunk in chunks for r in chunk),
        key=lambda r: (r["omega"], r["s"], r["member"], r["amplitude"], r["q"]),
    )
    return SweepResult(problem_kind, rows, sweep_summary(rows), excluded, spec.fingerprint())


def sweep_summary(rows) -> dict:
    """Max, median and argmax of the constants per ``q``, plus status counts."""
    out = {"status_counts": {}, "per_q": {}}
    for r in rows:
        out["status_counts"][r["status"]] = out["status_counts"].get(r["status"], 0) + 1
    for q in sorted({r["q"] for r in rows}):
        ok = [r for r in rows if r["q"] == q and r["status"] == "ok"]
        if not ok:
            continue
        best = max(ok, key=lambda r: r["constant"])
        out["per_q"][repr(q)] = {
            "max": best["constant"],
            "median": statistics.median(r["constant"] for r in ok),
            "argmax": {k: best[k] for k in ("omega", "s", "member", "amplitude")},
            "max_over_median": best["constant"] / statistics.median(r["constant"] for r in ok),
        }
    return out


# --------------------------------------------------------------------------
# Baselines
# --------------------------------------------------------------------------


def baseline_payload(result: SweepResult) -> dict:
    return {
        "kind": result.kind,
        "fingerprint": result.fingerprint,
        "rows": [
            {k: r[k] for k in ("omega", "s", "member", "amplitude", "q", "status", "constant")}
            for r in result.rows
        ],
    }


def freeze_baseline(result: SweepResult, path) -> dict:
    payload = baseline_payload(result)
    write_json(path, payload)
    return payload


def compare_baseline(result: SweepResult, path, rtol: float = 1e-10) -> tuple[bool, list]:
    """Compare a sweep against a frozen baseline.

    Returns ``(ok, mismatches)``. A fingerprint mismatch is reported as a
    single entry and compares no constants.
    """
    frozen = read_json(path)
    if frozen["fingerprint"]["hash"] != result.fingerprint["hash"] or frozen["kind"] != result.kind:
        return False, [{"reason": "fingerprint mismatch"}]
    current = baseline_payload(result)["rows"]
    if len(current) != len(frozen["rows"]):
        return False, [{"reason": "row count mismatch"}]
    bad = []
    for new, old in zip(current, frozen["rows"]):
        key = {k: old[k] for k in ("omega", "s", "member", "amplitude", "q")}
        if new["status"] != old["status"]:
            bad.append(dict(key, reason="status", old=old["status"], new=new["status"]))
            continue
        a, b = new["constant"], old["constant"]
        if a is None or b is None:
            if a is not b:
                bad.append(dict(key, reason="constant presence"))
            continue
        if abs(a - b) > rtol * abs(b):
            bad.append(dict(key, reason="constant", old=b, new=a, rel=abs(a - b) / abs(b)))
    return not bad, bad


# --------------------------------------------------------------------------
# Oracle suite
# --------------------------------------------------------------------------


@dataclass
class OracleResult:
    name: str
    passed: bool
    tolerance: float
    worst: float
    detail: dict = field(default_factory=dict)


@dataclass
class OracleReport:
    results: list
    seed: int
    grid: dict

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)


def _oracle_single_mode(grid, seed, corrupt, n_cases=20):
    omega = grid.base_frequency
    rng = np.random.default_rng([seed, 1])
    worst, where = 0.0, None
    for _ in range(n_cases):
        s, k, n, a = random_single_mode(grid, rng, omega)
        f = single_mode(grid, k, n, a)
        u, p, _ = solve_aux(AuxProblem(s, omega, grid, f), _corrupt=corrupt)
        xi = (2 * np.pi / grid.box_len) * np.array(n, dtype=float)
        expected = a / (1j * s + 1j * omega * k + xi @ xi)
        pos = (grid.k_position(k),) + tuple(grid.xi_position(v) for v in n)
        err = np.abs(u.coeffs[pos] - expected).max() / np.abs(expected).max()
        other = np.abs(u.coeffs).sum() - np.abs(u.coeffs[pos]).sum()
        err = max(err, other / np.abs(expected).max(), np.abs(p.coeffs).max() / np.abs(a).max())
        if err > worst:
            worst, where = float(err), {"s": s, "k": k, "n": list(n)}
    return OracleResult("single_mode", worst <= 1e-12, 1e-12, worst, where or {})


def _oracle_gradient_forcing(grid, seed, corrupt):
    omega = grid.base_frequency
    rng = np.random.default_rng([seed, 2])
    shape = grid.shape(1)
    c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    xi1, xi2, xi3 = grid.xi_mesh()
    c *= np.exp(-(xi1**2 + xi2**2 + xi3**2) / 8)[None, ..., None]
    c[0], c[:, 0], c[:, :, 0], c[:, :, :, 0] = 0, 0, 0, 0
    c[:, grid.xi_position(0), grid.xi_position(0), grid.xi_position(0)] = 0
    phi = SpectralField(grid, c)
    f = spectral_derivative(phi, "grad")
    s = 0.3 * omega
    u, p, _ = solve_aux(AuxProblem(s, omega, grid, f), _corrupt=corrupt)
    err_u = np.abs(u.coeffs).max() / np.abs(f.coeffs).max()
    err_p = np.abs(p.coeffs - c).max() / np.abs(c).max()
    worst = float(max(err_u, err_p))
    return OracleResult("gradient_forcing", worst <= 1e-12, 1e-12, worst, {"s": s})


def _oracle_residual(grid, seed, corrupt, count=10):
    omega = grid.base_frequency
    worst, where = 0.0, None
    for i in range(count):
        f = random_solenoidal(grid, [seed, 3, i])
        s = float(np.random.default_rng([seed, 4, i]).uniform(-2, 2) * omega)
        if abs(math.remainder(s, omega)) < 1e-3 * omega:
            s += 0.1 * omega
        _, _, rep = solve_aux(AuxProblem(s, omega, grid, f), _corrupt=corrupt)
        err = max(rep.residual_pde, rep.residual_div)
        if err > worst:
            worst, where = float(err), {"member": i, "s": s}
    return OracleResult("aux_residual", worst <= 1e-10, 1e-10, worst, where or {})


def _oracle_resonance(grid, seed, corrupt, q=1.2):
    omega = grid.base_frequency
    k = 1
    amp = np.array([1.0, -0.5j, 0.25])
    f = single_mode(grid, k, (0, 0, 0), amp)
    f_norm = lq_norm(to_physical(f), q)
    worst, where = 0.0, None
    for e in range(1, 7):
        eps = 10.0**-e
        s = -omega * k + eps
        u, _, _ = solve_aux(AuxProblem(s, omega, grid, f), _corrupt=corrupt)
        lhs = dist_to_lattice(s, omega) * lq_norm(to_physical(u), q)
        err = abs(lhs - f_norm) / f_norm
        if err > worst:
            worst, where = float(err), {"eps": eps, "k": k}
    return OracleResult("resonance_sharpness", worst <= 1e-10, 1e-10, worst, where or {})


def rotation_grid(grid: GridSpec) -> GridSpec:
    """Grid for the rotation oracles: at least 32 points per axis."""
    return GridSpec(grid.period, grid.box_len, max(grid.n_space, 32), 8)


def _oracle_equivariant(grid, seed, corrupt, sigma=0.4):
    rgrid = rotation_grid(grid)
    omega = rgrid.base_frequency
    w = swirl(rgrid, sigma)
    zero_p = np.zeros(w.shape[:-1] + (1,))
    worst, where = 0.0, None
    for s in (0.0, 0.35 * omega):
        g = 1j * s * w + rot_operator(w, zero_p, 0.0, omega, rgrid) - rotation_term(w, rgrid, omega)
        v, _, rep = solve_rot_resolvent(g, s, omega, grid=rgrid)
        u, _, _ = solve_aux(
            AuxProblem(s, omega, rgrid, to_spectral(PhysicalField.static(rgrid, g))),
            _corrupt=corrupt,
        )
        plain = to_physical(u).samples[0]
        err = np.abs(v.samples[0] - plain).max() / np.abs(plain).max()
        if err > worst:
            worst, where = float(err), {"s": s, "n_space": rgrid.n_space}
    return OracleResult("equivariant_cross_check", worst <= 1e-6, 1e-6, worst, where or {})


def _oracle_rot_residual(grid, seed, corrupt, sigma=0.4):
    rgrid = rotation_grid(grid)
    omega = rgrid.base_frequency
    s = 0.3 * omega
    v_true, _, g = manufactured_rotating(rgrid, s, omega, sigma, seed)
    v, p, rep = solve_rot_resolvent(g, s, omega, grid=rgrid)
    worst = float(max(rep.residual_pde, rep.residual_div))
    return OracleResult(
        "rotating_residual", worst <= 1e-6, 1e-6, worst, {"s": s, "n_space": rgrid.n_space}
    )


ORACLES = (
    _oracle_single_mode,
    _oracle_gradient_forcing,
    _oracle_residual,
    _oracle_resonance,
    _oracle_equivariant,
    _oracle_rot_residual,
)


def oracle_suite(grid=None, seed: int = 0, corrupt: bool = False) -> OracleReport:
    """Run every oracle; failures are recorded, never raised.

    ``corrupt`` conjugates the velocity symbol inside the auxiliary solver
    (fault injection). Rotation oracles run on :func:`rotation_grid`.
    """
    if grid is None:
        grid = GridSpec(2 * math.pi, 2 * math.pi, 16, 16)
    results = []
    for oracle in ORACLES:
        try:
            results.append(oracle(grid, seed, corrupt))
        except Exception as exc:
            name = oracle.__name__.removeprefix("_oracle_")
            results.append(
                OracleResult(name, False, 0.0, math.inf, {"error": f"{type(exc).__name__}: {exc}"})
            )
    return OracleReport(results, seed, grid.fingerprint())
