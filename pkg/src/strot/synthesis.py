"""
Time-periodic rotating problem with an arbitrary period ``T``.

The forcing is split into temporal modes ``f_k`` on the ``T``-clock. Mode
``k`` is the resolvent problem at ``s = (2 pi / T) k``, solved on the internal
``2 pi / omega`` clock, and the solution is the series
``u(t, x) = sum_k u_k(x) exp(i (2 pi / T) k t)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from strot.errors import ResonantForcing, SupportViolation
from strot.grid import GridSpec, PhysicalField, spatial_lq, temporal_modes
from strot.resonance import d_omega_T, in_lattice
from strot.rotation import _spatial_derivatives, rotation_term, solve_rot_resolvent

DROP_TOL = 1e-14

A_NORM_TERMS = ("u", "grad_u", "hess_u", "p", "grad_p", "dt_u_plus_rot_u")


def decompose_modes(f: PhysicalField, drop_tol: float = DROP_TOL) -> list[tuple[int, np.ndarray]]:
    """Temporal modes ``(k, f_k)`` of ``f``, dropping those below ``drop_tol * max``."""
    modes = temporal_modes(f)
    scale = max(np.abs(c).max() for c in modes.values())
    if scale == 0:
        return []
    return [(k, c) for k, c in sorted(modes.items()) if np.abs(c).max() > drop_tol * scale]


def synthesize(modes: Mapping[int, np.ndarray], grid: GridSpec) -> PhysicalField:
    """``sum_k u_k exp(i (2 pi / T) k t)`` sampled on ``grid`` (period ``T``)."""
    t = grid.times()
    first = next(iter(modes.values()))
    out = np.zeros((grid.n_time,) + first.shape, dtype=complex)
    for k in sorted(modes):
        out += np.exp(1j * grid.base_frequency * k * t)[:, None, None, None, None] * modes[k]
    return PhysicalField(grid, out)


@dataclass(frozen=True, eq=False)
class TPProblem:
    """Forcing modes on the ``period`` clock, with spatial samples ``(N, N, N, 3)``."""

    period: float
    omega: float
    modes: tuple
    grid: GridSpec

    def __post_init__(self):
        if not self.period > 0 or not self.omega > 0:
            raise ValueError("period and omega must be positive")
        modes = tuple((int(k), np.asarray(v, dtype=complex)) for k, v in self.modes)
        ks = [k for k, _ in modes]
        if len(set(ks)) != len(ks):
            raise ValueError(f"mode indices must be distinct, got {ks}")
        n = self.grid.n_space
        for k, v in modes:
            if v.shape != (n, n, n, 3):
                raise ValueError(f"mode {k} has shape {v.shape}, expected {(n, n, n, 3)}")
        object.__setattr__(self, "modes", tuple(sorted(modes, key=lambda m: m[0])))

    @classmethod
    def from_field(cls, f: PhysicalField, omega: float) -> "TPProblem":
        return cls(f.grid.period, omega, tuple(decompose_modes(f)), f.grid)

    def internal_grid(self, n_time: int = 8) -> GridSpec:
        g = self.grid
        return GridSpec(2 * math.pi / self.omega, g.box_len, g.n_space, n_time)

    def s_of(self, k: int) -> float:
        return 2 * math.pi / self.period * k


@dataclass
class TPReport:
    """Aggregated estimate data of a time-periodic solve.

    ``a_norms[q][name]`` are sums over modes of spatial ``L^q`` norms.
    ``empirical_constant[q]`` divides the main estimate terms (time term,
    Hessian and pressure gradient) by the forcing A-norm; ``mode_constants``
    holds the same ratio per mode.
    """

    period: float
    omega: float
    mode_reports: dict = field(default_factory=dict)
    a_norms: dict = field(default_factory=dict)
    forcing_a_norm: dict = field(default_factory=dict)
    empirical_constant: dict = field(default_factory=dict)
    mode_constants: dict = field(default_factory=dict)
    a2_dist_norm: dict = field(default_factory=dict)
    d_omega_T: float = 0.0
    d_informative: bool = False
    a1_indices: list = field(default_factory=list)
    a2_indices: list = field(default_factory=list)
    max_residual: float = 0.0


def mode_norms(u_k, p_k, s, omega, grid: GridSpec, q: float) -> dict:
    """Spatial ``L^q`` norms of one mode for every A-norm term."""
    grad_u, _ = _spatial_derivatives(u_k, grid)
    hess_u, _ = _spatial_derivatives(grad_u, grid)
    grad_p, _ = _spatial_derivatives(p_k, grid)
    dt_rot = 1j * s * u_k + rotation_term(u_k, grid, omega)
    return {
        "u": spatial_lq(u_k, grid, q),
        "grad_u": spatial_lq(grad_u, grid, q),
        "hess_u": spatial_lq(hess_u, grid, q),
        "p": spatial_lq(p_k, grid, q),
        "grad_p": spatial_lq(grad_p, grid, q),
        "dt_u_plus_rot_u": spatial_lq(dt_rot, grid, q),
    }


def split_modes(ks: Sequence[int], period: float, omega: float):
    """``A1 = {k : (2 pi / T) k in omega Z}`` and its complement among ``ks``."""
    a = 2 * math.pi / period
    a1 = [k for k in ks if in_lattice(a * k, omega)]
    a2 = [k for k in ks if k not in a1]
    return a1, a2


def a2_weighted_norm(
    u_modes: Mapping[int, np.ndarray],
    omega: float,
    period: float,
    q: float,
    grid: GridSpec,
    bound: int = 100,
) -> tuple[float, float, bool]:
    """``d_{omega,T} * sum_{k in A2} ||u_k||_q``.

    Returns ``(value, d, informative)``. When the lattice search does not
    stabilize the infimum is taken to be 0, and the value is 0 with
    ``informative = False``.
    """
    _, a2 = split_modes(sorted(u_modes), period, omega)
    res = d_omega_T(period, omega, bound)
    if not res.stabilized:
        return 0.0, 0.0, False
    total = sum(spatial_lq(u_modes[k], grid, q) for k in a2)
    return float(res.value * total), float(res.value), True


def solve_tp(
    problem: TPProblem,
    q_list: Sequence[float] = (),
    n_time_internal: int = 8,
    threads: int = 1,
    residual: bool = True,
):
    """Solve the rotating time-periodic problem mode by mode.

    Returns ``(u_modes, p_modes, report)`` where the mode dicts map ``k`` to
    spatial samples.

    Raises:
        ResonantForcing, SupportViolation: from a mode solve, with the mode
            index in the message.
    """
    grid = problem.grid
    inner = problem.internal_grid(n_time_internal)

    def run(item):
        k, f_k = item
        try:
            return solve_rot_resolvent(
                f_k, problem.s_of(k), problem.omega, q_list, grid=inner, residual=residual
            )
        except ResonantForcing as exc:
            raise ResonantForcing(f"mode k={k}: {exc}", modes=[k]) from exc
        except SupportViolation as exc:
            raise SupportViolation(f"mode k={k}: {exc}", exc.outside_fraction) from exc

    if threads > 1 and len(problem.modes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, problem.modes))
    else:
        results = [run(m) for m in problem.modes]

    u_modes, p_modes = {}, {}
    report = TPReport(problem.period, problem.omega)
    for (k, _), (v, p, rep) in zip(problem.modes, results):
        u_modes[k] = v.samples[0]
        p_modes[k] = p.samples[0]
        report.mode_reports[k] = rep
        report.max_residual = max(report.max_residual, rep.residual_pde)
    forcing = dict(problem.modes)
    ks = sorted(u_modes)
    report.a1_indices, report.a2_indices = split_modes(ks, problem.period, problem.omega)
    for q in q_list:
        per_mode = {
            k: mode_norms(u_modes[k], p_modes[k], problem.s_of(k), problem.omega, grid, q)
            for k in ks
        }
        f_norms = {k: spatial_lq(forcing[k], grid, q) for k in ks}
        report.a_norms[q] = {
            name: float(sum(per_mode[k][name] for k in ks)) for name in A_NORM_TERMS
        }
        report.forcing_a_norm[q] = float(sum(f_norms[k] for k in ks))
        main = {k: per_mode[k]["dt_u_plus_rot_u"] + per_mode[k]["hess_u"] + per_mode[k]["grad_p"] for k in ks}
        total = report.forcing_a_norm[q]
        report.empirical_constant[q] = float(sum(main.values()) / total) if total > 0 else None
        report.mode_constants[q] = {
            k: float(main[k] / f_norms[k]) for k in ks if f_norms[k] > 0
        }
        value, d, informative = a2_weighted_norm(u_modes, problem.omega, problem.period, q, grid)
        report.a2_dist_norm[q] = value
        report.d_omega_T, report.d_informative = d, informative
    if not q_list:
        res = d_omega_T(problem.period, problem.omega)
        report.d_omega_T = res.value if res.stabilized else 0.0
        report.d_informative = res.stabilized
    return u_modes, p_modes, report


def tp_residual(u_modes, p_modes, problem: TPProblem) -> float:
    """Largest per-mode relative residual of the rotating operator."""
    from strot.rotation import rot_residual

    worst = 0.0
    for k, f_k in problem.modes:
        pde, _ = rot_residual(
            u_modes[k], p_modes[k], f_k, problem.s_of(k), problem.omega, problem.grid,
            check_support=False,
        )
        worst = max(worst, pde)
    return worst
