"""
Solver for ``i s u + d_t u - Lap u + grad p = f, div u = 0`` on the time circle
of period ``2 pi / omega`` times the periodic box.

Per mode ``(k, xi)``::

    p_hat = -i xi . f_hat / |xi|^2
    u_hat = P(xi) f_hat / (i s + i omega k + |xi|^2)

The resolvent parameter is reduced to ``s - omega l`` in ``[-omega/2, omega/2)``.
Multiplying the forcing by ``exp(i omega l t)`` is the index shift
``k -> k + l``; the solver applies it as a relabeling of the symbol so that no
mode is pushed out of the finite window.  The only possible zero of the symbol
is the reduced mode ``(0, 0)``, i.e. ``k = -l``; that mode is set to zero and
reported, provided no forcing lives there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from strot.errors import ModeOverflow, ResonantForcing
from strot.grid import (
    GridSpec,
    PhysicalField,
    SpectralField,
    lq_norm,
    mixed_norm,
    spectral_derivative,
    time_symbol,
    to_physical,
)
from strot.resonance import dist_to_lattice

RESONANCE_TOL = 1e-12
DROP_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class AuxProblem:
    s: float
    omega: float
    grid: GridSpec
    forcing: SpectralField

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if abs(self.grid.period * self.omega - 2 * np.pi) > 1e-12 * 2 * np.pi:
            raise ValueError(
                f"grid period {self.grid.period} must equal 2 pi / omega = "
                f"{2 * np.pi / self.omega}"
            )
        if self.forcing.n_components != 3:
            raise ValueError("forcing must be a 3-component field")
        if self.forcing.grid.shape(3) != self.grid.shape(3):
            raise ValueError("forcing grid does not match problem grid")
        if not np.all(np.isfinite(self.forcing.coeffs)):
            raise ValueError("forcing has non-finite coefficients")


@dataclass
class SolveReport:
    """Norms of one solve, keyed by ``q`` and then by term name.

    ``empirical_constant[q]`` is the sum of the main estimate terms divided by
    the forcing norm (``None`` for zero forcing).
    """

    kind: str
    s: float
    omega: float
    dist: float
    lq_norms: dict = field(default_factory=dict)
    residual_pde: float = 0.0
    residual_div: float = 0.0
    empirical_constant: dict = field(default_factory=dict)
    resonant_modes_zeroed: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)


def sobolev_exponents(q: float) -> tuple[float | None, float | None]:
    """``3q/(3-q)`` (if ``q < 3``) and ``3q/(3-2q)`` (if ``q < 3/2``)."""
    r1 = 3 * q / (3 - q) if q < 3 else None
    r2 = 3 * q / (3 - 2 * q) if q < 1.5 else None
    return r1, r2


def reduce_modulation(s: float, omega: float) -> tuple[int, float]:
    """``l = floor(s/omega + 1/2)`` and ``s - omega l`` in ``[-omega/2, omega/2)``."""
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    ell = math.floor(s / omega + 0.5)
    return int(ell), s - omega * ell


def shift_modes(coeffs: np.ndarray, shift: int, drop_tol: float = DROP_TOL) -> np.ndarray:
    """Move temporal index ``k`` to ``k + shift`` along axis 0 with zero fill.

    Raises ModeOverflow if content above ``drop_tol * max|c|`` would leave the
    mode range.
    """
    n = coeffs.shape[0]
    if shift == 0:
        return coeffs.copy()
    if abs(shift) >= n:
        lost = coeffs
    elif shift > 0:
        lost = coeffs[n - shift :]
    else:
        lost = coeffs[:-shift]
    scale = np.abs(coeffs).max() if coeffs.size else 0.0
    if lost.size and scale > 0 and np.abs(lost).max() > drop_tol * scale:
        raise ModeOverflow(
            f"shifting temporal modes by {shift} drops nonzero content; "
            f"increase n_time (currently {n})"
        )
    out = np.zeros_like(coeffs)
    if abs(shift) < n:
        if shift > 0:
            out[shift:] = coeffs[: n - shift]
        else:
            out[: n + shift] = coeffs[-shift:]
    return out


def modulate(field: SpectralField, ell: int, sign: int = 1) -> SpectralField:
    """Multiply by ``exp(i sign omega ell t)``: the index shift ``k -> k + sign ell``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return SpectralField(field.grid, shift_modes(field.coeffs, sign * ell), field.solenoidal)


def split_time_mean(f: SpectralField) -> tuple[SpectralField, SpectralField]:
    """Temporal mean ``f0`` (the ``k = 0`` slice) and the remainder."""
    f0 = np.zeros_like(f.coeffs)
    pos = f.grid.k_position(0)
    f0[pos] = f.coeffs[pos]
    return SpectralField(f.grid, f0), SpectralField(f.grid, f.coeffs - f0)


def _xi_arrays(grid: GridSpec):
    xi1, xi2, xi3 = grid.xi_mesh()
    xi_sq = xi1**2 + xi2**2 + xi3**2
    inv = np.divide(1.0, xi_sq, out=np.zeros_like(xi_sq), where=xi_sq > 0)
    return (xi1, xi2, xi3), xi_sq, inv


def _core_solve(grid: GridSpec, s_red: float, ell: int, omega: float, f: np.ndarray, sign_flip=False):
    """Mode-wise solve; returns (u, p, resonant mode position or None).

    Mode ``k`` is solved with the reduced parameter at the relabeled index
    ``k + ell``, which is the modulation shift without moving any data.
    """
    (xi1, xi2, xi3), xi_sq, inv = _xi_arrays(grid)
    xi_dot_f = xi1 * f[..., 0] + xi2 * f[..., 1] + xi3 * f[..., 2]
    proj = f - np.stack([xi1, xi2, xi3], axis=-1) * (xi_dot_f * inv)[..., None]
    p = -1j * xi_dot_f * inv
    k = (grid.mode_indices() + ell).astype(float)[:, None, None, None]
    D = 1j * (s_red + omega * k) + xi_sq[None]
    pos = None
    if abs(s_red) <= RESONANCE_TOL * omega and -grid.n_time // 2 <= -ell < grid.n_time // 2:
        pos = (grid.k_position(-ell),) + (grid.xi_position(0),) * 3
        D[pos] = 1.0
    if sign_flip:
        # test hook: corrupt the velocity symbol
        D = np.conj(D)
    u = proj / D[..., None]
    if pos is not None:
        u[pos] = 0.0
    return u, p, pos


def _apply_physical(grid, coeffs):
    return to_physical(SpectralField(grid, coeffs))


def aux_report(
    u: SpectralField,
    p: SpectralField,
    problem: AuxProblem,
    q_list: Sequence[float],
) -> SolveReport:
    """Estimate-side norms of a solution of the auxiliary problem."""
    grid = problem.grid
    s = problem.s
    dist = dist_to_lattice(s, problem.omega)
    res_pde, res_div = residual_aux(u, p, problem)
    rep = SolveReport("aux", s, problem.omega, dist, residual_pde=res_pde, residual_div=res_div)
    if not q_list:
        return rep
    lhs_time = (1j * s + time_symbol(grid))[:, None, None, None, None] * u.coeffs
    grad_u = spectral_derivative(u, "grad")
    fields = {
        "u": to_physical(u),
        "is_u_plus_dt_u": _apply_physical(grid, lhs_time),
        "grad_u": to_physical(grad_u),
        "hess_u": to_physical(spectral_derivative(grad_u, "grad")),
        "p": to_physical(p),
        "grad_p": to_physical(spectral_derivative(p, "grad")),
        "forcing": to_physical(problem.forcing),
    }
    for q in q_list:
        rep.lq_norms[q], rep.empirical_constant[q] = _norm_block(fields, q, dist)
    return rep


def _norm_block(fields, q, dist, prefix="u", time_term="is_u_plus_dt_u"):
    r1, r2 = sobolev_exponents(q)
    u_q = lq_norm(fields[prefix], q)
    block = {
        f"dist_weighted_{prefix}": dist * u_q,
        time_term: lq_norm(fields[time_term], q),
        f"hess_{prefix}": lq_norm(fields[f"hess_{prefix}"], q),
        "grad_p": lq_norm(fields["grad_p"], q),
        f"grad_{prefix}_sobolev": mixed_norm(fields[f"grad_{prefix}"], q, r1) if r1 else None,
        f"{prefix}_sobolev": mixed_norm(fields[prefix], q, r2) if r2 else None,
        "p_sobolev": mixed_norm(fields["p"], q, r1) if r1 else None,
        "forcing": lq_norm(fields["forcing"], q),
        f"{prefix}_lq": u_q,
    }
    main = (
        block[f"dist_weighted_{prefix}"]
        + block[time_term]
        + block[f"hess_{prefix}"]
        + block["grad_p"]
    )
    const = main / block["forcing"] if block["forcing"] > 0 else None
    return block, const


def solve_aux(
    problem: AuxProblem,
    q_list: Sequence[float] = (),
    _corrupt: bool = False,
) -> tuple[SpectralField, SpectralField, SolveReport]:
    """Solve the auxiliary problem and report the estimate norms for each ``q``.

    Raises:
        ResonantForcing: if the forcing has content on the resonant mode.
    """
    grid = problem.grid
    ell, s_red = reduce_modulation(problem.s, problem.omega)
    f = problem.forcing.coeffs
    u, p, pos = _core_solve(grid, s_red, ell, problem.omega, f, sign_flip=_corrupt)
    zeroed = []
    if pos is not None:
        scale = np.abs(f).max()
        if scale > 0 and np.abs(f[pos]).max() > RESONANCE_TOL * scale:
            raise ResonantForcing(
                f"forcing has content at the resonant mode k={-ell}, xi=0 "
                f"(s={problem.s} lies on omega Z); no solution in the zero-mean gauge",
                modes=[-ell],
            )
        zeroed.append(-ell)
    u_field = SpectralField(grid, u, solenoidal=True)
    p_field = SpectralField(grid, p[..., None])
    report = aux_report(u_field, p_field, problem, q_list)
    report.resonant_modes_zeroed = zeroed
    report.extra["modulation_shift"] = ell
    report.extra["s_reduced"] = s_red
    return u_field, p_field, report


def residual_aux(u: SpectralField, p: SpectralField, problem: AuxProblem) -> tuple[float, float]:
    """Relative l2 residuals of the momentum and divergence equations.

    Uses the exact lattice symbols (no Nyquist filtering), so by Parseval the
    values are relative L^2 norms.
    """
    grid = problem.grid
    (xi1, xi2, xi3), xi_sq, _ = _xi_arrays(grid)
    k = grid.mode_indices().astype(float)[:, None, None, None]
    D = 1j * (problem.s + problem.omega * k) + xi_sq[None]
    uc, pc, fc = u.coeffs, p.coeffs[..., 0], problem.forcing.coeffs
    xis = (xi1, xi2, xi3)
    r = np.stack([D * uc[..., j] + 1j * xis[j] * pc - fc[..., j] for j in range(3)], axis=-1)
    div = xi1 * uc[..., 0] + xi2 * uc[..., 1] + xi3 * uc[..., 2]
    f_norm = np.sqrt(np.sum(np.abs(fc) ** 2))
    r_norm = np.sqrt(np.sum(np.abs(r) ** 2))
    d_norm = np.sqrt(np.sum(np.abs(div) ** 2))
    if f_norm == 0:
        return float(r_norm), float(d_norm)
    return float(r_norm / f_norm), float(d_norm / f_norm)
