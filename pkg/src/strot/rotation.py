"""
Rotation about the x1-axis and the rotating-frame resolvent solver.

With ``Q(t)`` the rotation by ``omega t`` in the (x2, x3) plane, the change of
variables ``u~(t, x) = Q(t) u(t, Q(t)^T x)`` turns

    d_t u + omega (e1 ^ u - (e1 ^ x) . grad u)

into ``d_t u~``.  The resolvent solver extends a time-independent forcing ``g``
to ``f~(t, x) = Q(t) g(Q(t)^T x)``, solves the auxiliary problem on the
``2 pi / omega`` clock, rotates back and averages over one period.

Rotated samples are obtained by evaluating the trigonometric interpolant at
the rotated points. The periodic box is not rotation invariant, so every field
that is rotated has to be concentrated in the inscribed ball; the mass outside
is measured by :func:`support_check`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from strot.aux_solver import AuxProblem, SolveReport, _norm_block, solve_aux
from strot.errors import FieldShapeError, SupportViolation
from strot.grid import (
    GridSpec,
    PhysicalField,
    pointwise_magnitude,
    spatial_to_physical,
    spatial_to_spectral,
    to_physical,
    to_spectral,
)
from strot.resonance import dist_to_lattice

SUPPORT_TOL = 1e-8


def q_matrix(omega: float, t: float) -> np.ndarray:
    """Rotation by ``omega t`` about ``e1``."""
    theta = math.remainder(omega * t, 2 * math.pi)
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def q_dot(omega: float, t: float) -> np.ndarray:
    theta = math.remainder(omega * t, 2 * math.pi)
    c, s = math.cos(theta), math.sin(theta)
    return omega * np.array([[0.0, 0.0, 0.0], [0.0, -s, -c], [0.0, c, -s]])


def e1_cross(v: np.ndarray) -> np.ndarray:
    """``e1 ^ v`` along the trailing axis."""
    out = np.zeros_like(v)
    out[..., 1] = -v[..., 2]
    out[..., 2] = v[..., 1]
    return out


@dataclass(frozen=True)
class RotationFrame:
    omega: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")

    @property
    def period(self) -> float:
        return 2 * math.pi / self.omega

    def matrix(self, t: float) -> np.ndarray:
        return q_matrix(self.omega, t)


@dataclass(frozen=True)
class SupportCheck:
    radius: float
    outside_mass_fraction: float


def support_check(field: PhysicalField, radius: float | None = None) -> SupportCheck:
    """Largest per-slice fraction of L^2 mass outside the ball of ``radius``.

    Only the (x2, x3) distance counts: rotation about ``e1`` keeps ``x1`` fixed,
    so the relevant region is the inscribed cylinder of radius ``L/2``.
    """
    grid = field.grid
    radius = grid.box_len / 2 if radius is None else radius
    _, x2, x3 = grid.mesh()
    outside = (x2**2 + x3**2) > radius**2
    mass = pointwise_magnitude(field.samples) ** 2
    total = mass.sum(axis=(1, 2, 3))
    out = (mass * outside[None]).sum(axis=(1, 2, 3))
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = np.where(total > 0, out / total, 0.0)
    return SupportCheck(float(radius), float(frac.max()))


def _plane_coefficients(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """(x2, x3) Fourier coefficients with the Nyquist entries split symmetrically.

    Returns shape ``(N+1, N+1, N1 * c)`` for wave indices ``-N/2..N/2``.
    """
    n = grid.n_space
    c = np.fft.fft2(np.fft.ifftshift(values, axes=(1, 2)), axes=(1, 2))
    c = np.fft.fftshift(c, axes=(1, 2)) / n**2
    ext = np.zeros((values.shape[0], n + 1, n + 1, values.shape[-1]), dtype=complex)
    ext[:, :n, :n] = c
    ext[:, n, :] = ext[:, 0, :] / 2
    ext[:, 0, :] /= 2
    ext[:, :, n] = ext[:, :, 0] / 2
    ext[:, :, 0] /= 2
    return ext.transpose(1, 2, 0, 3).reshape(n + 1, n + 1, -1)


def _evaluate_plane(coeffs: np.ndarray, grid: GridSpec, y2: np.ndarray, y3: np.ndarray):
    """Evaluate the interpolant at points ``(x1_i, y2_p, y3_p)`` for all grid ``x1``."""
    n = grid.n_space
    kk = (2 * np.pi / grid.box_len) * np.arange(-n // 2, n // 2 + 1)
    e2 = np.exp(1j * y2[:, None] * kk[None, :])
    e3 = np.exp(1j * y3[:, None] * kk[None, :])
    partial = np.matmul(e3[None], coeffs)  # (a, P, B)
    return np.einsum("pa,apb->pb", e2, partial)


def sample_rotated(values: np.ndarray, grid: GridSpec, rot: np.ndarray, coeffs=None) -> np.ndarray:
    """Samples of ``x -> values(rot @ x)`` on the grid, shape ``(N, N, N, c)``.

    ``rot`` must fix ``e1``.
    """
    n = grid.n_space
    if coeffs is None:
        coeffs = _plane_coefficients(values, grid)
    x = grid.coordinates()
    x2, x3 = (a.ravel() for a in np.meshgrid(x, x, indexing="ij"))
    y2 = rot[1, 1] * x2 + rot[1, 2] * x3
    y3 = rot[2, 1] * x2 + rot[2, 2] * x3
    flat = _evaluate_plane(coeffs, grid, y2, y3)  # (P, N1 * c)
    # rotation keeps the axial distance; beyond L/2 the interpolant would
    # return periodic images, and supported fields vanish there anyway
    flat[x2**2 + x3**2 > (grid.box_len / 2) ** 2] = 0.0
    n_comp = values.shape[-1]
    return flat.reshape(n, n, n, n_comp).transpose(2, 0, 1, 3)


def _check_period(grid: GridSpec, omega: float):
    if abs(grid.period * omega - 2 * math.pi) > 1e-12 * 2 * math.pi:
        raise ValueError(
            f"grid period {grid.period} must equal 2 pi / omega = {2 * math.pi / omega}"
        )


def conjugate_field(
    field: PhysicalField,
    frame: RotationFrame,
    direction: Literal["to_inertial", "to_rotating"],
    kind: Literal["vector", "scalar"] = "vector",
    check_support: bool = True,
    support_tol: float = SUPPORT_TOL,
) -> PhysicalField:
    """Change between the rotating frame and the non-rotating frame.

    ``to_inertial``:  ``u~(t, x) = Q(t) u(t, Q(t)^T x)``
    ``to_rotating``:  ``u(t, x) = Q(t)^T u~(t, Q(t) x)``

    Raises:
        SupportViolation: if more than ``support_tol`` of the L^2 mass of some
            time slice lies outside the inscribed cylinder.
    """
    grid = field.grid
    _check_period(grid, frame.omega)
    if kind == "vector" and field.n_components != 3:
        raise FieldShapeError("vector conjugation needs 3 components")
    if kind not in ("vector", "scalar"):
        raise ValueError(f"unknown kind {kind!r}")
    if direction not in ("to_inertial", "to_rotating"):
        raise ValueError(f"unknown direction {direction!r}")
    if check_support:
        sc = support_check(field)
        if sc.outside_mass_fraction > support_tol:
            raise SupportViolation(
                f"{sc.outside_mass_fraction:.3e} of the field's L2 mass lies outside "
                f"radius {sc.radius:.4g}; rotation would alias periodic images",
                sc.outside_mass_fraction,
            )
    samples = field.samples
    static = all(np.array_equal(samples[0], samples[j]) for j in range(1, grid.n_time))
    shared = _plane_coefficients(samples[0], grid) if static else None
    out = np.empty_like(samples)
    for j, t in enumerate(grid.times()):
        q = frame.matrix(t)
        rot, comp = (q.T, q) if direction == "to_inertial" else (q, q.T)
        vals = sample_rotated(samples[j], grid, rot, coeffs=shared)
        out[j] = vals @ comp.T if kind == "vector" else vals
    return PhysicalField(grid, out)


def _static_grid(grid: GridSpec) -> GridSpec:
    return GridSpec(grid.period, grid.box_len, grid.n_space, 2)


def _static_field(grid: GridSpec, values: np.ndarray) -> PhysicalField:
    return PhysicalField.static(_static_grid(grid), values)


def spatial_values(field) -> np.ndarray:
    """Spatial samples ``(N, N, N, c)`` of a time-independent field."""
    if isinstance(field, PhysicalField):
        s = field.samples
        scale = np.abs(s).max()
        if scale > 0 and np.abs(s - s[0]).max() > 1e-12 * scale:
            raise ValueError("expected a time-independent field")
        return s[0]
    arr = np.asarray(field, dtype=complex)
    return arr[..., None] if arr.ndim == 3 else arr


def _spatial_derivatives(values: np.ndarray, grid: GridSpec):
    """Gradient (3c comps, ordered 3 i + j) and Laplacian of spatial samples."""
    c = spatial_to_spectral(values)
    sym = 1j * grid.wavenumbers()
    sym[0] = 0.0
    syms = [sym[:, None, None], sym[None, :, None], sym[None, None, :]]
    n_comp = values.shape[-1]
    grad = np.empty(values.shape[:-1] + (3 * n_comp,), dtype=complex)
    for i in range(n_comp):
        for j in range(3):
            grad[..., 3 * i + j] = syms[j] * c[..., i]
    xi = grid.wavenumbers()
    lap_sym = -(xi[:, None, None] ** 2 + xi[None, :, None] ** 2 + xi[None, None, :] ** 2)
    lap = lap_sym[..., None] * c
    return spatial_to_physical(grad), spatial_to_physical(lap)


def leray_pressure(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Zero-mean pressure ``-i xi . g_hat / |xi|^2`` of spatial samples."""
    c = spatial_to_spectral(values)
    xi1, xi2, xi3 = grid.xi_mesh()
    xi_sq = xi1**2 + xi2**2 + xi3**2
    inv = np.divide(1.0, xi_sq, out=np.zeros_like(xi_sq), where=xi_sq > 0)
    p = -1j * (xi1 * c[..., 0] + xi2 * c[..., 1] + xi3 * c[..., 2]) * inv
    return spatial_to_physical(p[..., None])


def rotation_term(values: np.ndarray, grid: GridSpec, omega: float) -> np.ndarray:
    """``omega (e1 ^ v - (e1 ^ x) . grad v)`` evaluated pointwise."""
    grad, _ = _spatial_derivatives(values, grid)
    _, x2, x3 = grid.mesh()
    d2 = grad[..., 1::3]
    d3 = grad[..., 2::3]
    transport = -x3[..., None] * d2 + x2[..., None] * d3
    return omega * (e1_cross(values) - transport)


def rot_operator(v, p, s: float, omega: float, grid: GridSpec) -> np.ndarray:
    """``i s v + omega (e1 ^ v - (e1 ^ x) . grad v) - Lap v + grad p``."""
    v = spatial_values(v)
    p = spatial_values(p)
    _, lap = _spatial_derivatives(v, grid)
    grad_p, _ = _spatial_derivatives(p, grid)
    return 1j * s * v + rotation_term(v, grid, omega) - lap + grad_p


def rot_residual(
    v,
    p,
    g,
    s: float,
    omega: float,
    grid: GridSpec | None = None,
    check_support: bool = True,
    support_tol: float = SUPPORT_TOL,
) -> tuple[float, float]:
    """Relative L^2 residuals of the rotating resolvent system.

    Raises:
        SupportViolation: if ``v`` is not concentrated in the inscribed cylinder.
    """
    if grid is None:
        grid = v.grid
    v_vals = spatial_values(v)
    if check_support:
        sc = support_check(_static_field(grid, v_vals))
        if sc.outside_mass_fraction > support_tol:
            raise SupportViolation(
                f"velocity has {sc.outside_mass_fraction:.3e} of its mass outside the "
                "inscribed cylinder; the rotation term is not meaningful there",
                sc.outside_mass_fraction,
            )
    g_vals = spatial_values(g)
    r = rot_operator(v_vals, p, s, omega, grid) - g_vals
    grad, _ = _spatial_derivatives(v_vals, grid)
    div = grad[..., 0] + grad[..., 4] + grad[..., 8]
    g_norm = np.sqrt(np.sum(np.abs(g_vals) ** 2))
    r_norm = np.sqrt(np.sum(np.abs(r) ** 2))
    d_norm = np.sqrt(np.sum(np.abs(div) ** 2))
    if g_norm == 0:
        return float(r_norm), float(d_norm)
    return float(r_norm / g_norm), float(d_norm / g_norm)


def rot_report(v, p, g, s, omega, grid, q_list) -> SolveReport:
    """Estimate-side norms of a rotating resolvent solution."""
    dist = dist_to_lattice(s, omega)
    rep = SolveReport("rot_resolvent", s, omega, dist)
    if not q_list:
        return rep
    v, p, g = spatial_values(v), spatial_values(p), spatial_values(g)
    grad_v, _ = _spatial_derivatives(v, grid)
    hess_v, _ = _spatial_derivatives(grad_v, grid)
    grad_p, _ = _spatial_derivatives(p, grid)
    lhs = 1j * s * v + rotation_term(v, grid, omega)
    fields = {
        name: _static_field(grid, vals)
        for name, vals in {
            "v": v,
            "is_v_plus_rot_v": lhs,
            "grad_v": grad_v,
            "hess_v": hess_v,
            "p": p,
            "grad_p": grad_p,
            "forcing": g,
        }.items()
    }
    for q in q_list:
        rep.lq_norms[q], rep.empirical_constant[q] = _norm_block(
            fields, q, dist, prefix="v", time_term="is_v_plus_rot_v"
        )
    return rep


def solve_rot_resolvent(
    g,
    s: float,
    omega: float,
    q_list: Sequence[float] = (),
    grid: GridSpec | None = None,
    support_tol: float = SUPPORT_TOL,
    residual: bool = True,
) -> tuple[PhysicalField, PhysicalField, SolveReport]:
    """Solve ``i s v + omega (e1 ^ v - (e1 ^ x) . grad v) - Lap v + grad p = g``.

    ``g`` is a time-independent field on a grid whose period is ``2 pi/omega``
    (or spatial samples together with ``grid``). Returns time-independent
    ``v`` and ``p`` on that grid. ``v`` is the period mean of the back-rotated
    auxiliary solution; ``p`` is the Leray pressure of ``g``, which is what the
    mean of the back-rotated auxiliary pressure equals.

    Raises:
        SupportViolation: if ``g`` is not concentrated in the inscribed cylinder.
        ResonantForcing: propagated from the auxiliary solve.
    """
    if grid is None:
        grid = g.grid
    _check_period(grid, omega)
    g_vals = spatial_values(g)
    frame = RotationFrame(omega)
    g_ext = PhysicalField.static(grid, g_vals)
    f_tilde = to_spectral(
        conjugate_field(g_ext, frame, "to_inertial", "vector", True, support_tol)
    )
    # the box mean of Q g(Q^T x) is exactly Q mean(g) for supported g
    g_mean = g_vals.mean(axis=(0, 1, 2))
    exact_mean = np.stack([frame.matrix(t) @ g_mean for t in grid.times()])
    c0 = (slice(None),) + (grid.xi_position(0),) * 3
    f_tilde.coeffs[c0] = np.fft.fftshift(np.fft.fft(exact_mean, axis=0), axes=0) / grid.n_time
    u_t, _, aux_rep = solve_aux(AuxProblem(s, omega, grid, f_tilde))
    u_phys = to_physical(u_t)
    inner_support = support_check(u_phys).outside_mass_fraction
    u = conjugate_field(u_phys, frame, "to_rotating", "vector", check_support=False)
    v_vals = u.mean_in_time()
    # the rotation term of a solenoidal field is solenoidal, so the averaged
    # back-rotated pressure is the Leray pressure of g; computing it directly
    # keeps the zero-mean gauge constant out of the rotation
    p_vals = leray_pressure(g_vals, grid)
    v_norm = np.sqrt(np.sum(np.abs(v_vals) ** 2) * grid.n_time)
    wobble = np.sqrt(np.sum(np.abs(u.samples - v_vals[None]) ** 2))
    report = rot_report(v_vals, p_vals, g_vals, s, omega, grid, q_list)
    report.resonant_modes_zeroed = aux_rep.resonant_modes_zeroed
    report.extra.update(
        {
            "aux_residual_pde": aux_rep.residual_pde,
            "aux_residual_div": aux_rep.residual_div,
            "inner_outside_mass_fraction": inner_support,
            "time_dependence": float(wobble / v_norm) if v_norm > 0 else 0.0,
        }
    )
    if residual:
        report.residual_pde, report.residual_div = rot_residual(
            v_vals, p_vals, g_vals, s, omega, grid, check_support=False
        )
        report.extra["outside_mass_fraction"] = support_check(
            _static_field(grid, v_vals)
        ).outside_mass_fraction
    return PhysicalField.static(grid, v_vals), PhysicalField.static(grid, p_vals), report
