"""
Reproducible test forcings.

Random ensembles are Leray-projected complex Gaussian coefficients with
amplitude ``(1 + |xi|^2)^(-1)``, confined to a temporal band and with all
Nyquist planes removed, so every derivative used by the solvers is exact.

Localized fields for the rotating problem are Gaussians of width ``sigma``
times low-degree polynomials. :func:`manufactured_rotating` builds a forcing
from a chosen solution, which keeps the solution itself localized; a generic
localized forcing would produce a solution with slowly decaying tails that
the periodic box cannot hold.
"""

from __future__ import annotations

import numpy as np

from strot.grid import GridSpec, SpectralField, spatial_to_physical, spatial_to_spectral


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def leray_project(coeffs: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Apply ``I - xi xi^T / |xi|^2`` to coefficients shaped ``(..., N, N, N, 3)``."""
    xi1, xi2, xi3 = grid.xi_mesh()
    xi_sq = xi1**2 + xi2**2 + xi3**2
    inv = np.divide(1.0, xi_sq, out=np.zeros_like(xi_sq), where=xi_sq > 0)
    xi = np.stack([xi1, xi2, xi3], axis=-1)
    dot = np.sum(xi * coeffs, axis=-1)
    return coeffs - xi * (dot * inv)[..., None]


def random_solenoidal(
    grid: GridSpec,
    seed: int,
    k_max: int = 2,
    decay: float = 2.0,
    include_mean: bool = True,
) -> SpectralField:
    """Band-limited divergence-free random forcing.

    Args:
        grid: target grid.
        seed: generator seed.
        k_max: temporal band ``|k| <= k_max``.
        decay: spectral amplitude ``(1 + |xi|^2)^(-decay/2)``.
        include_mean: keep the spatial mean ``xi = 0`` modes.
    """
    rng = _rng(seed)
    shape = grid.shape(3)
    c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    xi1, xi2, xi3 = grid.xi_mesh()
    c *= ((1 + xi1**2 + xi2**2 + xi3**2) ** (-decay / 2))[None, ..., None]
    k = grid.mode_indices()
    c[np.abs(k) > k_max] = 0.0
    c[0] = 0.0
    c[:, 0] = 0.0
    c[:, :, 0] = 0.0
    c[:, :, :, 0] = 0.0
    if not include_mean:
        c[:, grid.xi_position(0), grid.xi_position(0), grid.xi_position(0)] = 0.0
    return SpectralField(grid, leray_project(c, grid), solenoidal=True)


def single_mode(grid: GridSpec, k: int, n: tuple[int, int, int], amplitude) -> SpectralField:
    """One coefficient ``amplitude`` at temporal mode ``k``, wave index ``n``."""
    c = np.zeros(grid.shape(3), dtype=complex)
    pos = (grid.k_position(k),) + tuple(grid.xi_position(v) for v in n)
    c[pos] = np.asarray(amplitude, dtype=complex)
    return SpectralField(grid, c)


def random_single_mode(grid: GridSpec, rng: np.random.Generator, omega: float):
    """Random admissible single-mode problem ``(s, k, n, a)`` with ``a`` normal to ``xi``.

    The parameter ``s`` is drawn away from the lattice so that the mode is not
    resonant.
    """
    half_t, half_x = grid.n_time // 2, grid.n_space // 2
    while True:
        k = int(rng.integers(-half_t + 1, half_t))
        n = tuple(int(v) for v in rng.integers(-half_x + 1, half_x, size=3))
        if any(n):
            break
    xi = (2 * np.pi / grid.box_len) * np.array(n, dtype=float)
    a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    a -= xi * (xi @ a) / (xi @ xi)
    s = float(rng.uniform(-3, 3) * omega)
    return s, k, n, a


def gaussian(grid: GridSpec, sigma: float, center=(0.0, 0.0, 0.0)) -> np.ndarray:
    x1, x2, x3 = grid.mesh()
    r2 = (x1 - center[0]) ** 2 + (x2 - center[1]) ** 2 + (x3 - center[2]) ** 2
    return np.exp(-r2 / (2 * sigma**2))


def swirl(grid: GridSpec, sigma: float) -> np.ndarray:
    """Equivariant field ``(0, -x3, x2) exp(-|x|^2 / 2 sigma^2)``."""
    _, x2, x3 = grid.mesh()
    g = gaussian(grid, sigma)
    return np.stack([np.zeros_like(g), -x3 * g, x2 * g], axis=-1)


def spatial_curl(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    c = spatial_to_spectral(values)
    sym = 1j * grid.wavenumbers()
    sym[0] = 0.0
    d = [sym[:, None, None], sym[None, :, None], sym[None, None, :]]
    out = np.stack(
        [
            d[1] * c[..., 2] - d[2] * c[..., 1],
            d[2] * c[..., 0] - d[0] * c[..., 2],
            d[0] * c[..., 1] - d[1] * c[..., 0],
        ],
        axis=-1,
    )
    return spatial_to_physical(out)


def spatial_gradient(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Gradient of a scalar given as ``(N, N, N)`` or ``(N, N, N, 1)``."""
    if values.ndim == 4:
        values = values[..., 0]
    c = spatial_to_spectral(values[..., None])[..., 0]
    sym = 1j * grid.wavenumbers()
    sym[0] = 0.0
    d = [sym[:, None, None], sym[None, :, None], sym[None, None, :]]
    return spatial_to_physical(np.stack([dj * c for dj in d], axis=-1))


def localized_solenoidal(grid: GridSpec, sigma: float, seed: int) -> np.ndarray:
    """Divergence-free ``curl(G (a + B x))`` with ``G`` a Gaussian and random ``a, B``."""
    rng = _rng(seed)
    a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    x = np.stack(grid.mesh(), axis=-1)
    potential = gaussian(grid, sigma)[..., None] * (a + x @ b.T)
    return spatial_curl(potential, grid)


def manufactured_rotating(grid: GridSpec, s: float, omega: float, sigma: float, seed: int):
    """Exact discrete solution ``(v, p)`` and forcing ``g`` of the rotating problem.

    Returns spatial samples ``(v, p, g)`` with ``p`` of shape ``(N, N, N, 1)``.
    """
    from strot.rotation import rot_operator

    rng = _rng(seed + 1)
    v = localized_solenoidal(grid, sigma, seed)
    amp = complex(rng.standard_normal(), rng.standard_normal())
    p = amp * gaussian(grid, sigma, center=tuple(0.2 * rng.standard_normal(3)))[..., None]
    p = p - p.mean()
    g = rot_operator(v, p, s, omega, grid)
    return v, p, g
