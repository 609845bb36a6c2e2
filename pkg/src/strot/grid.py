"""
Space-time grid on the time circle times a periodic cube.

The time axis is sampled at ``t_j = j * period / n_time`` and each spatial axis
at ``x_j = -L/2 + j * L / N``. Spectral coefficients are Fourier-series
coefficients in both variables:

    u(t, x) = sum_{k, xi} c(k, xi) exp(i (2 pi / period) k t + i xi . x)

with ``k`` in ``{-n_time/2, ..., n_time/2 - 1}`` and ``xi`` in
``(2 pi / L) {-N/2, ..., N/2 - 1}^3``. Arrays are stored in that symmetric
(fftshifted) layout, time axis first and the component axis last::

    physical samples : (n_time, N, N, N, n_components)
    spectral coeffs  : (n_time, N, N, N, n_components)

Temporal integrals use the normalized measure (mean over one period), spatial
integrals the plain Lebesgue measure with cell volume ``(L/N)^3``.  With this
convention Parseval reads ``||u||_2^2 = L^3 * sum |c|^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Literal, Mapping

import numpy as np

from strot.errors import FieldShapeError

_SPACE_AXES = (1, 2, 3)
_ALL_AXES = (0, 1, 2, 3)


@dataclass(frozen=True)
class GridSpec:
    """Discretization parameters of the space-time domain.

    Attributes:
        period: length of the time circle.
        box_len: side length ``L`` of the cube ``[-L/2, L/2)^3``.
        n_space: points per spatial axis (even, at least 4).
        n_time: samples per period (even, at least 2).
    """

    period: float
    box_len: float
    n_space: int
    n_time: int

    def __post_init__(self):
        if not self.period > 0 or not np.isfinite(self.period):
            raise ValueError(f"period must be positive, got {self.period}")
        if not self.box_len > 0 or not np.isfinite(self.box_len):
            raise ValueError(f"box_len must be positive, got {self.box_len}")
        if self.n_space < 4 or self.n_space % 2:
            raise ValueError(f"n_space must be even and >= 4, got {self.n_space}")
        if self.n_time < 2 or self.n_time % 2:
            raise ValueError(f"n_time must be even and >= 2, got {self.n_time}")

    @property
    def spacing(self) -> float:
        return self.box_len / self.n_space

    @property
    def cell_volume(self) -> float:
        return self.spacing**3

    @property
    def volume(self) -> float:
        return self.box_len**3

    @property
    def base_frequency(self) -> float:
        """Temporal angular frequency ``2 pi / period``."""
        return 2 * np.pi / self.period

    def shape(self, n_components: int) -> tuple[int, ...]:
        n = self.n_space
        return (self.n_time, n, n, n, n_components)

    def mode_indices(self) -> np.ndarray:
        """Temporal mode numbers in storage order."""
        return np.arange(-self.n_time // 2, self.n_time // 2)

    def wave_indices(self) -> np.ndarray:
        """Integer spatial wave numbers along one axis in storage order."""
        return np.arange(-self.n_space // 2, self.n_space // 2)

    def wavenumbers(self) -> np.ndarray:
        return (2 * np.pi / self.box_len) * self.wave_indices()

    def coordinates(self) -> np.ndarray:
        return -self.box_len / 2 + self.spacing * np.arange(self.n_space)

    def times(self) -> np.ndarray:
        return self.period * np.arange(self.n_time) / self.n_time

    def mesh(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Broadcastable coordinate arrays of shape ``(N, N, N)``."""
        x = self.coordinates()
        return tuple(np.meshgrid(x, x, x, indexing="ij"))

    def xi_mesh(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        xi = self.wavenumbers()
        return tuple(np.meshgrid(xi, xi, xi, indexing="ij"))

    def k_position(self, k: int) -> int:
        """Array position of temporal mode ``k``."""
        pos = int(k) + self.n_time // 2
        if not 0 <= pos < self.n_time:
            raise IndexError(f"temporal mode {k} outside the grid range")
        return pos

    def xi_position(self, n: int) -> int:
        pos = int(n) + self.n_space // 2
        if not 0 <= pos < self.n_space:
            raise IndexError(f"wave number {n} outside the grid range")
        return pos

    def with_period(self, period: float) -> "GridSpec":
        return GridSpec(period, self.box_len, self.n_space, self.n_time)

    def fingerprint(self) -> dict:
        return {
            "period": float(self.period),
            "box_len": float(self.box_len),
            "n_space": int(self.n_space),
            "n_time": int(self.n_time),
        }


def _check_shape(grid: GridSpec, array: np.ndarray, what: str) -> int:
    if array.ndim != 5:
        raise FieldShapeError(f"{what} must be 5-dimensional, got shape {array.shape}")
    n_comp = array.shape[-1]
    if array.shape != grid.shape(n_comp):
        raise FieldShapeError(
            f"{what} shape {array.shape} does not match grid shape {grid.shape(n_comp)}"
        )
    return n_comp


@dataclass(frozen=True, eq=False)
class PhysicalField:
    """Samples of a scalar or vector field on the space-time grid."""

    grid: GridSpec
    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=complex))
        _check_shape(self.grid, self.samples, "samples")

    @property
    def n_components(self) -> int:
        return self.samples.shape[-1]

    @classmethod
    def zeros(cls, grid: GridSpec, n_components: int = 3) -> "PhysicalField":
        return cls(grid, np.zeros(grid.shape(n_components), dtype=complex))

    @classmethod
    def static(cls, grid: GridSpec, values: np.ndarray) -> "PhysicalField":
        """Time-independent field from spatial samples of shape ``(N, N, N, c)``."""
        values = np.asarray(values, dtype=complex)
        if values.ndim == 3:
            values = values[..., None]
        return cls(grid, np.broadcast_to(values, (grid.n_time,) + values.shape).copy())

    def mean_in_time(self) -> np.ndarray:
        """Spatial samples of the temporal mean, shape ``(N, N, N, c)``."""
        return self.samples.mean(axis=0)

    def __add__(self, other: "PhysicalField") -> "PhysicalField":
        return PhysicalField(self.grid, self.samples + other.samples)

    def __sub__(self, other: "PhysicalField") -> "PhysicalField":
        return PhysicalField(self.grid, self.samples - other.samples)

    def scale(self, factor: complex) -> "PhysicalField":
        return PhysicalField(self.grid, factor * self.samples)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Fourier coefficients on the dual lattice of the space-time grid.

    ``solenoidal`` is a tag; :meth:`check_solenoidal` verifies it.
    """

    grid: GridSpec
    coeffs: np.ndarray
    solenoidal: bool = dc_field(default=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex))
        _check_shape(self.grid, self.coeffs, "coeffs")

    @property
    def n_components(self) -> int:
        return self.coeffs.shape[-1]

    @classmethod
    def zeros(cls, grid: GridSpec, n_components: int = 3) -> "SpectralField":
        return cls(grid, np.zeros(grid.shape(n_components), dtype=complex))

    def mode(self, k: int) -> np.ndarray:
        """Spatial coefficient block of temporal mode ``k``."""
        return self.coeffs[self.grid.k_position(k)]

    def divergence_defect(self) -> float:
        """``max |xi . c| / max |c|`` (0 for the zero field)."""
        if self.n_components != 3:
            raise FieldShapeError("divergence needs a 3-component field")
        xi1, xi2, xi3 = self.grid.xi_mesh()
        c = self.coeffs
        div = xi1 * c[..., 0] + xi2 * c[..., 1] + xi3 * c[..., 2]
        scale = np.abs(c).max()
        return 0.0 if scale == 0 else float(np.abs(div).max() / scale)

    def check_solenoidal(self, tol: float = 1e-12) -> bool:
        return self.divergence_defect() <= tol

    def __add__(self, other: "SpectralField") -> "SpectralField":
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def scale(self, factor: complex) -> "SpectralField":
        return SpectralField(self.grid, factor * self.coeffs, self.solenoidal)


def to_spectral(field: PhysicalField) -> SpectralField:
    """Forward transform: temporal mean and spatial Fourier-series coefficients."""
    grid = field.grid
    a = np.fft.ifftshift(field.samples, axes=_SPACE_AXES)
    a = np.fft.fftn(a, axes=_ALL_AXES)
    a = np.fft.fftshift(a, axes=_ALL_AXES)
    return SpectralField(grid, a / (grid.n_time * grid.n_space**3))


def to_physical(field: SpectralField) -> PhysicalField:
    grid = field.grid
    a = np.fft.ifftshift(field.coeffs, axes=_ALL_AXES)
    a = np.fft.ifftn(a, axes=_ALL_AXES)
    a = np.fft.fftshift(a, axes=_SPACE_AXES)
    return PhysicalField(grid, a * (grid.n_time * grid.n_space**3))


def spatial_to_spectral(values: np.ndarray) -> np.ndarray:
    """Spatial-only transform of samples shaped ``(N, N, N, c)``."""
    n = values.shape[0]
    a = np.fft.fftn(np.fft.ifftshift(values, axes=(0, 1, 2)), axes=(0, 1, 2))
    return np.fft.fftshift(a, axes=(0, 1, 2)) / n**3


def spatial_to_physical(coeffs: np.ndarray) -> np.ndarray:
    n = coeffs.shape[0]
    a = np.fft.ifftn(np.fft.ifftshift(coeffs, axes=(0, 1, 2)), axes=(0, 1, 2))
    return np.fft.fftshift(a, axes=(0, 1, 2)) * n**3


def _odd_symbol(grid: GridSpec) -> np.ndarray:
    """``i xi`` along one axis with the Nyquist entry zeroed."""
    sym = 1j * grid.wavenumbers()
    sym[0] = 0.0
    return sym


def time_symbol(grid: GridSpec) -> np.ndarray:
    """``i (2 pi / period) k`` with the temporal Nyquist entry zeroed."""
    sym = 1j * grid.base_frequency * grid.mode_indices().astype(float)
    sym[0] = 0.0
    return sym


def gradient_symbols(grid: GridSpec) -> list[np.ndarray]:
    """Per-axis symbols broadcastable against ``(n_time, N, N, N)``."""
    sym = _odd_symbol(grid)
    return [
        sym[None, :, None, None],
        sym[None, None, :, None],
        sym[None, None, None, :],
    ]


def laplacian_symbol(grid: GridSpec) -> np.ndarray:
    xi1, xi2, xi3 = grid.xi_mesh()
    return -(xi1**2 + xi2**2 + xi3**2)


def _apply_gradient(grid: GridSpec, c: np.ndarray) -> np.ndarray:
    syms = gradient_symbols(grid)
    n_comp = c.shape[-1]
    out = np.empty(c.shape[:-1] + (3 * n_comp,), dtype=complex)
    for i in range(n_comp):
        for j in range(3):
            out[..., 3 * i + j] = syms[j] * c[..., i]
    return out


def spectral_derivative(
    field: SpectralField, which: Literal["time", "grad", "div", "laplacian"]
) -> SpectralField:
    """Coefficient-wise application of a differential operator.

    ``grad`` of an ``n``-component field returns ``3 n`` components ordered
    ``(component i, direction j) -> 3 i + j``. The Nyquist entries are zeroed
    for the first-order symbols.
    """
    grid = field.grid
    c = field.coeffs
    if which == "time":
        return SpectralField(grid, time_symbol(grid)[:, None, None, None, None] * c)
    if which == "grad":
        return SpectralField(grid, _apply_gradient(grid, c))
    if which == "div":
        if field.n_components != 3:
            raise FieldShapeError(
                f"div needs a 3-component field, got {field.n_components}"
            )
        syms = gradient_symbols(grid)
        div = sum(syms[j] * c[..., j] for j in range(3))
        return SpectralField(grid, div[..., None])
    if which == "laplacian":
        return SpectralField(grid, laplacian_symbol(grid)[None, ..., None] * c)
    raise ValueError(f"unknown derivative {which!r}")


def pointwise_magnitude(values: np.ndarray) -> np.ndarray:
    """Euclidean norm over the trailing component axis."""
    return np.sqrt(np.sum(np.abs(values) ** 2, axis=-1))


def _check_q(q: float):
    if not np.isfinite(q) or q <= 1:
        raise ValueError(f"q must be finite and > 1, got {q}")


def spatial_lq(values: np.ndarray, grid: GridSpec, q: float) -> float:
    """L^q norm over the box of spatial samples shaped ``(N, N, N, c)``."""
    _check_q(q)
    mag = pointwise_magnitude(values)
    return float((grid.cell_volume * np.sum(mag**q)) ** (1 / q))


def lq_norm(
    field: PhysicalField,
    q: float,
    scope: Literal["space_time", "space_per_slice"] = "space_time",
):
    """L^q norm with the normalized time measure.

    Returns a float for ``space_time`` and an array of per-slice spatial norms
    for ``space_per_slice``.
    """
    _check_q(q)
    grid = field.grid
    mag_q = pointwise_magnitude(field.samples) ** q
    per_slice = grid.cell_volume * mag_q.sum(axis=(1, 2, 3))
    if scope == "space_per_slice":
        return per_slice ** (1 / q)
    if scope == "space_time":
        return float(per_slice.mean() ** (1 / q))
    raise ValueError(f"unknown scope {scope!r}")


def mixed_norm(field: PhysicalField, q_time: float, r_space: float) -> float:
    """``L^q(T; L^r)`` norm: the time-L^q mean of spatial L^r norms."""
    _check_q(q_time)
    slices = lq_norm(field, r_space, "space_per_slice")
    return float(np.mean(slices**q_time) ** (1 / q_time))


def temporal_modes(field: PhysicalField) -> dict[int, np.ndarray]:
    """Temporal Fourier coefficients as spatial sample blocks ``(N, N, N, c)``."""
    grid = field.grid
    c = np.fft.fftshift(np.fft.fft(field.samples, axis=0), axes=0) / grid.n_time
    return {int(k): c[i] for i, k in enumerate(grid.mode_indices())}


def a_norm_modes(modes: Mapping[int, np.ndarray], grid: GridSpec, q: float) -> float:
    """Sum over temporal modes of the spatial L^q norm of each coefficient."""
    return float(sum(spatial_lq(modes[k], grid, q) for k in sorted(modes)))


def a_norm(field, q: float, grid: GridSpec | None = None) -> float:
    """Norm of absolutely convergent Fourier series in time with values in L^q.

    ``field`` is either a :class:`PhysicalField` (its temporal modes are taken
    with the discrete transform) or a mapping ``k -> spatial samples`` together
    with ``grid``.
    """
    if isinstance(field, PhysicalField):
        return a_norm_modes(temporal_modes(field), field.grid, q)
    if grid is None:
        raise ValueError("grid is required when passing a mode mapping")
    return a_norm_modes(field, grid, q)
