import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strot.errors import FieldShapeError
from strot.grid import (
    GridSpec,
    PhysicalField,
    SpectralField,
    a_norm,
    lq_norm,
    mixed_norm,
    spatial_lq,
    spectral_derivative,
    temporal_modes,
    to_physical,
    to_spectral,
)

GRID = GridSpec(2 * math.pi, 2 * math.pi, 8, 4)


def _random_physical(grid, seed, comps=3):
    rng = np.random.default_rng(seed)
    shape = grid.shape(comps)
    return PhysicalField(grid, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(period=0.0, box_len=1.0, n_space=8, n_time=4),
        dict(period=1.0, box_len=-1.0, n_space=8, n_time=4),
        dict(period=1.0, box_len=1.0, n_space=7, n_time=4),
        dict(period=1.0, box_len=1.0, n_space=8, n_time=3),
    ],
)
def test_gridspec_rejects_bad_parameters(kwargs):
    with pytest.raises(ValueError):
        GridSpec(**kwargs)


def test_coordinates_are_centered():
    x = GRID.coordinates()
    assert x[0] == pytest.approx(-math.pi)
    assert x[GRID.n_space // 2] == pytest.approx(0.0)
    assert GRID.wave_indices()[GRID.xi_position(0)] == 0
    assert GRID.mode_indices()[GRID.k_position(-2)] == -2


def test_field_shape_is_checked():
    with pytest.raises(FieldShapeError):
        PhysicalField(GRID, np.zeros((4, 8, 8, 8)))
    with pytest.raises(FieldShapeError):
        SpectralField(GRID, np.zeros((2, 8, 8, 8, 3)))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_transform_round_trip(seed):
    f = _random_physical(GRID, seed)
    back = to_physical(to_spectral(f))
    np.testing.assert_allclose(back.samples, f.samples, atol=1e-12)


def test_single_exponential_has_one_coefficient():
    x1, x2, x3 = GRID.mesh()
    t = GRID.times()[:, None, None, None]
    vals = np.exp(1j * (GRID.base_frequency * 1 * t + 2 * x2))[..., None]
    c = to_spectral(PhysicalField(GRID, vals)).coeffs
    pos = (GRID.k_position(1), GRID.xi_position(0), GRID.xi_position(2), GRID.xi_position(0), 0)
    assert c[pos] == pytest.approx(1.0)
    c[pos] = 0
    assert np.abs(c).max() < 1e-14


def test_parseval():
    f = _random_physical(GRID, 1)
    c = to_spectral(f).coeffs
    lhs = lq_norm(f, 2) ** 2
    rhs = GRID.box_len**3 * np.sum(np.abs(c) ** 2)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_derivatives_of_trigonometric_field():
    x1, x2, x3 = GRID.mesh()
    vals = np.broadcast_to(np.sin(2 * x1) * np.cos(x3), GRID.shape(1)[:-1])[..., None]
    f = to_spectral(PhysicalField(GRID, np.array(vals, dtype=complex)))
    grad = to_physical(spectral_derivative(f, "grad")).samples
    np.testing.assert_allclose(grad[..., 0], 2 * np.cos(2 * x1) * np.cos(x3) + 0 * grad[..., 0], atol=1e-12)
    np.testing.assert_allclose(grad[..., 2], -np.sin(2 * x1) * np.sin(x3) + 0 * grad[..., 2], atol=1e-12)
    lap = to_physical(spectral_derivative(f, "laplacian")).samples[..., 0]
    np.testing.assert_allclose(lap, -5 * vals[..., 0], atol=1e-12)


def test_time_derivative():
    t = GRID.times()[:, None, None, None, None]
    vals = np.cos(GRID.base_frequency * t) * np.ones(GRID.shape(1))
    d = to_physical(spectral_derivative(to_spectral(PhysicalField(GRID, vals)), "time"))
    np.testing.assert_allclose(d.samples, -GRID.base_frequency * np.sin(GRID.base_frequency * t) * np.ones(GRID.shape(1)), atol=1e-12)


def test_norms_of_constant_field():
    f = PhysicalField(GRID, np.full(GRID.shape(3), 2.0 / math.sqrt(3), dtype=complex))
    vol = GRID.box_len**3
    assert lq_norm(f, 1.5) == pytest.approx(2.0 * vol ** (1 / 1.5))
    assert mixed_norm(f, 1.2, 3.0) == pytest.approx(2.0 * vol ** (1 / 3))
    assert spatial_lq(f.samples[0], GRID, 2.0) == pytest.approx(2.0 * vol**0.5)
    with pytest.raises(ValueError):
        lq_norm(f, 1.0)


def test_a_norm_matches_mode_sum():
    f = _random_physical(GRID, 5)
    modes = temporal_modes(f)
    expected = sum(spatial_lq(m, GRID, 1.3) for m in modes.values())
    assert a_norm(f, 1.3) == pytest.approx(expected, rel=1e-13)
    assert a_norm(modes, 1.3, GRID) == pytest.approx(expected, rel=1e-13)
    with pytest.raises(ValueError):
        a_norm(modes, 1.3)
