import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strot.symbols import (
    DERIVATIVE_ORDERS,
    M_SYMBOLS,
    FreqPoint,
    M_family_arrays,
    M_family_stack,
    cutoff_chi,
    eval_M_family,
    eval_m_family,
    leray_symbol,
    log_grid,
    pressure_symbols,
    reflect,
    richardson_log_derivative,
    weighted_derivative,
)

finite = st.floats(-20, 20, allow_nan=False)


def test_sixteen_derivative_orders():
    assert len(DERIVATIVE_ORDERS) == 16
    assert len(set(DERIVATIVE_ORDERS)) == 16


@settings(max_examples=200)
@given(finite, st.floats(0.1, 5), st.integers(-30, 30), finite, finite, finite)
def test_partition_of_unity(s, omega, k, a, b, c):
    p = FreqPoint(k, (a, b, c), s, omega)
    bundle = eval_m_family(p)
    if bundle.resonant:
        return
    total = bundle.m0 + bundle.m1 - np.trace(bundle.mjl)
    size = 1 + abs(bundle.m0) + abs(bundle.m1) + abs(np.trace(bundle.mjl))
    assert abs(total - 1) <= 1e-14 * size


def test_resonant_point_is_flagged():
    b = eval_m_family(FreqPoint(-2, (0, 0, 0), 2.0, 1.0))
    assert b.resonant and np.isnan(b.m)


@settings(max_examples=100)
@given(finite, finite, finite)
def test_leray_projector(a, b, c):
    xi = np.array([a, b, c])
    P = leray_symbol(xi)
    np.testing.assert_allclose(P @ P, P, atol=1e-14)
    if xi @ xi > 1e-6:
        np.testing.assert_allclose(P @ xi, 0, atol=1e-12 * np.linalg.norm(xi))


def test_pressure_symbols():
    q, g = pressure_symbols([0.0, 2.0, 0.0])
    np.testing.assert_allclose(q, [0, -0.5j, 0])
    np.testing.assert_allclose(g, np.diag([0, 1.0, 0]))
    q0, g0 = pressure_symbols([0, 0, 0])
    assert not q0.any() and not g0.any()


def test_cutoff_chi():
    x = np.linspace(-2, 2, 401)
    chi = cutoff_chi(x)
    assert np.all(chi[np.abs(x) <= 0.5] == 0)
    assert np.all(chi[np.abs(x) >= 1] == 1)
    right = chi[x >= 0]
    assert np.all(np.diff(right) >= 0)
    assert cutoff_chi(0.75) == pytest.approx(0.5)


def test_extended_family_vanishes_near_resonance():
    s, omega = 0.25, 1.0
    M0, M1, Mjl = eval_M_family(s, omega, -s / omega, (0.0, 0.0, 0.0))
    assert M0 == 0 and M1 == 0 and not Mjl.any()
    with pytest.raises(ValueError):
        M_family_arrays(0.0, omega, 1.0, 0.0, 0.0, 0.0)


def test_stack_order_matches_names():
    stack = M_family_stack(0.3, 1.0, np.array([1.0, 2.0]), 0.5, 1.0, 2.0)
    arrays = M_family_arrays(0.3, 1.0, np.array([1.0, 2.0]), 0.5, 1.0, 2.0)
    assert stack.shape == (len(M_SYMBOLS), 2)
    for i, name in enumerate(M_SYMBOLS):
        np.testing.assert_array_equal(stack[i], np.broadcast_to(arrays[name], (2,)))


def test_log_derivative_of_power():
    # (x d/dx)(y d/dy) x^3 y^2 = 6 x^3 y^2
    fn = lambda x, y: x**3 * y**2
    est = richardson_log_derivative(fn, (1.7, 0.4), [0, 1], 0.02)
    for v in est:
        assert v == pytest.approx(6 * 1.7**3 * 0.4**2, rel=1e-6)
    assert richardson_log_derivative(fn, (2.0, 1.0), [], 0.02) == [8.0]


def test_weighted_derivative_is_consistent():
    res = weighted_derivative("M12", 0.25, 1.0, 3.0, (1.0, 0.5, -0.7), alpha=1, beta=(1, 0, 1))
    assert np.isfinite(res.value)
    assert res.consistent


def test_grid_helpers():
    g = log_grid(1e-2, 1e2, 2)
    assert g[0] == pytest.approx(1e-2) and g[-1] == pytest.approx(1e2) and len(g) == 9
    np.testing.assert_array_equal(reflect([1.0, 2.0]), [-2.0, -1.0, 1.0, 2.0])
