import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from strot.errors import SupportViolation
from strot.forcing import gaussian, manufactured_rotating, spatial_gradient, swirl
from strot.grid import GridSpec, PhysicalField
from strot.rotation import (
    RotationFrame,
    conjugate_field,
    e1_cross,
    leray_pressure,
    q_dot,
    q_matrix,
    rot_operator,
    rotation_term,
    solve_rot_resolvent,
    support_check,
)

GRID32 = GridSpec(2 * math.pi, 2 * math.pi, 32, 8)
GRID16 = GridSpec(2 * math.pi, 2 * math.pi, 16, 4)


@given(st.floats(0.1, 5), st.floats(-10, 10), st.floats(-10, 10))
def test_q_is_a_one_parameter_group(omega, t1, t2):
    np.testing.assert_allclose(
        q_matrix(omega, t1) @ q_matrix(omega, t2), q_matrix(omega, t1 + t2), atol=1e-12
    )


def test_q_dot_is_e1_cross():
    x = np.array([0.3, -1.2, 0.7])
    for t in (0.0, 0.4, 2.9):
        np.testing.assert_allclose(q_dot(1.7, t) @ x, 1.7 * e1_cross(q_matrix(1.7, t) @ x), atol=1e-14)


def test_frame_validation():
    assert RotationFrame(2.0).period == pytest.approx(math.pi)
    with pytest.raises(ValueError):
        RotationFrame(0.0)


def test_support_violation_is_raised():
    wide = PhysicalField.static(GRID16, np.ones(GRID16.shape(3)[1:], dtype=complex))
    assert support_check(wide).outside_mass_fraction > 0.1
    with pytest.raises(SupportViolation) as info:
        conjugate_field(wide, RotationFrame(1.0), "to_inertial")
    assert info.value.outside_fraction > 0.1


def test_bad_direction_and_period():
    f = PhysicalField.zeros(GRID16)
    with pytest.raises(ValueError):
        conjugate_field(f, RotationFrame(1.0), "sideways")
    with pytest.raises(ValueError):
        conjugate_field(f, RotationFrame(2.0), "to_inertial")


def test_rotation_term_vanishes_on_equivariant_field():
    w = swirl(GRID32, 0.4)
    assert np.abs(rotation_term(w, GRID32, 1.0)).max() < 1e-7 * np.abs(w).max()


def test_leray_pressure_of_gradient():
    phi = gaussian(GRID32, 0.5)
    grad = spatial_gradient(phi, GRID32)
    p = leray_pressure(grad, GRID32)[..., 0]
    np.testing.assert_allclose(p, phi - phi.mean(), atol=1e-10)


def test_solve_recovers_manufactured_solution():
    s = 0.3
    v_true, p_true, g = manufactured_rotating(GRID32, s, 1.0, 0.4, 3)
    v, p, rep = solve_rot_resolvent(g, s, 1.0, [1.2], grid=GRID32)
    assert np.abs(v.samples[0] - v_true).max() < 1e-6 * np.abs(v_true).max()
    assert np.abs(p.samples[0] - p_true).max() < 1e-6 * np.abs(p_true).max()
    assert rep.residual_pde < 1e-6
    assert {"dist_weighted_v", "is_v_plus_rot_v", "hess_v", "grad_p"} <= set(rep.lq_norms[1.2])
    residual = rot_operator(v.samples[0], p.samples[0], s, 1.0, GRID32) - g
    assert np.abs(residual).max() < 1e-5 * np.abs(g).max()
