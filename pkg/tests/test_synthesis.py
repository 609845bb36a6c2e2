import math

import numpy as np
import pytest

from strot.errors import ResonantForcing
from strot.forcing import manufactured_rotating
from strot.grid import GridSpec, PhysicalField
from strot.synthesis import TPProblem, decompose_modes, solve_tp, split_modes, synthesize, tp_residual

TWO_PI = 2 * math.pi


def test_decompose_synthesize_round_trip():
    grid = GridSpec(3.0, TWO_PI, 4, 8)
    rng = np.random.default_rng(0)
    modes = {k: rng.standard_normal((4, 4, 4, 3)) + 0j for k in (-2, 1, 3)}
    f = synthesize(modes, grid)
    back = dict(decompose_modes(f))
    assert sorted(back) == [-2, 1, 3]
    for k in modes:
        np.testing.assert_allclose(back[k], modes[k], atol=1e-13)


def test_zero_field_has_no_modes():
    grid = GridSpec(3.0, TWO_PI, 4, 4)
    assert decompose_modes(PhysicalField.zeros(grid)) == []


def test_split_modes():
    a1, a2 = split_modes(range(-3, 4), 2 * TWO_PI, 1.0)  # base frequency 1/2
    assert a1 == [-2, 0, 2]
    assert a2 == [-3, -1, 1, 3]


def test_problem_validation():
    grid = GridSpec(3.0, TWO_PI, 4, 4)
    ok = np.zeros((4, 4, 4, 3))
    with pytest.raises(ValueError):
        TPProblem(3.0, 1.0, ((1, ok), (1, ok)), grid)
    with pytest.raises(ValueError):
        TPProblem(3.0, 1.0, ((1, np.zeros((4, 4, 4, 1))),), grid)
    with pytest.raises(ValueError):
        TPProblem(-3.0, 1.0, (), grid)
    p = TPProblem(3.0, 2.0, ((2, ok), (-1, ok)), grid)
    assert [k for k, _ in p.modes] == [-1, 2]
    assert p.s_of(2) == pytest.approx(2 * TWO_PI / 3.0)
    assert p.internal_grid().period == pytest.approx(math.pi)


def _two_mode(period, omega=1.0):
    grid = GridSpec(period, TWO_PI, 32, 8)
    base = TWO_PI / period
    modes = []
    for j, k in enumerate((1, -2)):
        _, _, g = manufactured_rotating(grid, base * k, omega, 0.4, j)
        modes.append((k, g))
    return TPProblem(period, omega, tuple(modes), grid)


def test_threads_give_identical_results():
    problem = _two_mode(1.5 * TWO_PI)
    u1, p1, r1 = solve_tp(problem, [1.2], threads=1, residual=False)
    u2, p2, r2 = solve_tp(problem, [1.2], threads=2, residual=False)
    for k in u1:
        assert np.array_equal(u1[k], u2[k]) and np.array_equal(p1[k], p2[k])
    assert r1.a_norms == r2.a_norms
    assert r1.d_omega_T == pytest.approx(1 / 3)
    assert r1.d_informative
    assert r1.a1_indices == [] and r1.a2_indices == [-2, 1]
    # the total constant is a mediant of the per-mode constants
    assert r1.empirical_constant[1.2] <= max(r1.mode_constants[1.2].values()) + 1e-12
    assert tp_residual(u1, p1, problem) < 1e-6


def test_resonant_mode_is_named():
    grid = GridSpec(TWO_PI, TWO_PI, 32, 8)
    mean_force = np.zeros((32, 32, 32, 3), dtype=complex)
    mean_force[..., 0] = 1.0  # uniform field at s = 0 is resonant
    problem = TPProblem(TWO_PI, 1.0, ((0, mean_force),), grid)
    with pytest.raises(Exception) as info:
        solve_tp(problem, residual=False)
    assert "k=0" in str(info.value)
    assert isinstance(info.value, (ResonantForcing, ValueError))
