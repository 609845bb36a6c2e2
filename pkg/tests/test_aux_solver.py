import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from strot.aux_solver import (
    AuxProblem,
    modulate,
    reduce_modulation,
    residual_aux,
    shift_modes,
    sobolev_exponents,
    solve_aux,
    split_time_mean,
)
from strot.errors import ModeOverflow, ResonantForcing
from strot.forcing import random_solenoidal, single_mode
from strot.grid import GridSpec, SpectralField

GRID = GridSpec(2 * math.pi, 2 * math.pi, 8, 8)


@given(st.floats(-100, 100), st.floats(0.05, 10))
def test_reduce_modulation_range(s, omega):
    ell, s_red = reduce_modulation(s, omega)
    assert -omega / 2 - 1e-9 <= s_red < omega / 2 + 1e-9
    assert s_red + omega * ell == pytest.approx(s, abs=1e-9)


def test_reduce_modulation_ties_go_up():
    assert reduce_modulation(0.5, 1.0) == (1, -0.5)
    assert reduce_modulation(-0.5, 1.0) == (0, -0.5)


def test_problem_validation():
    f = random_solenoidal(GRID, 0)
    with pytest.raises(ValueError):
        AuxProblem(0.1, 2.0, GRID, f)  # period must be 2 pi / omega
    with pytest.raises(ValueError):
        AuxProblem(0.1, -1.0, GRID, f)
    bad = SpectralField(GRID, np.full(GRID.shape(3), np.nan + 0j))
    with pytest.raises(ValueError):
        AuxProblem(0.1, 1.0, GRID, bad)


def test_shift_modes_moves_and_guards():
    c = np.zeros(GRID.shape(1), dtype=complex)
    c[GRID.k_position(1)] = 1.0
    out = shift_modes(c, 2)
    assert out[GRID.k_position(3)].max() == 1.0
    with pytest.raises(ModeOverflow):
        shift_modes(c, 3)


def test_modulate_round_trip():
    f = random_solenoidal(GRID, 1, k_max=1)
    back = modulate(modulate(f, 2), 2, sign=-1)
    np.testing.assert_array_equal(back.coeffs, f.coeffs)
    with pytest.raises(ValueError):
        modulate(f, 1, sign=2)


def test_split_time_mean():
    f = random_solenoidal(GRID, 2)
    mean, rest = split_time_mean(f)
    np.testing.assert_allclose((mean + rest).coeffs, f.coeffs)
    assert not rest.coeffs[GRID.k_position(0)].any()


def test_residuals_small():
    f = random_solenoidal(GRID, 3)
    u, p, rep = solve_aux(AuxProblem(1.3, 1.0, GRID, f))
    assert rep.residual_pde < 1e-12 and rep.residual_div < 1e-12
    assert residual_aux(u, p, AuxProblem(1.3, 1.0, GRID, f)) == (rep.residual_pde, rep.residual_div)
    assert rep.extra["modulation_shift"] == 1


def test_resonant_forcing_raises_with_mode():
    f = single_mode(GRID, -2, (0, 0, 0), [1.0, 0, 0])
    with pytest.raises(ResonantForcing) as info:
        solve_aux(AuxProblem(2.0, 1.0, GRID, f))
    assert info.value.modes == [-2]


def test_resonant_mode_without_content_is_zeroed():
    f = single_mode(GRID, 1, (1, 0, 0), [0, 1.0, 0])
    u, _, rep = solve_aux(AuxProblem(2.0, 1.0, GRID, f))
    assert rep.resonant_modes_zeroed == [-2]
    assert np.isfinite(u.coeffs).all()


def test_report_norm_keys():
    f = random_solenoidal(GRID, 4)
    _, _, rep = solve_aux(AuxProblem(0.4, 1.0, GRID, f), [1.2, 1.6])
    block = rep.lq_norms[1.2]
    assert {"dist_weighted_u", "is_u_plus_dt_u", "hess_u", "grad_p", "forcing"} <= set(block)
    assert block["u_sobolev"] is not None
    assert rep.lq_norms[1.6]["u_sobolev"] is None  # 3q/(3-2q) needs q < 3/2
    main = block["dist_weighted_u"] + block["is_u_plus_dt_u"] + block["hess_u"] + block["grad_p"]
    assert rep.empirical_constant[1.2] == pytest.approx(main / block["forcing"])


def test_sobolev_exponents():
    assert sobolev_exponents(1.2) == (pytest.approx(2.0), pytest.approx(6.0))
    assert sobolev_exponents(2.0) == (pytest.approx(6.0), None)


def test_corrupt_hook_changes_solution():
    f = random_solenoidal(GRID, 5)
    u, _, _ = solve_aux(AuxProblem(0.3, 1.0, GRID, f))
    bad, _, _ = solve_aux(AuxProblem(0.3, 1.0, GRID, f), _corrupt=True)
    assert np.abs(u.coeffs - bad.coeffs).max() > 1e-3
