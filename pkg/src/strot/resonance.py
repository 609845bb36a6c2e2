"""
Arithmetic of the resonance lattice ``omega Z`` and of ``(2 pi/T) Z + omega Z``.

The infimum ``d_{omega,T}`` over the sum lattice cannot be certified in
floating point when the frequency ratio is irrational (the true value is 0), so
:func:`d_omega_T` returns a bounded-search minimum together with a
stabilization flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

ZERO_TOL = 1e-12
MATCH_RTOL = 1e-12
MEMBERSHIP_TOL = 1e-10
MAX_DENOMINATOR = 10_000


def dist_to_lattice(s: float, omega: float) -> float:
    """``min_l |s - omega l|``."""
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    r = math.remainder(s, omega)
    return abs(r)


def in_lattice(a: float, omega: float, tol: float = MEMBERSHIP_TOL) -> bool:
    """``a in omega Z`` up to the absolute tolerance ``tol * omega``."""
    return dist_to_lattice(a, omega) <= tol * omega


class LatticeRecord(NamedTuple):
    bound: int
    j: int
    k: int
    value: float


class DResult(NamedTuple):
    value: float
    stabilized: bool
    records: list


def d_omega_T(period: float, omega: float, bound: int = 100) -> DResult:
    """Smallest nonzero ``|(2 pi/T) j + omega k|`` over ``|j|, |k| <= bound``.

    ``records`` lists each strict decrease of the running minimum as the
    search window grows; decreases within the rounding budget are ignored. The result counts as stabilized when the window
    ``bound // 2`` already attains the final minimum.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    a = 2 * np.pi / period
    tol = ZERO_TOL * omega
    js = np.arange(-bound, bound + 1)
    vals = np.abs(a * js[:, None] + omega * js[None, :])
    vals[vals <= tol] = np.inf
    # minimum over the window of size b is the min over |j|,|k| <= b
    window = np.maximum(np.abs(js)[:, None], np.abs(js)[None, :])
    # a j + omega k carries rounding of order eps * bound * (a + omega); smaller
    # "decreases" are the same lattice value and must not count
    slack = 64 * np.finfo(float).eps * bound * (abs(a) + omega)
    best = np.inf
    records = []
    per_bound = []
    for b in range(1, bound + 1):
        ring = window == b
        idx = np.argmin(np.where(ring, vals, np.inf))
        v = vals.flat[idx]
        if v < best - slack:
            best = v
            j, k = np.unravel_index(idx, vals.shape)
            records.append(LatticeRecord(b, int(js[j]), int(js[k]), float(v)))
        per_bound.append(best)
    half = per_bound[bound // 2 - 1] if bound >= 2 else per_bound[0]
    stabilized = bool(half == best)
    return DResult(float(best), stabilized, records)


def continued_fraction(x: float, depth: int) -> list[int]:
    """Leading partial quotients of ``x`` (stops early on an exact hit)."""
    coeffs = []
    for _ in range(depth):
        a = math.floor(x)
        coeffs.append(int(a))
        rem = x - a
        if rem < 1e-15:
            break
        x = 1 / rem
    return coeffs


def convergents(coeffs) -> list[Fraction]:
    p_prev, p = 1, coeffs[0]
    q_prev, q = 0, 1
    out = [Fraction(p, q)]
    for a in coeffs[1:]:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append(Fraction(p, q))
    return out


def is_commensurable(
    period: float, omega: float, depth: int = 20, max_denominator: int = MAX_DENOMINATOR
):
    """Decide whether ``(2 pi/T) / omega`` is rational by continued fractions.

    A convergent counts as a match when it agrees with the ratio to
    ``MATCH_RTOL`` and its denominator is at most ``max_denominator``. Without
    the cap every float would match some deep convergent.

    Returns ``(commensurable, (numerator, denominator))``; the fraction is the
    matching convergent, or the deepest convergent when none matches.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    ratio = (2 * np.pi / period) / omega
    conv = convergents(continued_fraction(ratio, depth))
    for c in conv:
        if c.denominator > max_denominator:
            break
        if abs(float(c) - ratio) <= MATCH_RTOL * abs(ratio):
            return True, (c.numerator, c.denominator)
    last = conv[-1]
    return False, (last.numerator, last.denominator)


def split_indices(period: float, omega: float, K: int, tol: float = MEMBERSHIP_TOL):
    """Partition ``{-K..K}`` into ``A1 = {k : (2 pi/T) k in omega Z}`` and the rest."""
    a = 2 * np.pi / period
    a1, a2 = [], []
    for k in range(-K, K + 1):
        (a1 if in_lattice(a * k, omega, tol) else a2).append(k)
    return a1, a2


def spectrum_lattice(omega: float, ell_range, alpha_min: float = -10.0) -> list[dict]:
    """Half-lines ``{alpha + i omega l : alpha_min <= alpha <= 0}`` as plot data."""
    return [
        {"ell": int(l), "imag": omega * l, "alpha_min": float(alpha_min), "alpha_max": 0.0}
        for l in ell_range
    ]


def on_spectrum_line(s: float, omega: float, tol: float = ZERO_TOL) -> bool:
    """Whether the point ``i s`` lies on one of the lattice half-lines."""
    return dist_to_lattice(s, omega) <= tol * omega


@dataclass
class ResonanceReport:
    dist_value: float
    d_omega_T: float
    d_stabilized: bool
    commensurable: bool
    rational_approx: tuple | None
    a1_indices: list = field(default_factory=list)
    a2_indices: list = field(default_factory=list)
    spectrum_lines: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)


def resonance_report(
    s: float,
    omega: float,
    period: float,
    K: int = 10,
    bound: int = 100,
    depth: int = 20,
    ell_window: int = 3,
    alpha_min: float = -10.0,
) -> ResonanceReport:
    d = d_omega_T(period, omega, bound)
    comm, frac = is_commensurable(period, omega, depth)
    a1, a2 = split_indices(period, omega, K)
    return ResonanceReport(
        dist_value=dist_to_lattice(s, omega),
        d_omega_T=d.value if d.stabilized else 0.0,
        d_stabilized=d.stabilized,
        commensurable=comm,
        rational_approx=frac,
        a1_indices=a1,
        a2_indices=a2,
        spectrum_lines=spectrum_lattice(omega, range(-ell_window, ell_window + 1), alpha_min),
        tolerances={
            "zero": ZERO_TOL,
            "rational_match_rtol": MATCH_RTOL,
            "max_denominator": MAX_DENOMINATOR,
            "membership": MEMBERSHIP_TOL,
            "search_bound": bound,
            "search_minimum": d.value,
        },
    )
