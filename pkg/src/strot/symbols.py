"""
Fourier multiplier symbols of the auxiliary time-periodic Stokes problem.

The common denominator is ``D_s(k, xi) = i s + i omega k + |xi|^2``. On the
dual lattice the solution operator and its derivatives are

    m    = 1 / D_s
    m_0  = i s / D_s
    m_1  = i omega k / D_s
    m_jl = -xi_j xi_l / D_s

each composed with the Leray projector ``I - xi xi^T / |xi|^2``.  The extended
symbols ``M_0, M_1, M_jl`` live on all of ``R x R^3`` and carry the cutoff
``chi(1 + omega eta / s)`` which removes the only zero of ``D_s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import NamedTuple, Sequence

import numpy as np

from strot.resonance import ZERO_TOL

#: Symbols of the extended family, ``(name, (j, l))`` with ``j <= l``.
M_SYMBOLS = ("M0", "M1", "M11", "M12", "M13", "M22", "M23", "M33")

#: All ``(alpha, beta)`` weighted-derivative orders with entries in ``{0, 1}``.
DERIVATIVE_ORDERS = tuple(
    (a, (b1, b2, b3)) for a, b1, b2, b3 in product((0, 1), repeat=4)
)


@dataclass(frozen=True)
class FreqPoint:
    """A frequency point ``(k, xi)`` together with the problem parameters."""

    k: float
    xi: tuple[float, float, float]
    s: float
    omega: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        object.__setattr__(self, "xi", tuple(float(v) for v in self.xi))


@dataclass(frozen=True)
class SymbolBundle:
    D: complex
    m: complex
    m0: complex
    m1: complex
    mjl: np.ndarray
    resonant: bool


def denominator(s, omega, k, xi_sq):
    """Vectorized ``i s + i omega k + |xi|^2``."""
    return 1j * (s + omega * np.asarray(k, dtype=float)) + xi_sq


def eval_D(p: FreqPoint) -> complex:
    xi_sq = sum(v * v for v in p.xi)
    return complex(denominator(p.s, p.omega, p.k, xi_sq))


def eval_m_family(p: FreqPoint) -> SymbolBundle:
    """Lattice symbols at one point. Resonance is flagged, not raised.

    The point counts as resonant when ``|D| <= ZERO_TOL * omega``, the same
    gauge the solver uses.
    """
    D = eval_D(p)
    xi = np.array(p.xi)
    if abs(D) <= ZERO_TOL * p.omega:
        nan = complex("nan")
        return SymbolBundle(D, nan, nan, nan, np.full((3, 3), nan, dtype=complex), True)
    return SymbolBundle(
        D=D,
        m=1 / D,
        m0=1j * p.s / D,
        m1=1j * p.omega * p.k / D,
        mjl=-np.outer(xi, xi) / D,
        resonant=False,
    )


def leray_symbol(xi) -> np.ndarray:
    """``I - xi xi^T / |xi|^2``; the identity at ``xi = 0``."""
    xi = np.asarray(xi, dtype=float)
    nrm = xi @ xi
    if nrm == 0:
        return np.eye(3)
    return np.eye(3) - np.outer(xi, xi) / nrm


def pressure_symbols(xi) -> tuple[np.ndarray, np.ndarray]:
    """Pressure symbol ``-i xi/|xi|^2`` and pressure-gradient symbol ``xi xi^T/|xi|^2``.

    Both vanish at ``xi = 0`` (zero-mean pressure gauge).
    """
    xi = np.asarray(xi, dtype=float)
    nrm = xi @ xi
    if nrm == 0:
        return np.zeros(3, dtype=complex), np.zeros((3, 3))
    return -1j * xi / nrm, np.outer(xi, xi) / nrm


def _h(t):
    t = np.asarray(t, dtype=float)
    safe = np.where(t > 0, t, 1.0)
    return np.where(t > 0, np.exp(-1.0 / safe), 0.0)


def cutoff_chi(x):
    """Smooth cutoff: 0 for ``|x| <= 1/2``, 1 for ``|x| >= 1``.

    ``chi(x) = psi(2|x| - 1)`` with ``psi(t) = h(t) / (h(t) + h(1 - t))`` and
    ``h(t) = exp(-1/t)`` for ``t > 0``.
    """
    t = 2 * np.abs(np.asarray(x, dtype=float)) - 1
    a, b = _h(t), _h(1 - t)
    out = a / (a + b)
    return out if out.ndim else float(out)


def _check_s(s):
    if np.any(np.asarray(s) == 0):
        raise ValueError(
            "extended symbols need s != 0; for s = 0 use the steady/time-periodic "
            "split (split_time_mean) instead"
        )


def M_family_arrays(s, omega, eta, xi1, xi2, xi3) -> dict[str, np.ndarray]:
    """Extended symbols on broadcastable arrays, keyed by :data:`M_SYMBOLS`."""
    _check_s(s)
    eta = np.asarray(eta, dtype=float)
    chi = cutoff_chi(1 + omega * eta / s)
    D = 1j * (s + omega * eta) + xi1 * xi1 + xi2 * xi2 + xi3 * xi3
    # chi vanishes where D does; keep the division finite there
    w = np.where(chi == 0, 0.0, chi) / np.where(D == 0, 1.0, D)
    xis = (xi1, xi2, xi3)
    out = {"M0": 1j * s * w, "M1": 1j * omega * eta * w}
    for j in range(3):
        for l in range(j, 3):
            out[f"M{j + 1}{l + 1}"] = xis[j] * xis[l] * w
    return out


def M_family_stack(s, omega, eta, xi1, xi2, xi3) -> np.ndarray:
    """Extended symbols stacked along a new leading axis in :data:`M_SYMBOLS` order."""
    vals = M_family_arrays(s, omega, eta, xi1, xi2, xi3)
    return np.stack(np.broadcast_arrays(*(vals[n] for n in M_SYMBOLS)))


def eval_M_family(s, omega, eta, xi):
    """Extended symbols at one point: ``(M0, M1, Mjl)`` with ``Mjl`` 3x3."""
    xi1, xi2, xi3 = (float(v) for v in xi)
    vals = M_family_arrays(s, omega, float(eta), xi1, xi2, xi3)
    mjl = np.empty((3, 3), dtype=complex)
    for j in range(3):
        for l in range(j, 3):
            mjl[j, l] = mjl[l, j] = complex(vals[f"M{j + 1}{l + 1}"])
    return complex(vals["M0"]), complex(vals["M1"]), mjl


class WeightedDerivative(NamedTuple):
    value: float
    consistent: bool


def _mixed_log_difference(fn, coords, active, h):
    """Nested central differences in ``log|c|`` along the ``active`` axes."""
    acc = 0.0
    for signs in product((-1.0, 1.0), repeat=len(active)):
        shifted = list(coords)
        for axis, sign in zip(active, signs):
            shifted[axis] = coords[axis] * np.exp(sign * h)
        acc = acc + np.prod(signs) * fn(*shifted)
    return acc / (2 * h) ** len(active)


def richardson_log_derivative(fn, coords, active, h, n_levels=2):
    """Richardson-extrapolated mixed log-derivatives at ``h, h/2, ...``.

    Returns one extrapolated estimate per consecutive pair of step sizes.
    """
    if not active:
        return [fn(*coords)]
    diffs = [_mixed_log_difference(fn, coords, active, h / 2**i) for i in range(n_levels + 1)]
    return [(4 * diffs[i + 1] - diffs[i]) / 3 for i in range(n_levels)]


def weighted_derivative(
    symbol: str,
    s: float,
    omega: float,
    eta: float,
    xi,
    alpha: int = 0,
    beta=(0, 0, 0),
    h: float = 0.02,
    rtol: float = 1e-4,
    atol: float = 1e-8,
) -> WeightedDerivative:
    """``|eta^alpha xi^beta d_eta^alpha d_xi^beta M(eta, xi)|`` by finite differences.

    For first order in each variable ``c d/dc = d/d(log|c|)``, so the weighted
    derivative is a plain mixed derivative in logarithmic coordinates. It is
    approximated by nested central differences with log-step ``h`` and
    Richardson extrapolation; the estimates from ``(h, h/2)`` and
    ``(h/2, h/4)`` must agree to ``rtol`` (or ``atol``) or the result is
    marked inconsistent.
    """
    if symbol not in M_SYMBOLS:
        raise ValueError(f"unknown symbol {symbol!r}; choose from {M_SYMBOLS}")
    _check_s(s)
    if alpha not in (0, 1) or any(b not in (0, 1) for b in beta):
        raise ValueError("derivative orders must be 0 or 1")
    active = [0] * alpha + [i + 1 for i, b in enumerate(beta) if b]

    def fn(e, x1, x2, x3):
        return M_family_arrays(s, omega, e, x1, x2, x3)[symbol]

    coords = (float(eta),) + tuple(float(v) for v in xi)
    est = richardson_log_derivative(fn, coords, active, h)
    if len(est) == 1:
        return WeightedDerivative(float(abs(est[0])), True)
    a, b = complex(est[0]), complex(est[1])
    ok = abs(a - b) <= max(rtol * abs(b), atol)
    return WeightedDerivative(float(abs(b)), bool(ok))


def log_grid(lo: float = 1e-3, hi: float = 1e3, per_decade: int = 2) -> np.ndarray:
    """Log-spaced positive points covering ``[lo, hi]``."""
    n = int(round(np.log10(hi / lo) * per_decade)) + 1
    return np.logspace(np.log10(lo), np.log10(hi), n)


def reflect(values: Sequence[float]) -> np.ndarray:
    """Values together with their negatives, sorted."""
    v = np.asarray(values, dtype=float)
    return np.sort(np.concatenate([-v, v]))
