"""Approach a resonance point and watch the solution blow up like 1/dist.

The forcing sits on temporal mode k = 2 with zero spatial wave number, so
the auxiliary symbol reduces to i(s + 2 omega). Moving s toward -2 omega makes
||u|| grow like 1/dist(s, omega Z) while dist * ||u|| stays equal to ||f||.

    python3 demos/resonance_walkthrough.py
"""

import math

import numpy as np

from strot import AuxProblem, GridSpec, dist_to_lattice, solve_aux, to_physical
from strot.forcing import single_mode
from strot.grid import lq_norm

grid = GridSpec(2 * math.pi, 2 * math.pi, 8, 8)
f = single_mode(grid, 2, (0, 0, 0), [1.0, 0.5j, -0.25])
q = 1.2
f_norm = lq_norm(to_physical(f), q)

print(f"{'eps':>8} {'||u||_q':>14} {'dist*||u||/||f||':>18}")
eps_values = 10.0 ** -np.arange(1, 7)
norms = []
for eps in eps_values:
    s = -2.0 + eps
    u, _, _ = solve_aux(AuxProblem(s, 1.0, grid, f))
    n = lq_norm(to_physical(u), q)
    norms.append(n)
    print(f"{eps:8.0e} {n:14.6e} {dist_to_lattice(s, 1.0) * n / f_norm:18.15f}")

slope = np.polyfit(np.log(eps_values), np.log(norms), 1)[0]
print(f"log-log slope: {slope:.6f}")
