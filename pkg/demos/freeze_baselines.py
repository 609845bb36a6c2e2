"""Regenerate the frozen regression baselines under tests/data.

Run this only when a numerical change is intended; the acceptance suite
compares against these files.

    python3 demos/freeze_baselines.py
"""

import math
from pathlib import Path

import numpy as np

from strot.grid import GridSpec
from strot.io import write_json
from strot.verify import SweepSpec, estimate_sweep, freeze_baseline, marcinkiewicz_scan

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"

SWEEP_SPEC = SweepSpec(
    s_values=tuple(np.linspace(0.0, 2.0, 25)),
    omega_values=(0.5, 1.0),
    q_values=(1.2, 1.4),
    grid=GridSpec(2 * math.pi, 2 * math.pi, 16, 8),
    seed=7,
    s_relative=True,
)

SCAN_S = (0.05, 0.25, 0.5)


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    sweep = estimate_sweep(SWEEP_SPEC, "aux")
    freeze_baseline(sweep, DATA / "sweep_baseline.json")
    print("sweep:", sweep.summary["status_counts"])

    scan = marcinkiewicz_scan([f * 1.0 for f in SCAN_S], 1.0)
    write_json(
        DATA / "scan_baseline.json",
        {
            "omega": 1.0,
            "s_values": list(SCAN_S),
            "uniformity_factor": scan.uniformity_factor,
            "refinement_change": scan.refinement_change,
            "sup": {f"{r['symbol']}|{r['alpha']}|{''.join(map(str, r['beta']))}": r["sup"] for r in scan.rows},
        },
    )
    print("scan uniformity:", scan.uniformity_factor, "stable:", scan.stable)


if __name__ == "__main__":
    main()
