"""Spectral solver and verification harness for time-periodic Stokes flow
around a rotating obstacle."""

from strot.aux_solver import AuxProblem, SolveReport, solve_aux
from strot.errors import FieldShapeError, ModeOverflow, ResonantForcing, SupportViolation
from strot.grid import GridSpec, PhysicalField, SpectralField, to_physical, to_spectral
from strot.resonance import d_omega_T, dist_to_lattice, resonance_report
from strot.rotation import RotationFrame, conjugate_field, solve_rot_resolvent
from strot.synthesis import TPProblem, solve_tp
from strot.verify import SweepSpec, estimate_sweep, marcinkiewicz_scan, oracle_suite

__all__ = [
    "AuxProblem",
    "FieldShapeError",
    "GridSpec",
    "ModeOverflow",
    "PhysicalField",
    "ResonantForcing",
    "RotationFrame",
    "SolveReport",
    "SpectralField",
    "SupportViolation",
    "SweepSpec",
    "TPProblem",
    "conjugate_field",
    "d_omega_T",
    "dist_to_lattice",
    "estimate_sweep",
    "marcinkiewicz_scan",
    "oracle_suite",
    "resonance_report",
    "solve_aux",
    "solve_rot_resolvent",
    "solve_tp",
    "to_physical",
    "to_spectral",
]

__version__ = "0.1.0"
