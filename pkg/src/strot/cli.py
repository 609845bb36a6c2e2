"""
Command-line interface.

Every run writes ``resolved_config.json`` into the output directory; passing
it back with ``--config`` reproduces the run. Values are resolved as
flags > config file > defaults.

Exit codes: 0 success, 2 resonant forcing, 1 structural errors (bad input,
missing files, support violations, failed regression or strict checks).
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from strot.aux_solver import AuxProblem, solve_aux
from strot.errors import FieldShapeError, ModeOverflow, ResonantForcing, SupportViolation
from strot.forcing import manufactured_rotating, random_solenoidal, single_mode, swirl
from strot.grid import GridSpec, PhysicalField, SpectralField, to_physical, to_spectral
from strot.io import read_field, read_json, write_csv, write_field, write_json
from strot.resonance import resonance_report
from strot.rotation import rot_operator, rotation_term, solve_rot_resolvent, spatial_values
from strot.synthesis import TPProblem, decompose_modes, solve_tp
from strot.verify import (
    SweepSpec,
    compare_baseline,
    estimate_sweep,
    freeze_baseline,
    marcinkiewicz_scan,
    oracle_suite,
)

log = logging.getLogger("strot")

COMMANDS = (
    "solve-aux",
    "solve-resolvent",
    "solve-tp",
    "resonance-scan",
    "verify-multiplier",
    "sweep",
    "oracle-suite",
)

TWO_PI = 2 * math.pi

#: Defaults shared by all subcommands, then per-subcommand overrides.
DEFAULTS = {
    "out": "strot-out",
    "seed": 0,
    "threads": None,
    "grid": [16, 16, TWO_PI],
    "s": 0.25,
    "omega": 1.0,
    "period": None,
    "q": [1.2],
    "input": None,
    "generator": None,
    "k": 1,
    "xi": [1, 0, 0],
    "amplitude": [0.0, 1.0, 0.0],
    "sigma": 0.4,
    "modes": [1, -2],
    "K": 10,
    "bound": 100,
    "depth": 20,
    "ell_window": 3,
    "alpha_min": -10.0,
    "s_list": [0.05, 0.25, 0.5],
    "per_decade": 1,
    "uniformity_tol": 1.05,
    "kind": "aux",
    "s_values": None,
    "s_range": [0.0, 2.0, 25],
    "s_relative": True,
    "omega_values": [0.5, 1.0],
    "count": 1,
    "k_max": 2,
    "baseline": None,
    "freeze_baseline": None,
    "corrupt": False,
    "strict": False,
}

COMMAND_DEFAULTS = {
    "solve-aux": {"generator": "single-mode"},
    "solve-resolvent": {"grid": [32, 8, TWO_PI], "generator": "swirl"},
    "solve-tp": {"grid": [32, 8, TWO_PI], "generator": "manufactured", "period": TWO_PI},
    "resonance-scan": {"period": TWO_PI},
    "sweep": {"grid": [16, 8, TWO_PI], "q": [1.2, 1.4]},
}


def _floats(text):
    return [float(v) for v in str(text).split(",") if v.strip()]


def _ints(text):
    return [int(v) for v in str(text).split(",") if v.strip()]


def _grid(text):
    parts = str(text).split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("--grid expects N,NT,L")
    return [int(parts[0]), int(parts[1]), float(parts[2])]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON config file (flags override it)")
    common.add_argument("--out", help="output directory (default: strot-out)")
    common.add_argument("--seed", type=int, help="ensemble seed (default: 0)")
    common.add_argument("--threads", type=int, help="worker threads (default: all cores)")
    common.add_argument("--grid", type=_grid, help="N,NT,L (default: 16,16,2pi; 32,8,2pi for rotating runs)")
    common.add_argument("--s", type=float, help="resolvent parameter (default: 0.25)")
    common.add_argument("--omega", type=float, help="rotation speed (default: 1.0)")
    common.add_argument("--period", type=float, help="time period T (default: 2pi)")
    common.add_argument("--q", type=_floats, help="exponents, comma separated (default: 1.2)")

    parser = argparse.ArgumentParser(
        prog="strot",
        description="Spectral solver and verification harness for time-periodic "
        "Stokes flow around a rotating obstacle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-aux", parents=[common], argument_default=argparse.SUPPRESS, help="solve i s u + d_t u - Lap u + grad p = f")
    p.add_argument("--input", help="forcing field file (spectral or physical)")
    p.add_argument("--generator", choices=["single-mode", "random"], help="forcing generator")
    p.add_argument("--k", type=int, help="temporal mode of the single-mode generator (default: 1)")
    p.add_argument("--xi", type=_ints, help="wave index n1,n2,n3 (default: 1,0,0)")
    p.add_argument("--amplitude", type=_floats, help="real amplitude a1,a2,a3 (default: 0,1,0)")
    p.add_argument("--k-max", dest="k_max", type=int, help="temporal band of random forcing")

    p = sub.add_parser("solve-resolvent", parents=[common], argument_default=argparse.SUPPRESS, help="rotating resolvent problem")
    p.add_argument("--input", help="time-independent physical forcing file")
    p.add_argument("--generator", choices=["swirl", "manufactured"], help="forcing generator")
    p.add_argument("--sigma", type=float, help="width of generated fields (default: 0.4)")

    p = sub.add_parser("solve-tp", parents=[common], argument_default=argparse.SUPPRESS, help="rotating time-periodic problem")
    p.add_argument("--input", help="physical forcing file with period T")
    p.add_argument("--generator", choices=["manufactured"], help="forcing generator")
    p.add_argument("--modes", type=_ints, help="temporal modes of the generator (default: 1,-2)")
    p.add_argument("--sigma", type=float, help="width of generated fields (default: 0.4)")

    p = sub.add_parser("resonance-scan", parents=[common], argument_default=argparse.SUPPRESS, help="lattice arithmetic report")
    p.add_argument("--K", type=int, help="index window |k| <= K (default: 10)")
    p.add_argument("--bound", type=int, help="lattice search bound (default: 100)")
    p.add_argument("--depth", type=int, help="continued-fraction depth (default: 20)")
    p.add_argument("--ell-window", dest="ell_window", type=int, help="spectrum lines |l| <= window")
    p.add_argument("--alpha-min", dest="alpha_min", type=float, help="left end of spectrum lines")

    p = sub.add_parser("verify-multiplier", parents=[common], argument_default=argparse.SUPPRESS, help="multiplier bound scan")
    p.add_argument("--s-list", dest="s_list", type=_floats, help="s values as fractions of omega")
    p.add_argument("--per-decade", dest="per_decade", type=int, help="grid points per decade")
    p.add_argument("--uniformity-tol", dest="uniformity_tol", type=float, help="declared uniformity factor")

    p = sub.add_parser("sweep", parents=[common], argument_default=argparse.SUPPRESS, help="empirical estimate constants")
    p.add_argument("--kind", choices=["aux", "rot_resolvent", "tp"], help="problem kind")
    p.add_argument("--s-values", dest="s_values", type=_floats, help="explicit s values")
    p.add_argument("--s-range", dest="s_range", type=_floats, help="start,stop,count (default: 0,2,25)")
    p.add_argument("--s-absolute", dest="s_relative", action="store_false", default=argparse.SUPPRESS, help="s values not scaled by omega")
    p.add_argument("--omega-values", dest="omega_values", type=_floats, help="default: 0.5,1.0")
    p.add_argument("--count", type=int, help="forcings per cell")
    p.add_argument("--k-max", dest="k_max", type=int, help="temporal band of random forcing")
    p.add_argument("--sigma", type=float, help="width of rotating forcings")
    p.add_argument("--baseline", help="compare against this frozen baseline JSON")
    p.add_argument("--freeze-baseline", dest="freeze_baseline", help="write a baseline JSON here")

    p = sub.add_parser("oracle-suite", parents=[common], argument_default=argparse.SUPPRESS, help="closed-form and cross-solver oracles")
    p.add_argument("--corrupt", action="store_true", default=argparse.SUPPRESS, help="fault injection: corrupt the solver symbol")
    p.add_argument("--strict", action="store_true", default=argparse.SUPPRESS, help="exit 1 if any oracle fails")
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """Merge defaults, the config file and explicit flags."""
    cfg = dict(DEFAULTS)
    cfg.update(COMMAND_DEFAULTS.get(args.command, {}))
    flags = vars(args).copy()
    path = flags.pop("config", None)
    if path is not None:
        if not Path(path).is_file():
            raise FileNotFoundError(f"config file not found: {path}")
        file_cfg = read_json(path)
        file_cfg.pop("command", None)
        unknown = set(file_cfg) - set(cfg)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(file_cfg)
    cfg.update(flags)
    if cfg["threads"] is None:
        cfg["threads"] = os.cpu_count() or 1
    return cfg


def _grid_for(cfg, period):
    n, nt, box = cfg["grid"]
    return GridSpec(period, float(box), int(n), int(nt))


def _out(cfg) -> Path:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load(path):
    if not Path(path).is_file():
        raise FileNotFoundError(f"input file not found: {path}")
    return read_field(path)


def _regrid(field, grid):
    """Re-attach a field to ``grid`` after checking the shapes agree."""
    data = field.coeffs if isinstance(field, SpectralField) else field.samples
    if data.shape != grid.shape(data.shape[-1]):
        raise FieldShapeError(f"input shape {data.shape} does not match grid {grid.shape(data.shape[-1])}")
    return type(field)(grid, data)


def cmd_solve_aux(cfg) -> int:
    omega, s = cfg["omega"], cfg["s"]
    grid = _grid_for(cfg, TWO_PI / omega)
    if cfg["input"]:
        field = _load(cfg["input"])
        f = field if isinstance(field, SpectralField) else to_spectral(field)
        f = _regrid(f, grid)
    elif cfg["generator"] == "random":
        f = random_solenoidal(grid, cfg["seed"], k_max=cfg["k_max"])
    else:
        f = single_mode(grid, cfg["k"], tuple(cfg["xi"]), cfg["amplitude"])
    u, p, rep = solve_aux(AuxProblem(s, omega, grid, f), cfg["q"])
    out = _out(cfg)
    write_field(out / "u.strf", u)
    write_field(out / "p.strf", p)
    write_json(out / "report.json", rep)
    log.info("solve-aux: residual %.3e", rep.residual_pde)
    return 0


def _equivariant_forcing(grid, s, omega, sigma):
    w = swirl(grid, sigma)
    zero_p = np.zeros(w.shape[:-1] + (1,))
    return 1j * s * w + rot_operator(w, zero_p, 0.0, omega, grid) - rotation_term(w, grid, omega)


def cmd_solve_resolvent(cfg) -> int:
    omega, s = cfg["omega"], cfg["s"]
    grid = _grid_for(cfg, TWO_PI / omega)
    if cfg["input"]:
        g = spatial_values(_regrid(_load(cfg["input"]), grid))
    elif cfg["generator"] == "manufactured":
        _, _, g = manufactured_rotating(grid, s, omega, cfg["sigma"], cfg["seed"])
    else:
        g = _equivariant_forcing(grid, s, omega, cfg["sigma"])
    v, p, rep = solve_rot_resolvent(g, s, omega, cfg["q"], grid=grid)
    if cfg["generator"] == "swirl" and not cfg["input"]:
        u, _, _ = solve_aux(AuxProblem(s, omega, grid, to_spectral(PhysicalField.static(grid, g))))
        plain = to_physical(u).samples[0]
        rep.extra["plain_resolvent_difference"] = float(
            np.abs(v.samples[0] - plain).max() / np.abs(plain).max()
        )
    out = _out(cfg)
    write_field(out / "v.strf", v)
    write_field(out / "p.strf", p)
    write_json(out / "report.json", rep)
    return 0


def cmd_solve_tp(cfg) -> int:
    omega, period = cfg["omega"], cfg["period"]
    grid = _grid_for(cfg, period)
    if cfg["input"]:
        problem = TPProblem.from_field(_regrid(_load(cfg["input"]), grid), omega)
    else:
        base = TWO_PI / period
        modes = []
        for j, k in enumerate(cfg["modes"]):
            _, _, g = manufactured_rotating(grid, base * k, omega, cfg["sigma"], cfg["seed"] + j)
            modes.append((k, g))
        problem = TPProblem(period, omega, tuple(modes), grid)
    u_modes, p_modes, rep = solve_tp(problem, cfg["q"], threads=cfg["threads"])
    out = _out(cfg)
    mode_dir = out / "modes"
    mode_dir.mkdir(exist_ok=True)
    index = []
    for k in sorted(u_modes):
        static = GridSpec(TWO_PI / omega, grid.box_len, grid.n_space, 2)
        write_field(mode_dir / f"u_k{k}.strf", PhysicalField.static(static, u_modes[k]))
        write_field(mode_dir / f"p_k{k}.strf", PhysicalField.static(static, p_modes[k]))
        index.append({"k": k, "s": problem.s_of(k), "u": f"modes/u_k{k}.strf", "p": f"modes/p_k{k}.strf"})
    write_json(out / "modes.json", {"period": period, "omega": omega, "modes": index})
    write_json(out / "tp_report.json", rep)
    return 0


def cmd_resonance_scan(cfg) -> int:
    rep = resonance_report(
        cfg["s"],
        cfg["omega"],
        cfg["period"],
        K=cfg["K"],
        bound=cfg["bound"],
        depth=cfg["depth"],
        ell_window=cfg["ell_window"],
        alpha_min=cfg["alpha_min"],
    )
    out = _out(cfg)
    write_json(out / "resonance_report.json", rep)
    write_csv(
        out / "spectrum_lines.csv",
        ["ell", "imag", "alpha_min", "alpha_max"],
        [[d["ell"], d["imag"], d["alpha_min"], d["alpha_max"]] for d in rep.spectrum_lines],
    )
    return 0


def cmd_verify_multiplier(cfg) -> int:
    omega = cfg["omega"]
    s_list = [f * omega for f in cfg["s_list"]]
    res = marcinkiewicz_scan(
        s_list, omega, per_decade=cfg["per_decade"], uniformity_tol=cfg["uniformity_tol"]
    )
    out = _out(cfg)
    write_json(out / "scan.json", res)
    write_csv(
        out / "scan.csv",
        ["symbol", "alpha", "beta", "sup", "uniformity", "refinement_change"],
        [
            [r["symbol"], r["alpha"], "".join(map(str, r["beta"])), r["sup"], r["uniformity"],
             r.get("refinement_change")]
            for r in res.rows
        ],
    )
    print(f"stable={res.stable} uniformity={res.uniformity_factor:.6g}")
    return 0


def cmd_sweep(cfg) -> int:
    grid = _grid_for(cfg, cfg["period"] or TWO_PI)
    if cfg["s_values"] is not None:
        s_values = cfg["s_values"]
    else:
        start, stop, count = cfg["s_range"]
        s_values = list(np.linspace(start, stop, int(count)))
    spec = SweepSpec(
        tuple(s_values),
        tuple(cfg["omega_values"]),
        tuple(cfg["q"]),
        grid,
        seed=cfg["seed"],
        count=cfg["count"],
        k_max=cfg["k_max"],
        s_relative=cfg["s_relative"],
        sigma=cfg["sigma"],
    )
    res = estimate_sweep(spec, cfg["kind"], threads=cfg["threads"])
    out = _out(cfg)
    write_json(out / "sweep.json", res)
    cols = ["kind", "omega", "s", "q", "member", "amplitude", "status", "constant", "dist_weighted", "solution_lq", "error"]
    write_csv(out / "sweep.csv", cols, [[r.get(c) for c in cols] for r in res.rows])
    if res.excluded_omega:
        log.warning("excluded omega values below the grid resolution: %s", res.excluded_omega)
    if cfg["freeze_baseline"]:
        freeze_baseline(res, cfg["freeze_baseline"])
    if cfg["baseline"]:
        if not Path(cfg["baseline"]).is_file():
            raise FileNotFoundError(f"baseline not found: {cfg['baseline']}")
        ok, bad = compare_baseline(res, cfg["baseline"])
        write_json(out / "baseline_comparison.json", {"ok": ok, "mismatches": bad})
        if not ok:
            print(f"baseline mismatch in {len(bad)} rows", file=sys.stderr)
            return 1
    return 0


def cmd_oracle_suite(cfg) -> int:
    n, nt, box = cfg["grid"]
    grid = GridSpec(TWO_PI / cfg["omega"], float(box), int(n), int(nt))
    rep = oracle_suite(grid, seed=cfg["seed"], corrupt=cfg["corrupt"])
    out = _out(cfg)
    write_json(out / "oracles.json", {"all_passed": rep.all_passed, **asdict(rep)})
    for r in rep.results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name} worst={r.worst:.3e} tol={r.tolerance:.0e}")
    return 1 if cfg["strict"] and not rep.all_passed else 0


HANDLERS = {
    "solve-aux": cmd_solve_aux,
    "solve-resolvent": cmd_solve_resolvent,
    "solve-tp": cmd_solve_tp,
    "resonance-scan": cmd_resonance_scan,
    "verify-multiplier": cmd_verify_multiplier,
    "sweep": cmd_sweep,
    "oracle-suite": cmd_oracle_suite,
}


def _setup_logging():
    level = os.environ.get("STROT_LOG", "warn").lower()
    levels = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        out = _out(cfg)
        write_json(out / "resolved_config.json", dict(cfg, command=args.command))
        return HANDLERS[args.command](cfg)
    except ResonantForcing as exc:
        print(f"error: resonant forcing: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, FieldShapeError, SupportViolation, ModeOverflow) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
