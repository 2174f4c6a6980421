"""Command-line front end.

Subcommands produce plot-ready CSV datasets plus a JSON manifest holding the
fully resolved configuration, the code version and per-row wall times.
Reruns with an identical configuration reproduce identical CSV bytes.

Configuration precedence: built-in defaults < JSON config file (--config)
< explicit command-line flags.

Exit codes: 0 success, 1 usage/config error, 2 I/O error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, io
from .engine import (GroundStateCache, find_collapse_threshold, power_ratio,
                     sweep_cycles, sweep_strokes)
from .engine import CycleSpec
from .ramps import STA, TRA, ScalingProtocol, sample_ramp
from .solver import (ConvergenceError, SolverConfig, energy_components,
                     ground_state)
from .stability import (BracketError, IntegrationError, StabilityQuery,
                        min_stroke_time)
from .thomas_fermi import adiabatic_efficiency, tf_energy


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # usage problems must exit with code 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


COMMON_DEFAULTS = {
    "dim": 1,
    "gi": 1.0,
    "gf": 0.8,
    "n": 1e4,
    "ni": 1e4,
    "nf": 8e3,
    "tf": None,
    "tf_range": None,
    "protocol": "both",
    "grid_points": None,
    "box": None,
    "dt": None,
    "jobs": 1,
    "out": None,
    "verify_gpe": False,
    "noise_amp": 0.0,
    "seed": None,
    "delta_crit": 1e14,
    "ramp_samples": 1001,
}

COMMAND_DEFAULTS = {
    "ramp": {"dim": 3, "out": "runs/ramp"},
    "stroke": {"dim": 3, "out": "runs/stroke"},
    "cycle": {"dim": 3, "out": "runs/cycle"},
    "stability": {"dim": 1, "gf": None, "out": "runs/stability"},
    "ground-state": {"dim": 1, "out": "runs/ground_state"},
}


def build_parser() -> _Parser:
    parser = _Parser(prog="feshbach-engine",
                     description="Shortcut interaction ramps, GPE strokes, "
                                 "Otto cycles and instability speed limits "
                                 "for a Thomas-Fermi BEC.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--dim", type=int, choices=(1, 3), default=None,
                       help="spatial dimension (1: Cartesian, 3: radial)")
        p.add_argument("--gi", default=None,
                       help="initial interaction strength (stability: comma list)")
        p.add_argument("--gf", default=None,
                       help="final interaction strength (stability: comma list)")
        p.add_argument("--n", type=float, default=None, help="particle number")
        p.add_argument("--ni", type=float, default=None,
                       help="particle number, compression / cycle start")
        p.add_argument("--nf", type=float, default=None,
                       help="particle number, expansion / after removal")
        p.add_argument("--tf", type=float, default=None, help="stroke duration")
        p.add_argument("--tf-range", default=None, metavar="LO:HI:STEPS",
                       help="sweep of stroke durations")
        p.add_argument("--protocol", choices=("sta", "tra", "both"), default=None)
        p.add_argument("--grid-points", type=int, default=None)
        p.add_argument("--box", type=float, default=None)
        p.add_argument("--dt", type=float, default=None)
        p.add_argument("--jobs", type=int, default=None)
        p.add_argument("--out", metavar="DIR", default=None)
        p.add_argument("--verify-gpe", action="store_const", const=True,
                       default=None, help="also scan the GPE for the observed "
                                          "instability onset (stability)")
        p.add_argument("--noise-amp", type=float, default=None,
                       help="explicit white-noise seed amplitude (default: off)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--config", metavar="FILE", default=None,
                       help="JSON file with defaults for any of these options")

    for name, help_text in [
            ("ramp", "export interaction ramps g(t) with scale-factor data"),
            ("stroke", "sweep stroke durations, recording W_irr and fidelity"),
            ("cycle", "run Otto-cycle sweeps (efficiency, power, power ratio)"),
            ("stability", "minimum stroke times from the growth criterion"),
            ("ground-state", "compute and dump a GPE ground state")]:
        add_common(sub.add_parser(name, help=help_text))
    return parser


def _load_config_file(path) -> dict:
    import json
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError as err:
        raise ConfigError(f"config file not found: {path}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"config file is not valid JSON: {err}") from err
    unknown = set(raw) - set(COMMON_DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return raw


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(COMMON_DEFAULTS)
    cfg.update(COMMAND_DEFAULTS[args.command])
    if args.config is not None:
        cfg.update(_load_config_file(args.config))
    for key in COMMON_DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    cfg["command"] = args.command
    return cfg


def _parse_tf_values(cfg) -> list[float]:
    if cfg["tf"] is not None and cfg["tf_range"] is not None:
        raise ConfigError("give either --tf or --tf-range, not both")
    if cfg["tf"] is not None:
        return [float(cfg["tf"])]
    if cfg["tf_range"] is None:
        raise ConfigError("a stroke duration is required (--tf or --tf-range)")
    try:
        lo, hi, steps = str(cfg["tf_range"]).split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError as err:
        raise ConfigError(f"cannot parse --tf-range {cfg['tf_range']!r}, "
                          "expected LO:HI:STEPS") from err
    if steps < 1 or hi < lo or lo <= 0:
        raise ConfigError("empty or invalid sweep range")
    return [float(v) for v in np.linspace(lo, hi, steps)]


def _parse_float_list(value, name) -> list[float]:
    if value is None:
        return []
    if isinstance(value, (int, float)):
        return [float(value)]
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    try:
        return [float(tok) for tok in str(value).split(",") if tok.strip()]
    except ValueError as err:
        raise ConfigError(f"cannot parse {name} value {value!r}") from err


def _single_float(cfg, key) -> float:
    values = _parse_float_list(cfg[key], f"--{key}")
    if len(values) != 1:
        raise ConfigError(f"--{key} must be a single number for this command")
    return values[0]


def _protocols(cfg) -> tuple[str, ...]:
    return (STA, TRA) if cfg["protocol"] == "both" else (cfg["protocol"],)


def _solver_config(cfg) -> SolverConfig:
    geometry = "cartesian1d" if int(cfg["dim"]) == 1 else "radial3d"
    return SolverConfig(geometry=geometry, points=cfg["grid_points"],
                        box=cfg["box"], dt=cfg["dt"],
                        noise_amp=float(cfg["noise_amp"]), seed=cfg["seed"])


def _out_dir(cfg) -> Path:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_ramp(cfg) -> int:
    out = _out_dir(cfg)
    d = int(cfg["dim"])
    g_i, g_f = _single_float(cfg, "gi"), _single_float(cfg, "gf")
    tf_values = _parse_tf_values(cfg)
    times = lambda tf: np.linspace(0.0, tf, int(cfg["ramp_samples"]))
    written, walls = [], []
    if STA in _protocols(cfg):
        for tf in tf_values:
            start = time.perf_counter()
            p = ScalingProtocol(g_i=g_i, g_f=g_f, T_f=tf, d=d, kind=STA)
            path = io.write_ramp_csv(out / f"ramp_sta_tf{tf:g}.csv",
                                     sample_ramp(p, times(tf)))
            walls.append(time.perf_counter() - start)
            written.append(path)
    if TRA in _protocols(cfg):
        # the TRA curve is T_f-independent up to rescaling; one file suffices
        tf = max(tf_values)
        start = time.perf_counter()
        p = ScalingProtocol(g_i=g_i, g_f=g_f, T_f=tf, d=d, kind=TRA)
        path = io.write_ramp_csv(out / f"ramp_tra_tf{tf:g}.csv",
                                 sample_ramp(p, times(tf)))
        walls.append(time.perf_counter() - start)
        written.append(path)
    io.write_manifest(out / "manifest.json", "ramp", cfg, walls)
    for path in written:
        print(path)
    return 0


def cmd_stroke(cfg) -> int:
    out = _out_dir(cfg)
    config = _solver_config(cfg)
    g_i, g_f = _single_float(cfg, "gi"), _single_float(cfg, "gf")
    n_comp = float(cfg["ni"] if cfg["ni"] is not None else cfg["n"])
    n_exp = float(cfg["nf"] if cfg["nf"] is not None else cfg["n"])
    rows = sweep_strokes(config, n_comp, n_exp, g_i, g_f, _parse_tf_values(cfg),
                         protocols=_protocols(cfg), jobs=int(cfg["jobs"]))
    table = []
    walls = []
    for row in rows:
        if row.result is None:
            table.append((row.T_f, row.protocol, row.direction,
                          float("nan"), float("nan"), False))
            walls.append(0.0)
        else:
            table.append((row.T_f, row.protocol, row.direction,
                          row.result.W_irr, row.result.fidelity,
                          row.result.collapsed))
            walls.append(row.result.wall_time)
    path = io.write_csv(out / "strokes.csv",
                        ["T_f", "protocol", "direction", "W_irr", "F", "collapsed"],
                        table)
    io.write_manifest(out / "manifest.json", "stroke", cfg, walls,
                      extra={"errors": [row.error for row in rows]})
    print(path)
    return 0


def cmd_cycle(cfg) -> int:
    out = _out_dir(cfg)
    config = _solver_config(cfg)
    g_i, g_f = _single_float(cfg, "gi"), _single_float(cfg, "gf")
    template = CycleSpec(g_i=g_i, g_f=g_f, N_i=float(cfg["ni"]),
                         N_f=float(cfg["nf"]), T_f=1.0, solver=config)
    tf_values = _parse_tf_values(cfg)
    rows = sweep_cycles(template, tf_values, protocols=_protocols(cfg),
                        jobs=int(cfg["jobs"]))
    table, walls = [], []
    for row in rows:
        if row.result is None:
            table.append((row.tau, row.protocol) + (float("nan"),) * 6 + (False,))
            walls.append(0.0)
        else:
            r = row.result
            table.append((row.tau, row.protocol, r.W_C, r.W_E, r.Q_plus,
                          r.Q_minus, r.eta, r.P, r.collapsed))
            walls.append(r.compression.wall_time + r.expansion.wall_time)
    path = io.write_csv(
        out / "cycles.csv",
        ["tau", "protocol", "W_C", "W_E", "Q_plus", "Q_minus", "eta", "P",
         "collapsed"], table)
    ratio_path = io.write_csv(out / "power_ratio.csv",
                              ["tau", "P_sta", "P_tra", "ratio"],
                              power_ratio(rows))
    eta_ad = adiabatic_efficiency(g_i, g_f, int(cfg["dim"]))
    io.write_manifest(out / "manifest.json", "cycle", cfg, walls,
                      extra={"eta_ad": eta_ad,
                             "errors": [row.error for row in rows]})
    print(path)
    print(ratio_path)
    return 0


def cmd_stability(cfg) -> int:
    out = _out_dir(cfg)
    d = int(cfg["dim"])
    n_atoms = float(cfg["n"])
    gi_values = _parse_float_list(cfg["gi"], "--gi")
    gf_values = _parse_float_list(cfg["gf"], "--gf") or \
        [float(v) for v in np.linspace(0.5, 0.9, 5)]
    delta_crit = float(cfg["delta_crit"])
    written, walls = [], []
    for g_i in gi_values:
        rows = []
        for g_f in gf_values:
            start = time.perf_counter()
            query = StabilityQuery(g_i=g_i, g_f=g_f, n_atoms=n_atoms, d=d,
                                   delta_crit=delta_crit)
            t_crit = min_stroke_time(query)
            t_gpe = float("nan")
            if cfg["verify_gpe"] and t_crit > 0.0:
                config = _solver_config(cfg)
                step = 0.01
                t_gpe, _ = find_collapse_threshold(
                    config, n_atoms, g_i, g_f,
                    t_start=max(step, 0.6 * t_crit), t_stop=1.5 * t_crit,
                    step=step)
            rows.append((g_f, t_crit, t_gpe))
            walls.append(time.perf_counter() - start)
        path = io.write_csv(out / f"stability_gi{g_i:g}.csv",
                            ["g_f", "T_f_min_criterion", "T_f_min_gpe"], rows)
        written.append(path)
    io.write_manifest(out / "manifest.json", "stability", cfg, walls)
    for path in written:
        print(path)
    return 0


def cmd_ground_state(cfg) -> int:
    out = _out_dir(cfg)
    config = _solver_config(cfg)
    grid = config.make_grid()
    g = _single_float(cfg, "gi")
    n_atoms = float(cfg["n"])
    start = time.perf_counter()
    psi = ground_state(grid, g, n_atoms, tol=config.gs_tol, dt=config.dt)
    wall = time.perf_counter() - start
    e_kin, e_pot, e_int = energy_components(psi, g)
    total = e_kin + e_pot + e_int
    d = grid.dimension
    diagnostics = {
        "E": total,
        "E_kin": e_kin,
        "E_pot": e_pot,
        "E_int": e_int,
        "virial_residual": abs(2 * e_kin - 2 * e_pot + d * e_int) / abs(total),
        "norm": psi.norm_sq(),
    }
    if g > 0:
        e_tf = tf_energy(n_atoms, g, d)
        diagnostics["tf_energy"] = e_tf
        diagnostics["tf_rel_diff"] = abs(total - e_tf) / e_tf
    csv_path, _ = io.write_wavefunction(out / "ground_state", psi, n_atoms, g, 0.0)
    io.write_manifest(out / "manifest.json", "ground-state", cfg, [wall],
                      extra={"diagnostics": diagnostics})
    print(csv_path)
    return 0


RUNNERS = {
    "ramp": cmd_ramp,
    "stroke": cmd_stroke,
    "cycle": cmd_cycle,
    "stability": cmd_stability,
    "ground-state": cmd_ground_state,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code or 0)
    try:
        cfg = resolve_config(args)
        return RUNNERS[args.command](cfg)
    except (ConfigError, ValueError) as err:
        print(f"feshbach-engine: config error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"feshbach-engine: I/O error: {err}", file=sys.stderr)
        return 2
    except (ConvergenceError, BracketError, IntegrationError,
            FloatingPointError) as err:
        print(f"feshbach-engine: numerical failure: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
