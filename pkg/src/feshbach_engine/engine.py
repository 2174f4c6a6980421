"""Otto-cycle orchestration on top of the GPE solver.

A cycle consists of a compression stroke at particle number N_i (g_i -> g_f),
an instantaneous particle-removal stroke to the ground state at (N_f, g_f),
an expansion stroke at N_f (g_f -> g_i) and an instantaneous refill back to
(N_i, g_i).  The isochoric (particle-number) strokes are modeled as perfect,
zero-duration ground-state swaps, so the cycle duration is 2 T_f.

Work is computed from the actual post-stroke energies while the heat input
Q_plus uses ground-state energies (the refill ends in the exact ground state
by assumption):

    W_C    = E_actual(N_i, g_f) - E_0(N_i, g_i)
    W_E    = E_actual(N_f, g_i) - E_0(N_f, g_f)
    Q_plus = E_0(N_i, g_i) - E_0(N_f, g_i)
    eta    = -(W_C + W_E) / Q_plus,     P = -(W_C + W_E) / (2 T_f)
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .grids import WaveFunction
from .ramps import InteractionRamp, ScalingProtocol
from .solver import (CollapseError, SolverConfig, StrokeResult, energy, fidelity,
                     ground_state, irreversible_work, propagate)


class GroundStateCache:
    """Ground states keyed by (grid, N, g); they are reused across strokes."""

    def __init__(self):
        self._states: dict = {}

    def get(self, config: SolverConfig, n_atoms: float, g: float) -> WaveFunction:
        grid = config.make_grid()
        key = (grid.geometry, grid.points, grid.box, float(n_atoms), float(g),
               config.gs_tol)
        if key not in self._states:
            self._states[key] = ground_state(grid, g, n_atoms, tol=config.gs_tol,
                                             max_iter=config.gs_max_iter)
        return self._states[key]

    def energy_of(self, config: SolverConfig, n_atoms: float, g: float) -> float:
        return energy(self.get(config, n_atoms, g), g)


@dataclass(frozen=True)
class CycleSpec:
    """Parameters of one Otto cycle (orientation: g_f < g_i, N_f < N_i)."""

    g_i: float
    g_f: float
    N_i: float
    N_f: float
    T_f: float
    protocol: str = "sta"
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if not (0 < self.g_f < self.g_i):
            raise ValueError("cycle orientation requires 0 < g_f < g_i")
        if not (0 < self.N_f < self.N_i):
            raise ValueError("cycle orientation requires 0 < N_f < N_i")
        if self.T_f <= 0:
            raise ValueError("stroke duration must be positive")


@dataclass
class CycleResult:
    """Energetics of one executed cycle."""

    W_C: float
    W_E: float
    Q_plus: float
    Q_minus: float
    eta: float
    P: float
    tau: float
    collapsed: bool
    compression: StrokeResult = field(repr=False)
    expansion: StrokeResult = field(repr=False)


@dataclass
class CycleRow:
    """One sweep entry; `error` is set when the row failed outright."""

    tau: float
    protocol: str
    result: CycleResult | None
    error: str | None = None


def run_stroke(n_atoms: float, g_from: float, g_to: float, T_f: float,
               protocol: str, config: SolverConfig, *,
               initial: WaveFunction | None = None,
               target: WaveFunction | None = None,
               cache: GroundStateCache | None = None) -> StrokeResult:
    """Propagate one work stroke and report end-of-stroke observables.

    A collapse during propagation is not an error at this level: the result
    carries collapsed=True with W_irr and fidelity evaluated on the final
    (unphysical) state, which is what produces the characteristic spikes when
    sweeping the stroke duration.
    """
    cache = cache if cache is not None else GroundStateCache()
    if initial is None:
        initial = cache.get(config, n_atoms, g_from)
    if target is None:
        target = initial if g_from == g_to else cache.get(config, n_atoms, g_to)

    if g_from == g_to:
        ramp = InteractionRamp.constant(g_from, T_f)
    else:
        grid = initial.grid
        p = ScalingProtocol(g_i=g_from, g_f=g_to, T_f=T_f, d=grid.dimension,
                            kind=protocol)
        ramp = InteractionRamp.from_protocol(p)

    start = time.perf_counter()
    collapsed = False
    trajectory = None
    try:
        final, trajectory = propagate(initial, ramp, T_f, dt=config.dt,
                                      samples=config.samples,
                                      noise_amp=config.noise_amp, seed=config.seed)
    except CollapseError as err:
        final = err.psi
        trajectory = err.trajectory
        collapsed = True
    wall = time.perf_counter() - start

    e_final = energy(final, g_to)
    e_target = energy(target, g_to)
    return StrokeResult(
        E_final=e_final,
        W_irr=irreversible_work(e_final, e_target),
        fidelity=fidelity(final, target),
        collapsed=collapsed,
        wall_time=wall,
        trajectory=trajectory,
    )


def run_cycle(spec: CycleSpec, cache: GroundStateCache | None = None) -> CycleResult:
    """Execute both work strokes and assemble the cycle energetics."""
    cache = cache if cache is not None else GroundStateCache()
    cfg = spec.solver
    compression = run_stroke(spec.N_i, spec.g_i, spec.g_f, spec.T_f,
                             spec.protocol, cfg, cache=cache)
    expansion = run_stroke(spec.N_f, spec.g_f, spec.g_i, spec.T_f,
                           spec.protocol, cfg, cache=cache)
    e_ii = cache.energy_of(cfg, spec.N_i, spec.g_i)
    e_fi = cache.energy_of(cfg, spec.N_f, spec.g_i)
    e_ff = cache.energy_of(cfg, spec.N_f, spec.g_f)

    w_c = compression.E_final - e_ii
    w_e = expansion.E_final - e_ff
    q_plus = e_ii - e_fi
    q_minus = e_ff - compression.E_final
    tau = 2.0 * spec.T_f
    net = -(w_c + w_e)
    return CycleResult(
        W_C=w_c, W_E=w_e, Q_plus=q_plus, Q_minus=q_minus,
        eta=net / q_plus, P=net / tau, tau=tau,
        collapsed=compression.collapsed or expansion.collapsed,
        compression=compression, expansion=expansion,
    )


def _sweep_job(args) -> CycleRow:
    spec, cache = args
    try:
        return CycleRow(tau=2.0 * spec.T_f, protocol=spec.protocol,
                        result=run_cycle(spec, cache=cache))
    except Exception as err:  # record per-row failures, keep sweeping
        return CycleRow(tau=2.0 * spec.T_f, protocol=spec.protocol,
                        result=None, error=f"{type(err).__name__}: {err}")


def sweep_cycles(template: CycleSpec, tf_values, protocols=("sta", "tra"),
                 jobs: int = 1) -> list[CycleRow]:
    """One cycle per (T_f, protocol), in deterministic input order.

    The four corner ground states are computed once up front and shared by
    every row (they do not depend on T_f or the protocol).  With jobs > 1 the
    rows run in a process pool; results are merged in input order.
    """
    tf_values = list(tf_values)
    if not tf_values:
        raise ValueError("empty T_f sweep")
    cache = GroundStateCache()
    for n, g in ((template.N_i, template.g_i), (template.N_i, template.g_f),
                 (template.N_f, template.g_f), (template.N_f, template.g_i)):
        cache.get(template.solver, n, g)

    specs = [replace(template, T_f=float(tf), protocol=proto)
             for tf in tf_values for proto in protocols]
    args = [(spec, cache) for spec in specs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_job, args))
    else:
        rows = [_sweep_job(a) for a in args]
    return rows


def power_ratio(rows: list[CycleRow]) -> list[tuple[float, float, float, float]]:
    """(tau, P_sta, P_tra, P_sta/P_tra) for sweep points having both protocols."""
    by_tau: dict = {}
    for row in rows:
        if row.result is not None:
            by_tau.setdefault(row.tau, {})[row.protocol] = row.result.P
    out = []
    for tau in sorted(by_tau):
        entry = by_tau[tau]
        if "sta" in entry and "tra" in entry and entry["tra"] != 0.0:
            out.append((tau, entry["sta"], entry["tra"], entry["sta"] / entry["tra"]))
    return out


@dataclass
class StrokeRow:
    """One stroke-sweep entry (direction is 'compression' or 'expansion')."""

    T_f: float
    protocol: str
    direction: str
    result: StrokeResult | None
    error: str | None = None


def _stroke_job(args) -> StrokeRow:
    n_atoms, g_from, g_to, t_f, protocol, direction, config, cache = args
    try:
        res = run_stroke(n_atoms, g_from, g_to, t_f, protocol, config, cache=cache)
        return StrokeRow(T_f=t_f, protocol=protocol, direction=direction, result=res)
    except Exception as err:
        return StrokeRow(T_f=t_f, protocol=protocol, direction=direction,
                         result=None, error=f"{type(err).__name__}: {err}")


def sweep_strokes(config: SolverConfig, n_compression: float, n_expansion: float,
                  g_i: float, g_f: float, tf_values, protocols=("sta", "tra"),
                  directions=("compression", "expansion"),
                  jobs: int = 1) -> list[StrokeRow]:
    """Compression (at n_compression) and expansion (at n_expansion) sweeps."""
    tf_values = list(tf_values)
    if not tf_values:
        raise ValueError("empty T_f sweep")
    cache = GroundStateCache()
    if "compression" in directions:
        cache.get(config, n_compression, g_i)
        cache.get(config, n_compression, g_f)
    if "expansion" in directions:
        cache.get(config, n_expansion, g_f)
        cache.get(config, n_expansion, g_i)
    jobs_args = []
    for t_f in tf_values:
        for proto in protocols:
            for direction in directions:
                if direction == "compression":
                    jobs_args.append((n_compression, g_i, g_f, float(t_f), proto,
                                      direction, config, cache))
                else:
                    jobs_args.append((n_expansion, g_f, g_i, float(t_f), proto,
                                      direction, config, cache))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_stroke_job, jobs_args))
    return [_stroke_job(a) for a in jobs_args]


@dataclass
class ThresholdScanRow:
    T_f: float
    W_irr: float
    fidelity: float
    collapsed: bool
    spike: bool


def find_collapse_threshold(config: SolverConfig, n_atoms: float, g_i: float,
                            g_f: float, t_start: float, t_stop: float,
                            step: float = 0.01, spike_fraction: float = 1e-2,
                            cache: GroundStateCache | None = None,
                            settle_rows: int = 3
                            ) -> tuple[float, list[ThresholdScanRow]]:
    """Scan stroke durations for the observed instability onset.

    Runs STA compression strokes on an ascending T_f grid and flags rows where
    the stroke collapsed or the irreversible work spiked above
    `spike_fraction` of the target energy.  Returns the largest flagged T_f
    (0.0 when the whole range is stable) together with the scan table.  The
    scan stops `settle_rows` grid points after the last spike.
    """
    cache = cache if cache is not None else GroundStateCache()
    initial = cache.get(config, n_atoms, g_i)
    target = cache.get(config, n_atoms, g_f)
    e_target = energy(target, g_f)

    rows: list[ThresholdScanRow] = []
    threshold = 0.0
    clean_streak = 0
    for t_f in np.arange(t_start, t_stop + 0.5 * step, step):
        res = run_stroke(n_atoms, g_i, g_f, float(t_f), "sta", config,
                         initial=initial, target=target, cache=cache)
        spike = res.collapsed or res.W_irr > spike_fraction * abs(e_target)
        rows.append(ThresholdScanRow(T_f=float(t_f), W_irr=res.W_irr,
                                     fidelity=res.fidelity,
                                     collapsed=res.collapsed, spike=spike))
        if spike:
            threshold = float(t_f)
            clean_streak = 0
        else:
            clean_streak += 1
            if threshold > 0.0 and clean_streak >= settle_rows:
                break
    return threshold, rows
