"""Feshbach-engine toolkit for Thomas-Fermi Bose-Einstein condensates.

Builds shortcut interaction ramps, propagates the Gross-Pitaevskii equation
to validate them, evaluates Otto-cycle efficiency and power, and predicts
the modulational-instability speed limit on stroke durations.  All
quantities are in harmonic-oscillator units (hbar = m = omega = 1).
"""

__version__ = "0.1.0"

from .engine import (CycleResult, CycleRow, CycleSpec, GroundStateCache,
                     find_collapse_threshold, power_ratio, run_cycle, run_stroke,
                     sweep_cycles)
from .grids import SpatialGrid, WaveFunction, cartesian_1d, make_grid, radial_3d
from .ramps import (InteractionRamp, RampSample, ScalingProtocol, rescaled_time,
                    sample_ramp, scale_factor, sta_ramp, tra_ramp)
from .solver import (CollapseError, ConvergenceError, SolverConfig, StrokeResult,
                     Trajectory, default_timestep, energy, energy_components,
                     fidelity, ground_state, irreversible_work, propagate)
from .stability import (BracketError, IntegrationError, StabilityQuery,
                        attractive_growth_rate, criterion_curve,
                        effective_chemical_potential, growth_factor, hill_growth,
                        log_growth_factor, min_stroke_time)
from .thomas_fermi import (adiabatic_efficiency, analytic_evolution,
                           chemical_potential, tf_density, tf_energy,
                           tf_wavefunction)

__all__ = [
    "__version__",
    "adiabatic_efficiency", "analytic_evolution", "attractive_growth_rate",
    "BracketError", "cartesian_1d", "chemical_potential", "CollapseError",
    "ConvergenceError", "criterion_curve", "CycleResult", "CycleRow",
    "CycleSpec", "default_timestep", "effective_chemical_potential", "energy",
    "energy_components", "fidelity", "find_collapse_threshold", "ground_state",
    "GroundStateCache", "growth_factor", "hill_growth", "InteractionRamp",
    "IntegrationError", "irreversible_work", "log_growth_factor", "make_grid",
    "min_stroke_time", "power_ratio", "propagate", "radial_3d", "RampSample",
    "rescaled_time", "run_cycle", "run_stroke", "sample_ramp", "scale_factor",
    "ScalingProtocol", "SolverConfig", "SpatialGrid", "sta_ramp",
    "StabilityQuery", "StrokeResult", "sweep_cycles", "tf_density", "tf_energy",
    "tf_wavefunction", "tra_ramp", "Trajectory", "WaveFunction",
]
