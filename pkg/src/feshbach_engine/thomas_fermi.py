"""Closed-form Thomas-Fermi results for a harmonically trapped BEC.

Chemical potential and total energy follow from normalizing the inverted
parabola n = (mu - x^2/2)/g in d dimensions:

    d = 1:  mu = (9 N^2 g^2 / 32)^(1/3)
    d = 2:  mu = (N g / pi)^(1/2)
    d = 3:  mu = (15 N g / (16 sqrt(2) pi))^(2/5)

with E = N mu (d+2)/(d+4).  The analytically evolved wavefunction under the
engineered ramp is the initial TF profile rescaled by a(t), carrying the
quadratic gauge phase (a'/2a) x^2 and the accumulated global phase
-mu_i tau(t).
"""

from __future__ import annotations

import numpy as np

from .grids import CARTESIAN_1D, RADIAL_3D, SpatialGrid, WaveFunction
from .ramps import STA, ScalingProtocol, rescaled_time, scale_factor


def chemical_potential(n_atoms: float, g: float, d: int) -> float:
    """Thomas-Fermi chemical potential (units hbar omega)."""
    if g <= 0:
        raise ValueError(f"TF profile undefined for g <= 0 (got {g})")
    if n_atoms <= 0:
        raise ValueError(f"particle number must be positive (got {n_atoms})")
    if d == 1:
        return (9.0 * n_atoms ** 2 * g ** 2 / 32.0) ** (1.0 / 3.0)
    if d == 2:
        return (n_atoms * g / np.pi) ** 0.5
    if d == 3:
        return (15.0 * n_atoms * g / (16.0 * np.sqrt(2.0) * np.pi)) ** 0.4
    raise ValueError(f"dimension must be 1, 2 or 3 (got {d})")


def tf_energy(n_atoms: float, g: float, d: int) -> float:
    """Total TF energy E = N mu (d+2)/(d+4); 5/7 N mu in three dimensions."""
    mu = chemical_potential(n_atoms, g, d)
    return n_atoms * mu * (d + 2.0) / (d + 4.0)


def tf_density(x, n_atoms: float, g: float, d: int) -> np.ndarray:
    """TF density n = max(0, (mu - x^2/2)/g) on positions (or radii) x."""
    if isinstance(x, SpatialGrid):
        x = x.x
    mu = chemical_potential(n_atoms, g, d)
    x = np.asarray(x, dtype=float)
    return np.maximum(0.0, (mu - 0.5 * x ** 2) / g)


def adiabatic_efficiency(g_i: float, g_f: float, d: int) -> float:
    """Maximal Otto-cycle efficiency 1 - (g_f/g_i)^gamma from TF endpoint energies.

    gamma = 2/(d+2): 2/3 in 1D, 1/2 in 2D, 2/5 in 3D.
    """
    if d not in (1, 2, 3):
        raise ValueError(f"dimension must be 1, 2 or 3 (got {d})")
    if g_i <= 0 or g_f <= 0:
        raise ValueError("interaction strengths must be positive")
    if g_f > g_i:
        raise ValueError("cycle orientation requires g_f <= g_i")
    gamma = 2.0 / (d + 2.0)
    return 1.0 - (g_f / g_i) ** gamma


def analytic_evolution(grid: SpatialGrid, p: ScalingProtocol, n_atoms: float,
                       t: float) -> WaveFunction:
    """State reached at time t by following the scaling trajectory exactly.

    psi(x,t) = a^{-d/2} exp(i (a'/2a) x^2) exp(-i mu_i tau(t))
               * sqrt(max(0, (mu_i - x^2/(2a^2)) / g_i))

    Valid for the engineered (STA) ramp; the a^{-d/2} prefactor preserves the
    norm N at all times.  The global tau phase is kept for completeness even
    though it drops out of every observable.
    """
    if p.kind != STA:
        raise ValueError("analytic evolution is defined for the STA protocol")
    if grid.dimension != p.d:
        raise ValueError(f"grid geometry is {grid.dimension}D but protocol has d={p.d}")
    mu_i = chemical_potential(n_atoms, p.g_i, p.d)
    a, a_dot, _ = scale_factor(p, t)
    tau = rescaled_time(p, t)
    x = grid.x
    profile = np.sqrt(np.maximum(0.0, (mu_i - 0.5 * x ** 2 / a ** 2) / p.g_i))
    phase = np.exp(1j * (0.5 * a_dot / a) * x ** 2 - 1j * mu_i * tau)
    psi = a ** (-0.5 * p.d) * phase * profile
    if grid.geometry == RADIAL_3D:
        psi = x * psi  # stored field is u(r) = r psi(r)
    return WaveFunction(grid, psi.astype(np.complex128))


def tf_wavefunction(grid: SpatialGrid, n_atoms: float, g: float) -> WaveFunction:
    """Zero-phase TF ground-state profile on a solver grid."""
    d = grid.dimension
    values = np.sqrt(tf_density(grid.x, n_atoms, g, d)).astype(np.complex128)
    if grid.geometry == RADIAL_3D:
        values = grid.x * values
    return WaveFunction(grid, values)
