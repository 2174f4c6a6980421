"""Modulational-instability analysis of the engineered interaction ramps.

Near the trap center the rescaled condensate behaves like a homogeneous
system with an effective, time-dependent chemical potential

    mu(t) = mu_i (a''(t) a(t) + a(t)^2),

which turns negative whenever the ramp drives the gas attractive.  A plane
wave perturbation of wavenumber k on top of this background obeys a
Hill-type equation; at the fastest-growing wavenumber k = sqrt(2|mu|) the
amplitude grows at the instantaneous rate mu_tilde = max(0, -mu).  The total
amplification over a stroke,

    Delta = exp( integral_0^Tf mu_tilde dt ),

compared against a critical value (1e14, the inverse of double-precision
round-off noise) predicts the minimum stroke duration before collapse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .quadrature import gauss_legendre
from .ramps import STA, TRA, ScalingProtocol, scale_factor
from .thomas_fermi import chemical_potential


class BracketError(RuntimeError):
    """No sign change found when bracketing the stability threshold."""

    def __init__(self, message, scan=None):
        super().__init__(message)
        self.scan = scan


class IntegrationError(RuntimeError):
    """The perturbation ODE integrator failed."""


@dataclass(frozen=True)
class StabilityQuery:
    """Inputs of a threshold computation for a compression/expansion ramp."""

    g_i: float
    g_f: float
    n_atoms: float
    d: int
    delta_crit: float = 1e14
    bracket: tuple[float, float] = (1e-3, 20.0)

    def __post_init__(self):
        if self.delta_crit <= 1.0:
            raise ValueError("delta_crit must exceed 1")

    def mu_i(self) -> float:
        return chemical_potential(self.n_atoms, self.g_i, self.d)

    def protocol(self, T_f: float) -> ScalingProtocol:
        return ScalingProtocol(g_i=self.g_i, g_f=self.g_f, T_f=T_f, d=self.d,
                               kind=STA)


def effective_chemical_potential(p: ScalingProtocol, mu_i: float, t):
    """mu(t) = mu_i (a'' a + a^2); the a'' term is absent for a TRA ramp.

    The same closed form holds in 1, 2 and 3 dimensions, with the dimension
    entering only through mu_i and the final scale factor.
    """
    a, _, a_ddot = scale_factor(p, t)
    if p.kind == TRA:
        return mu_i * a ** 2
    return mu_i * (a_ddot * a + a ** 2)


def attractive_growth_rate(mu):
    """Instantaneous growth rate at the optimal wavenumber: |mu| where mu <= 0."""
    return np.maximum(0.0, -np.asarray(mu, dtype=float))


def _attractive_intervals(p: ScalingProtocol, mu_i: float,
                          scan_points: int = 2049) -> list[tuple[float, float]]:
    """Intervals of [0, T_f] where mu(t) < 0, located via a dense scan + brentq."""
    t = np.linspace(0.0, p.T_f, scan_points)
    mu = np.asarray(effective_chemical_potential(p, mu_i, t))
    sign = np.sign(mu)
    crossings = []
    f = lambda tt: float(effective_chemical_potential(p, mu_i, tt))
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        crossings.append(brentq(f, t[i], t[i + 1]))
    edges = [0.0] + crossings + [p.T_f]
    intervals = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if f(0.5 * (lo + hi)) < 0.0:
            intervals.append((lo, hi))
    return intervals


def log_growth_factor(q: StabilityQuery, T_f: float) -> float:
    """ln Delta: the integral of the attractive growth rate over the stroke.

    The integrand has kinks where mu changes sign, so each attractive
    interval is integrated separately (the quadrature then sees a smooth
    function and stays well below the 1e-6 relative error budget).
    """
    if T_f <= 0:
        raise ValueError("T_f must be positive")
    if q.g_f == q.g_i:
        return 0.0
    p = q.protocol(T_f)
    mu_i = q.mu_i()
    total = 0.0
    for lo, hi in _attractive_intervals(p, mu_i):
        total += gauss_legendre(
            lambda tt: attractive_growth_rate(
                effective_chemical_potential(p, mu_i, tt)),
            lo, hi, panels=64)
    return total


def growth_factor(q: StabilityQuery, T_f: float) -> float:
    """Total perturbation amplification Delta >= 1 (may overflow to inf)."""
    with np.errstate(over="ignore"):
        return float(np.exp(log_growth_factor(q, T_f)))


def min_stroke_time(q: StabilityQuery, rtol: float = 1e-6,
                    scan_points: int = 64) -> float:
    """Smallest stroke duration with Delta below the critical amplification.

    Solves Delta(T_f) = delta_crit by bisection after bracketing on a
    geometric scan of the search interval.  Delta decreases with T_f for
    these ramps; if the scan turns out non-monotone the outermost (largest-T)
    crossing is used.  Returns 0 when the ramp never reaches the critical
    amplification anywhere in the bracket (unconditionally stable).
    """
    target = np.log(q.delta_crit)
    lo, hi = q.bracket
    grid = np.geomspace(lo, hi, scan_points)
    vals = np.array([log_growth_factor(q, float(t)) for t in grid]) - target
    if np.all(vals <= 0.0):
        return 0.0
    if vals[-1] > 0.0:
        raise BracketError(
            f"Delta still exceeds delta_crit at T_f = {hi}; enlarge the bracket",
            scan=list(zip(grid.tolist(), (vals + target).tolist())))
    above = np.nonzero(vals > 0.0)[0]
    i = above[-1]  # outermost crossing
    return float(brentq(lambda t: log_growth_factor(q, float(t)) - target,
                        grid[i], grid[i + 1], rtol=rtol))


def hill_growth(p: ScalingProtocol, mu_i: float, k: float, T_f: float,
                phase0: float = 0.0, rtol: float = 1e-8) -> float:
    """Amplitude amplification r(T_f)/r(0) of a fixed-k perturbation.

    Integrates the linearized pair

        u_re' = (k^2/2) u_im,
        u_im' = -(k^2/2 + 2 mu(t)) u_re,

    equivalent to the Hill-type second-order equation for u_re (the slow
    a'/2a damping terms are negligible at these wavenumbers and are dropped).
    This is a diagnostic for a single mode and is not expected to reproduce
    the optimal-k amplification Delta.
    """
    if k <= 0:
        raise ValueError("wavenumber k must be positive")
    if not 0 < T_f <= p.T_f:
        raise ValueError(f"T_f must lie in (0, {p.T_f}]")

    def rhs(t, u):
        mu = float(effective_chemical_potential(p, mu_i, min(t, p.T_f)))
        return (0.5 * k ** 2 * u[1], -(0.5 * k ** 2 + 2.0 * mu) * u[0])

    u0 = (np.cos(phase0), np.sin(phase0))
    sol = solve_ivp(rhs, (0.0, T_f), u0, rtol=rtol, atol=1e-12, method="RK45")
    if not sol.success:
        raise IntegrationError(f"perturbation integration failed: {sol.message}")
    u_re, u_im = sol.y[:, -1]
    return float(np.hypot(u_re, u_im))


def criterion_curve(d: int, g_i: float, n_atoms: float, gf_values,
                    delta_crit: float = 1e14,
                    bracket: tuple[float, float] = (1e-3, 20.0)) -> np.ndarray:
    """Minimum stroke time for each final interaction strength."""
    out = []
    for g_f in gf_values:
        q = StabilityQuery(g_i=g_i, g_f=float(g_f), n_atoms=n_atoms, d=d,
                           delta_crit=delta_crit, bracket=bracket)
        out.append(min_stroke_time(q))
    return np.array(out)
