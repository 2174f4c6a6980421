"""Scaling function and interaction ramps for frictionless BEC compression.

Everything is expressed in harmonic-oscillator units (hbar = m = omega = 1):
lengths in x0 = sqrt(hbar/m omega), times in 1/omega, energies in hbar*omega
and interaction strengths in hbar*omega*x0^d.

The scale factor a(t) follows the quintic smoother-step polynomial, which is
the lowest-order polynomial satisfying a(0) = 1, a(T_f) = a_f and vanishing
first and second derivatives at both ends.  The engineered (STA) ramp

    g(t) = g_i * a(t)^(d+1) * (a''(t) + a(t))

drives the trapped cloud exactly along the self-similar scaling trajectory,
while the time-rescaled adiabatic reference (TRA) ramp is obtained by
dropping the a'' correction, g(t) = g_i * a(t)^(d+2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .quadrature import cumulative_gauss_legendre, gauss_legendre

STA = "sta"
TRA = "tra"

_KINDS = (STA, TRA)


@dataclass(frozen=True)
class ScalingProtocol:
    """Boundary data for one interaction stroke.

    g_i, g_f : initial/final interaction strength (> 0, repulsive endpoints)
    T_f      : stroke duration in units of 1/omega
    d        : spatial dimension, 1, 2 or 3
    kind     : "sta" (engineered ramp) or "tra" (rescaled adiabatic reference)
    """

    g_i: float
    g_f: float
    T_f: float
    d: int = 1
    kind: str = STA

    def __post_init__(self):
        if self.g_i <= 0 or self.g_f <= 0:
            raise ValueError("interaction endpoints must be positive "
                             f"(got g_i={self.g_i}, g_f={self.g_f})")
        if self.T_f <= 0:
            raise ValueError(f"stroke duration must be positive (got {self.T_f})")
        if self.d not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3 (got {self.d})")
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS} (got {self.kind!r})")

    @property
    def a_i(self) -> float:
        return 1.0

    @property
    def a_f(self) -> float:
        # Final scale factor that maps the TF cloud at g_i onto the one at g_f.
        return (self.g_f / self.g_i) ** (1.0 / (self.d + 2))


@dataclass(frozen=True)
class RampSample:
    """One sampled point of a ramp: scale factor, derivatives, g and tau."""

    t: float
    a: float
    a_dot: float
    a_ddot: float
    g: float
    tau: float


def _check_time(p: ScalingProtocol, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(t > p.T_f):
        raise ValueError(f"time outside [0, {p.T_f}]")
    return t


def scale_factor(p: ScalingProtocol, t):
    """Scale factor a(t) and its first two derivatives (closed form).

    Accepts a scalar or array t in [0, T_f]; returns (a, a_dot, a_ddot).
    The derivatives are evaluated analytically, never by finite differences,
    since the ramp is sensitive to a''.
    """
    t = _check_time(p, t)
    s = t / p.T_f
    da = p.a_f - 1.0
    a = 1.0 + da * (s ** 3 * (10.0 + s * (-15.0 + 6.0 * s)))
    a_dot = da * 30.0 * s ** 2 * (1.0 - s) ** 2 / p.T_f + 0.0
    a_ddot = da * 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s) / p.T_f ** 2 + 0.0
    return a, a_dot, a_ddot


def sta_ramp(p: ScalingProtocol, t):
    """Engineered interaction ramp g(t) = g_i a^{d+1} (a'' + a)."""
    a, _, a_ddot = scale_factor(p, t)
    return p.g_i * a ** (p.d + 1) * (a_ddot + a)


def tra_ramp(p: ScalingProtocol, t):
    """Reference ramp with the acceleration term dropped: g = g_i a^{d+2}."""
    a, _, _ = scale_factor(p, t)
    return p.g_i * a ** (p.d + 2)


def interaction_strength(p: ScalingProtocol, t):
    """g(t) for the protocol's kind (STA or TRA)."""
    return sta_ramp(p, t) if p.kind == STA else tra_ramp(p, t)


def rescaled_time(p: ScalingProtocol, t):
    """Rescaled time tau(t) = integral of g(t')/(g_i a^d(t')) dt'.

    For a scalar t the integral runs over [0, t]; for a non-decreasing array
    the values are accumulated segment by segment.  Composite Gauss-Legendre
    quadrature keeps the relative error comfortably below 1e-10 (the
    integrand is a smooth polynomial expression).
    """

    def integrand(tt):
        a, _, _ = scale_factor(p, tt)
        return interaction_strength(p, tt) / (p.g_i * a ** p.d)

    t_arr = _check_time(p, t)
    if t_arr.ndim == 0:
        return gauss_legendre(integrand, 0.0, float(t_arr), panels=64)
    if np.any(np.diff(t_arr) < 0.0):
        raise ValueError("array of times must be non-decreasing")
    return cumulative_gauss_legendre(integrand, t_arr)


def sample_ramp(p: ScalingProtocol, times) -> list[RampSample]:
    """Sample a, a', a'', g and tau on a non-decreasing time grid."""
    t = _check_time(p, times)
    a, a_dot, a_ddot = scale_factor(p, t)
    g = interaction_strength(p, t)
    tau = rescaled_time(p, t)
    return [RampSample(*vals) for vals in zip(t, a, a_dot, a_ddot, g, tau)]


@dataclass(frozen=True)
class InteractionRamp:
    """Closed-form g(t) on [0, T_f] with a protocol tag.

    Wraps either a ScalingProtocol (STA/TRA) or an arbitrary callable, so the
    propagator only ever sees `ramp.g(t)`.
    """

    g: Callable
    T_f: float
    kind: str
    protocol: ScalingProtocol | None = None

    @classmethod
    def from_protocol(cls, p: ScalingProtocol) -> "InteractionRamp":
        return cls(g=lambda t: interaction_strength(p, t), T_f=p.T_f,
                   kind=p.kind, protocol=p)

    @classmethod
    def constant(cls, g: float, T_f: float) -> "InteractionRamp":
        return cls(g=lambda t: np.full_like(np.asarray(t, dtype=float), g),
                   T_f=T_f, kind="const")
