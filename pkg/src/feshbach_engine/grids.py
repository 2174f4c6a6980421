"""Spatial grids and wavefunctions for the two supported geometries.

Cartesian1D: periodic FFT grid on [-L, L) with M points.  Radial3D: the
spherically symmetric reduction u(r) = r*psi(r) on nodes r_j = j*dr,
j = 1..M with dr = L/M.  u obeys Dirichlet conditions at r = 0 and at the
outer wall one spacing past L, which makes the kinetic operator diagonal in
a type-I sine transform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import fft as sfft

CARTESIAN_1D = "cartesian1d"
RADIAL_3D = "radial3d"

GEOMETRIES = (CARTESIAN_1D, RADIAL_3D)


@dataclass(frozen=True)
class SpatialGrid:
    geometry: str
    points: int
    box: float
    x: np.ndarray = field(compare=False, repr=False)
    dx: float = field(compare=False, repr=False)
    weight: float = field(compare=False, repr=False)
    k2: np.ndarray = field(compare=False, repr=False)
    potential: np.ndarray = field(compare=False, repr=False)
    density_coef: np.ndarray = field(compare=False, repr=False)

    @property
    def dimension(self) -> int:
        return 1 if self.geometry == CARTESIAN_1D else 3

    def forward(self, values: np.ndarray) -> np.ndarray:
        """Transform to the basis that diagonalizes the kinetic operator."""
        if self.geometry == CARTESIAN_1D:
            return sfft.fft(values)
        return sfft.dst(values, type=1)

    def inverse(self, values: np.ndarray) -> np.ndarray:
        if self.geometry == CARTESIAN_1D:
            return sfft.ifft(values)
        return sfft.idst(values, type=1)

    def resolution_report(self, mu: float) -> list[str]:
        """Check box size and spacing against the TF radius and healing length.

        Returns a list of human-readable violations (empty when the grid is
        adequate): the box should exceed 1.5x the TF radius sqrt(2 mu) and the
        spacing should stay below half the healing length 1/sqrt(2 mu).
        """
        issues = []
        radius = np.sqrt(2.0 * mu)
        healing = 1.0 / np.sqrt(2.0 * mu)
        if self.box < 1.5 * radius:
            issues.append(f"box {self.box} < 1.5 * TF radius {radius:.3g}")
        if self.dx > 0.5 * healing:
            issues.append(f"spacing {self.dx:.3g} > healing length/2 {0.5 * healing:.3g}")
        return issues


def cartesian_1d(points: int = 4096, box: float = 40.0) -> SpatialGrid:
    """Periodic 1D grid, x_j = -L + j*dx with dx = 2L/M (x = 0 is a node)."""
    dx = 2.0 * box / points
    x = -box + dx * np.arange(points)
    k = 2.0 * np.pi * np.fft.fftfreq(points, d=dx)
    return SpatialGrid(
        geometry=CARTESIAN_1D, points=points, box=box, x=x, dx=dx,
        weight=dx, k2=k ** 2, potential=0.5 * x ** 2,
        density_coef=np.ones(points),
    )


def radial_3d(points: int = 2048, box: float = 15.0) -> SpatialGrid:
    """Radial grid for u(r) = r*psi(r); norm weight includes the 4 pi measure."""
    dr = box / points
    r = dr * np.arange(1, points + 1)
    k = np.pi * np.arange(1, points + 1) / (box + dr)
    return SpatialGrid(
        geometry=RADIAL_3D, points=points, box=box, x=r, dx=dr,
        weight=4.0 * np.pi * dr, k2=k ** 2, potential=0.5 * r ** 2,
        density_coef=1.0 / r ** 2,
    )


def make_grid(geometry: str, points: int | None = None, box: float | None = None) -> SpatialGrid:
    if geometry == CARTESIAN_1D:
        return cartesian_1d(points or 4096, box or 40.0)
    if geometry == RADIAL_3D:
        return radial_3d(points or 2048, box or 15.0)
    raise ValueError(f"unknown geometry {geometry!r}")


@dataclass
class WaveFunction:
    """Complex field on a grid; for Radial3D the stored field is u(r) = r psi."""

    grid: SpatialGrid
    values: np.ndarray

    def copy(self) -> "WaveFunction":
        return WaveFunction(self.grid, self.values.copy())

    def norm_sq(self) -> float:
        """Squared norm = particle number for a properly normalized state."""
        return float(self.grid.weight * np.sum(np.abs(self.values) ** 2))

    def inner(self, other: "WaveFunction") -> complex:
        self._check_same_grid(other)
        return complex(self.grid.weight * np.sum(np.conj(self.values) * other.values))

    def density(self) -> np.ndarray:
        """Physical particle density |psi|^2 on the grid nodes."""
        return self.grid.density_coef * np.abs(self.values) ** 2

    def central_density(self) -> float:
        """Density at the node closest to the trap center."""
        if self.grid.geometry == CARTESIAN_1D:
            return float(np.abs(self.values[self.grid.points // 2]) ** 2)
        return float(self.grid.density_coef[0] * np.abs(self.values[0]) ** 2)

    def normalized_to(self, n: float) -> "WaveFunction":
        return WaveFunction(self.grid, self.values * np.sqrt(n / self.norm_sq()))

    def _check_same_grid(self, other: "WaveFunction"):
        if (self.grid.geometry, self.grid.points, self.grid.box) != (
                other.grid.geometry, other.grid.points, other.grid.box):
            raise ValueError("wavefunctions live on different grids")
