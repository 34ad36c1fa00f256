"""Uniform periodic lattices with conjugate momentum lattices and spectral transforms.

The transform pair uses the unitary continuum convention (1/sqrt(2 pi) with
hbar = 1), so a normalized field stays normalized in either representation.
Momentum-space output is always in monotonically increasing p order; the raw
FFT ordering never leaves this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class GridError(ValueError):
    """Invalid lattice configuration."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid1D:
    """Uniform lattice on [z_min, z_max) with periodic boundary conditions."""

    n_points: int
    z_min: float
    z_max: float

    def __post_init__(self):
        if not _is_power_of_two(self.n_points) or self.n_points < 64:
            raise GridError(
                f"n_points must be a power of two >= 64, got {self.n_points}")
        if not self.z_max > self.z_min:
            raise GridError(
                f"degenerate interval [{self.z_min}, {self.z_max}]")

    @property
    def dz(self) -> float:
        return (self.z_max - self.z_min) / self.n_points

    @property
    def dp(self) -> float:
        return 2 * math.pi / (self.n_points * self.dz)

    @cached_property
    def z(self) -> np.ndarray:
        return self.z_min + self.dz * np.arange(self.n_points)

    @cached_property
    def p_fft(self) -> np.ndarray:
        """Momentum lattice in FFT ordering; spans [-pi/dz, pi/dz)."""
        return 2 * math.pi * np.fft.fftfreq(self.n_points, d=self.dz)

    @cached_property
    def p_sorted(self) -> np.ndarray:
        return np.fft.fftshift(self.p_fft)

    def momentum_grid(self) -> "Grid1D":
        """The conjugate lattice, as a Grid1D over increasing p."""
        half = math.pi / self.dz
        return Grid1D(self.n_points, -half, half)


def make_grid_1d(n_points: int, z_min: float, z_max: float) -> Grid1D:
    return Grid1D(n_points=n_points, z_min=z_min, z_max=z_max)


@dataclass(frozen=True)
class Grid3D:
    """Independent per-axis lattices; axes ordered (x, y, z)."""

    x: Grid1D
    y: Grid1D
    z: Grid1D

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.x.n_points, self.y.n_points, self.z.n_points)

    @property
    def dv(self) -> float:
        return self.x.dz * self.y.dz * self.z.dz


@dataclass
class WaveFunction:
    """Complex field on a grid; `space` records the active representation."""

    grid: Grid1D | Grid3D
    values: np.ndarray
    space: str = "position"  # "position" | "momentum"

    def __post_init__(self):
        expected = self.grid.shape if isinstance(self.grid, Grid3D) else (self.grid.n_points,)
        if self.values.shape != expected:
            raise GridError(
                f"field shape {self.values.shape} does not match grid {expected}")
        if not np.iscomplexobj(self.values):
            self.values = self.values.astype(np.complex128)

    @property
    def ndim(self) -> int:
        return 3 if isinstance(self.grid, Grid3D) else 1

    @property
    def measure(self) -> float:
        return self.grid.dv if isinstance(self.grid, Grid3D) else self.grid.dz

    def copy(self) -> "WaveFunction":
        return WaveFunction(self.grid, self.values.copy(), self.space)


def norm(psi: WaveFunction) -> float:
    """L2 norm by the rectangle rule (exact quadrature on a periodic lattice)."""
    v = psi.values
    return math.sqrt(float(np.sum(v.real**2 + v.imag**2)) * psi.measure)


def normalize(psi: WaveFunction) -> WaveFunction:
    """Rescale to unit norm; rejects the zero field."""
    n = norm(psi)
    if n == 0.0 or not math.isfinite(n):
        raise GridError(f"cannot normalize field with norm {n}")
    return WaveFunction(psi.grid, psi.values / n, psi.space)


def overlap(psi1: WaveFunction, psi2: WaveFunction) -> complex:
    """Complex inner product <psi1|psi2> on a shared grid."""
    if psi1.grid != psi2.grid:
        raise GridError("overlap requires both fields on the same grid")
    return complex(np.sum(np.conj(psi1.values) * psi2.values) * psi1.measure)


def probability_density(psi: WaveFunction) -> np.ndarray:
    v = psi.values
    return v.real**2 + v.imag**2


def to_momentum(psi: WaveFunction) -> WaveFunction:
    """Unitary transform to momentum space, output in increasing p order."""
    if psi.ndim != 1:
        raise GridError("momentum transform implemented for 1D fields")
    if psi.space != "position":
        raise GridError("field is already in momentum space")
    g: Grid1D = psi.grid
    raw = np.fft.fft(psi.values)
    raw *= g.dz / math.sqrt(2 * math.pi) * np.exp(-1j * g.p_fft * g.z_min)
    return WaveFunction(g.momentum_grid(), np.fft.fftshift(raw), space="momentum")


def to_position(phi_p: WaveFunction, grid: Grid1D | None = None) -> WaveFunction:
    """Inverse of `to_momentum`; `grid` restores the original z offset.

    Without `grid` the window is assumed centered on z = 0.
    """
    if phi_p.space != "momentum":
        raise GridError("field is not in momentum space")
    pg: Grid1D = phi_p.grid
    n = pg.n_points
    dz = 2 * math.pi / (n * pg.dz)  # pg.dz is the momentum spacing
    if grid is None:
        grid = Grid1D(n, -n * dz / 2, n * dz / 2)
    if grid.n_points != n or not math.isclose(grid.dz, dz, rel_tol=1e-12):
        raise GridError("target grid is not conjugate to the momentum lattice")
    raw = np.fft.ifftshift(phi_p.values)
    raw = raw * np.exp(1j * grid.p_fft * grid.z_min) * math.sqrt(2 * math.pi) / grid.dz
    return WaveFunction(grid, np.fft.ifft(raw), space="position")


def resample(psi: WaveFunction, n_points: int) -> WaveFunction:
    """Spectral resampling of a periodic 1D field to a new point count."""
    if psi.ndim != 1 or psi.space != "position":
        raise GridError("resampling implemented for 1D position-space fields")
    g: Grid1D = psi.grid
    n = g.n_points
    ft = np.fft.fft(psi.values)
    if n_points >= n:
        out = np.zeros(n_points, dtype=np.complex128)
        out[: n // 2] = ft[: n // 2]
        out[-(n // 2):] = ft[-(n // 2):]
    else:
        out = np.concatenate([ft[: n_points // 2], ft[-(n_points // 2):]])
    out *= n_points / n
    new_grid = Grid1D(n_points, g.z_min, g.z_max)
    return normalize(WaveFunction(new_grid, np.fft.ifft(out)))
