"""Classical phase-space trajectories over the time-dependent mean-field potential.

The effective Hamiltonian is H(Z, P; t) = P^2/2 + g n(Z, t) with n the
simulated density; trajectories visualize how the interaction bends the
otherwise straight free-motion characteristics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .dynamics import DensityTrace
from .grids import Grid1D


@dataclass
class Trajectory:
    times: np.ndarray
    z: np.ndarray
    p: np.ndarray
    exited: bool  # True when the trajectory left the grid window early


class DensityMovie:
    """Time-indexed density frames with spectral z-derivatives on demand.

    Frames are interpolated cubically in z and linearly in t; the spatial
    derivative of each frame is computed spectrally once and then splined.
    """

    def __init__(self, grid: Grid1D, times: np.ndarray, frames: np.ndarray):
        if frames.shape != (times.size, grid.n_points):
            raise ValueError(f"frame array {frames.shape} does not match "
                             f"({times.size}, {grid.n_points})")
        if times.size < 2:
            raise ValueError("a movie needs at least two frames")
        self.grid = grid
        self.times = times
        self.frames = frames
        self._grad_splines: dict[int, CubicSpline] = {}
        self._dens_splines: dict[int, CubicSpline] = {}

    @classmethod
    def from_trace(cls, grid: Grid1D, trace: DensityTrace) -> "DensityMovie":
        if trace.snapshots is None:
            raise ValueError("trace carries no snapshots; rerun with keep_snapshots")
        return cls(grid, trace.snapshot_times, trace.snapshots)

    @property
    def t_max(self) -> float:
        return float(self.times[-1])

    def _gradient_spline(self, k: int) -> CubicSpline:
        if k not in self._grad_splines:
            ft = np.fft.fft(self.frames[k])
            grad = np.fft.ifft(1j * self.grid.p_fft * ft).real
            self._grad_splines[k] = CubicSpline(self.grid.z, grad)
        return self._grad_splines[k]

    def _density_spline(self, k: int) -> CubicSpline:
        if k not in self._dens_splines:
            self._dens_splines[k] = CubicSpline(self.grid.z, self.frames[k])
        return self._dens_splines[k]

    def _bracket(self, t: float) -> tuple[int, int, float]:
        k = int(np.searchsorted(self.times, t, side="right")) - 1
        k = min(max(k, 0), self.times.size - 2)
        w = (t - self.times[k]) / (self.times[k + 1] - self.times[k])
        return k, k + 1, min(max(w, 0.0), 1.0)

    def gradient(self, z: float, t: float) -> float:
        k0, k1, w = self._bracket(t)
        return float((1 - w) * self._gradient_spline(k0)(z)
                     + w * self._gradient_spline(k1)(z))

    def density(self, z: float, t: float) -> float:
        k0, k1, w = self._bracket(t)
        return float((1 - w) * self._density_spline(k0)(z)
                     + w * self._density_spline(k1)(z))


def integrate_trajectory(start: tuple[float, float], movie: DensityMovie,
                         g_tilde: float, t_end: float, dt: float = 1e-4,
                         store_every: int = 10) -> Trajectory:
    """Classical Runge-Kutta integration of dZ/dt = P, dP/dt = -g dn/dz.

    Stops early (flagging `exited`) if the trajectory leaves the grid window.
    """
    if t_end > movie.t_max + 1e-12:
        raise ValueError(f"movie covers t <= {movie.t_max}, requested {t_end}")
    z0, p0 = float(start[0]), float(start[1])
    lo, hi = movie.grid.z_min, movie.grid.z_max
    nsteps = max(1, int(round(t_end / dt)))

    def force(z, t):
        return -g_tilde * movie.gradient(z, t)

    ts = [0.0]
    zs = [z0]
    ps = [p0]
    z, p = z0, p0
    exited = False
    for s in range(1, nsteps + 1):
        t = (s - 1) * dt
        k1z, k1p = p, force(z, t)
        k2z, k2p = p + 0.5 * dt * k1p, force(z + 0.5 * dt * k1z, t + 0.5 * dt)
        k3z, k3p = p + 0.5 * dt * k2p, force(z + 0.5 * dt * k2z, t + 0.5 * dt)
        k4z, k4p = p + dt * k3p, force(z + dt * k3z, t + dt)
        z = z + dt / 6 * (k1z + 2 * k2z + 2 * k3z + k4z)
        p = p + dt / 6 * (k1p + 2 * k2p + 2 * k3p + k4p)
        if not (lo <= z <= hi):
            exited = True
            break
        if s % store_every == 0 or s == nsteps:
            ts.append(s * dt)
            zs.append(z)
            ps.append(p)

    return Trajectory(times=np.asarray(ts), z=np.asarray(zs), p=np.asarray(ps),
                      exited=exited)


def hamiltonian(traj: Trajectory, movie: DensityMovie, g_tilde: float,
                frozen_at: float | None = None) -> np.ndarray:
    """H = P^2/2 + g n(Z, t) along the trajectory; `frozen_at` pins the frame time."""
    out = np.empty(traj.times.size)
    for i, (t, z, p) in enumerate(zip(traj.times, traj.z, traj.p)):
        tt = frozen_at if frozen_at is not None else t
        out[i] = 0.5 * p * p + g_tilde * movie.density(z, tt)
    return out
