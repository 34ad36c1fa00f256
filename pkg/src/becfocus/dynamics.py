"""Real-time split-step propagation of the 1D and 3D mean-field equations.

The interaction quench is instantaneous at t = 0: the initial state is a
ground state prepared at one coupling, the evolution runs at another, with
the longitudinal trap switched off.  Strang splitting (potential half step,
exact kinetic step in momentum space, potential half step) with interior
half steps fused; pure phase steps leave |phi|^2 invariant, so densities
read mid-loop are exact step-boundary values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from . import _kernels
from .grids import Grid1D, Grid3D, WaveFunction
from .potentials import (HardBox, PotentialSpec, Zero, evaluate_1d,
                         evaluate_2d)
from .units import PhysicalParams, Regime, UnitSystem, effective_coupling_1d


class EvolutionError(RuntimeError):
    """Numerical failure during propagation (NaN, overflow)."""


class WindowTooSmallError(EvolutionError):
    """Density reached the grid boundary above the configured threshold."""


@dataclass
class EvolutionConfig:
    """Real-time solver settings (dimensionless units)."""

    dt: float = 1e-4  # negative values propagate backward in time
    t_end: float = 0.4
    store_every: int = 2
    snapshot_every: int | None = None  # defaults to store_every when snapshots kept
    boundary_density_max: float = 1e-6
    monitor_boundary: bool = True

    def __post_init__(self):
        if self.dt == 0:
            raise ValueError("dt must be nonzero")
        if self.t_end <= 0:
            raise ValueError(f"t_end must be > 0, got {self.t_end}")
        if self.store_every < 1:
            raise ValueError("store_every must be >= 1")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.t_end / abs(self.dt))))


@dataclass
class DensityTrace:
    """On-axis density history d(t) = n(0, t) / max_z n(z, 0)."""

    times: np.ndarray
    on_axis: np.ndarray
    initial_peak: float
    snapshot_times: np.ndarray | None = None
    snapshots: np.ndarray | None = None  # rows: time, cols: z (densities)


@dataclass(frozen=True)
class QuenchProtocol:
    """Instantaneous coupling switch at t = 0 with the trap turned off.

    The transverse profile entering the effective 1D coupling is frozen at
    its pre-quench shape, so the post-quench coupling scales linearly with
    the final scattering length: g_f = g_i * a_f / a_i.
    """

    scattering_length_initial: float  # m
    scattering_length_final: float  # m
    regime: Regime

    def __post_init__(self):
        if self.scattering_length_final < 0:
            raise ValueError("final scattering length must be >= 0")
        if self.scattering_length_initial <= 0:
            raise ValueError("initial scattering length must be > 0")

    def couplings(self, params: PhysicalParams, units: UnitSystem) -> tuple[float, float]:
        """Dimensionless (g_initial, g_final)."""
        if not math.isclose(params.scattering_length, self.scattering_length_initial,
                            rel_tol=1e-12):
            raise ValueError("quench initial scattering length disagrees with params")
        g_i = units.coupling_1d_from_si(effective_coupling_1d(params, self.regime))
        g_f = g_i * self.scattering_length_final / self.scattering_length_initial
        return g_i, g_f


def _dirichlet_factors(grid: Grid1D, halfwidth: float, dt: float):
    inside = np.abs(grid.z) < halfwidth - 1e-12 * halfwidth
    idx = np.nonzero(inside)[0]
    width = (idx.size + 1) * grid.dz
    pk = np.arange(1, idx.size + 1) * math.pi / width
    return idx, np.exp(-1j * dt * 0.5 * pk**2)


def _dirichlet_step(phi, idx, factor):
    out = np.zeros_like(phi)
    c = sfft.dst(phi.real[idx], type=1, norm="ortho") + 1j * sfft.dst(phi.imag[idx], type=1, norm="ortho")
    c *= factor
    out[idx] = sfft.idst(c.real, type=1, norm="ortho") + 1j * sfft.idst(c.imag, type=1, norm="ortho")
    return out


def evolve_1d(phi0: WaveFunction, g_tilde_f: float, v_after: PotentialSpec,
              cfg: EvolutionConfig | None = None, keep_snapshots: bool = False,
              ) -> tuple[DensityTrace, WaveFunction]:
    """Propagate the 1D field; returns the on-axis trace and the final state."""
    cfg = cfg or EvolutionConfig()
    grid: Grid1D = phi0.grid
    n = grid.n_points
    dz = grid.dz
    i0 = int(np.argmin(np.abs(grid.z)))
    dt = cfg.dt
    nsteps = cfg.n_steps

    hard = isinstance(v_after, HardBox)
    if hard:
        v = np.zeros(n)
        kin_idx, kin_factor = _dirichlet_factors(grid, v_after.halfwidth, dt)
    else:
        v = evaluate_1d(v_after, grid.z)
        kin_factor = np.exp(-1j * dt * 0.5 * grid.p_fft**2)

    t_unit = abs(dt)
    phi = phi0.values.astype(np.complex128).copy()
    dens = phi.real**2 + phi.imag**2
    d0 = float(dens.max())
    if d0 == 0:
        raise EvolutionError("initial state is identically zero")

    snap_every = cfg.snapshot_every or cfg.store_every
    times = [0.0]
    on_axis = [float(dens[i0]) / d0]
    snaps = [dens.copy()] if keep_snapshots else None
    snap_times = [0.0] if keep_snapshots else None

    def half_v(state, dns, scale):
        state *= np.exp(-1j * scale * dt * (v + g_tilde_f * dns))

    half_v(phi, dens, 0.5)
    for s in range(1, nsteps + 1):
        if hard:
            phi = _dirichlet_step(phi, kin_idx, kin_factor)
        else:
            phi = np.fft.ifft(np.fft.fft(phi) * kin_factor)
        dens = phi.real**2 + phi.imag**2
        half_v(phi, dens, 1.0 if s < nsteps else 0.5)
        if s % 256 == 0:
            _kernels.flush_subnormals(phi)
        if s % cfg.store_every == 0 or s == nsteps:
            val = float(dens[i0]) / d0
            if not math.isfinite(val):
                raise EvolutionError(f"on-axis density became non-finite at step {s}")
            if cfg.monitor_boundary:
                edge = max(float(dens[:5].max()), float(dens[-5:].max()))
                if edge > cfg.boundary_density_max:
                    raise WindowTooSmallError(
                        f"boundary density {edge:.3e} exceeded "
                        f"{cfg.boundary_density_max:.1e} at t = {s * t_unit:.4f}; "
                        "widen the grid window")
            if times[-1] != s * t_unit:
                times.append(s * t_unit)
                on_axis.append(val)
        if keep_snapshots and (s % snap_every == 0 or s == nsteps):
            if snap_times[-1] != s * t_unit:
                snap_times.append(s * t_unit)
                snaps.append(dens.copy())

    trace = DensityTrace(
        times=np.asarray(times), on_axis=np.asarray(on_axis), initial_peak=d0,
        snapshot_times=np.asarray(snap_times) if keep_snapshots else None,
        snapshots=np.asarray(snaps) if keep_snapshots else None)
    return trace, WaveFunction(grid, phi)


def evolve_3d(psi0: WaveFunction, g3d_n_f: float, v_perp_after: PotentialSpec,
              cfg: EvolutionConfig | None = None, keep_snapshots: bool = False,
              ) -> tuple[DensityTrace, WaveFunction]:
    """Propagate the 3D field; the trace follows the transversally integrated density.

    The ordinate is P(0, t) / max_z P(z, 0) with P(z, t) the density
    integrated over the transverse plane, read at the grid plane nearest
    z = 0.
    """
    cfg = cfg or EvolutionConfig()
    grid3: Grid3D = psi0.grid
    nx, ny, nz = grid3.shape
    x = grid3.x.z[:, None, None]
    y = grid3.y.z[None, :, None]
    v = np.ascontiguousarray(
        evaluate_2d(v_perp_after, x, y) * np.ones(grid3.shape))
    p2 = (grid3.x.p_fft[:, None, None]**2 + grid3.y.p_fft[None, :, None]**2
          + grid3.z.p_fft[None, None, :]**2)
    kin_factor = np.ascontiguousarray(np.exp(-1j * cfg.dt * 0.5 * p2))
    da = grid3.x.dz * grid3.y.dz
    dt = cfg.dt
    nsteps = cfg.n_steps
    iz0 = int(np.argmin(np.abs(grid3.z.z)))

    t_unit = abs(dt)
    psi = np.ascontiguousarray(psi0.values.astype(np.complex128))
    dens = psi.real**2 + psi.imag**2
    p_axial = dens.sum(axis=(0, 1)) * da
    p0 = float(p_axial.max())
    times = [0.0]
    on_axis = [float(p_axial[iz0]) / p0]
    snaps = [p_axial.copy()] if keep_snapshots else None
    snap_times = [0.0] if keep_snapshots else None
    snap_every = cfg.snapshot_every or cfg.store_every

    _kernels.rotate_nonlinear(psi, v, g3d_n_f, 0.5 * dt)
    for s in range(1, nsteps + 1):
        ft = sfft.fftn(psi, workers=-1)
        _kernels.multiply_inplace(ft, kin_factor)
        psi = np.ascontiguousarray(sfft.ifftn(ft, workers=-1, overwrite_x=True))
        _kernels.rotate_nonlinear(psi, v, g3d_n_f, dt if s < nsteps else 0.5 * dt)
        if s % cfg.store_every == 0 or s == nsteps:
            dens = psi.real**2 + psi.imag**2
            p_axial = dens.sum(axis=(0, 1)) * da
            val = float(p_axial[iz0]) / p0
            if not math.isfinite(val):
                raise EvolutionError(f"axial density became non-finite at step {s}")
            if cfg.monitor_boundary:
                edge = float(max(p_axial[:5].max(), p_axial[-5:].max()))
                if edge > cfg.boundary_density_max:
                    raise WindowTooSmallError(
                        f"axial boundary density {edge:.3e} exceeded threshold "
                        f"at t = {s * t_unit:.4f}")
            if times[-1] != s * t_unit:
                times.append(s * t_unit)
                on_axis.append(val)
            if keep_snapshots and (s % snap_every == 0 or s == nsteps):
                if snap_times[-1] != s * t_unit:
                    snap_times.append(s * t_unit)
                    snaps.append(p_axial.copy())

    trace = DensityTrace(
        times=np.asarray(times), on_axis=np.asarray(on_axis), initial_peak=p0,
        snapshot_times=np.asarray(snap_times) if keep_snapshots else None,
        snapshots=np.asarray(snaps) if keep_snapshots else None)
    return trace, WaveFunction(grid3, psi)


def phase_imprint(phi0: WaveFunction, g_tilde: float, t: float) -> WaveFunction:
    """Short-time analytic solution: the initial density imprints a phase.

    phi(z, t) = phi(z, 0) exp(-i g t |phi(z, 0)|^2); valid for times well
    short of the focal time, where kinetic motion is negligible.
    """
    dens = phi0.values.real**2 + phi0.values.imag**2
    return WaveFunction(phi0.grid, phi0.values * np.exp(-1j * g_tilde * t * dens),
                        phi0.space)
