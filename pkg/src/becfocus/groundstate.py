"""Imaginary-time relaxation to the 1D and 3D mean-field ground states.

Strang cycle per iteration: half kinetic step, full potential-plus-
nonlinearity step, half kinetic step, then renormalization.  Hard walls use
a Dirichlet sine basis for the kinetic step: the plain Fourier step with an
outside projector does not converge to the hard-wall ground state (its
fixed-point energy moves away from the Dirichlet value as the grid is
refined), while the sine basis represents the walls exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from . import _kernels
from .grids import Grid1D, Grid3D, WaveFunction
from .potentials import (HardBox, LGFull, LGPowerLaw, PotentialSpec, Zero,
                         evaluate_1d, evaluate_2d, tf_profile, tf_radius_1d)

# e^-46 ~ 1e-20: one potential step alone keeps these cells at the noise
# floor, so the solver pins them to zero outright.  This stops the algebraic
# tails of the spectral kinetic kernel from polluting the chemical-potential
# integral where V is astronomically large.
DEAD_REGION_LOG = 46.0


@dataclass
class ItpConfig:
    """Imaginary-time solver settings (dimensionless units)."""

    dtau: float = 1e-4
    max_iters: int = 2_000_000
    convergence_tol: float = 1e-10  # relative mu change per iteration
    # cadence of the chemical-potential residual check; the field is kept for
    # configuration compatibility, but renormalization itself runs every step:
    # letting the norm decay between renormalizations would starve the
    # density-dependent term and bias the fixed point
    renormalize_every: int = 1

    def __post_init__(self):
        if self.dtau <= 0:
            raise ValueError(f"dtau must be > 0, got {self.dtau}")
        if self.convergence_tol <= 0:
            raise ValueError(f"convergence_tol must be > 0, got {self.convergence_tol}")
        if self.renormalize_every < 1:
            raise ValueError("renormalize_every must be >= 1")


@dataclass
class GroundStateReport:
    converged: bool
    iterations: int
    mu: float
    energy: float
    residual: float
    max_energy_increase: float = 0.0


class GroundStateError(RuntimeError):
    def __init__(self, message: str, report: GroundStateReport | None = None):
        super().__init__(message)
        self.report = report


class _FourierKinetic:
    """Periodic spectral kinetic propagator exp(-dtau p^2 / 4) per half step."""

    def __init__(self, grid: Grid1D, dtau: float):
        self.half = np.exp(-0.25 * dtau * grid.p_fft**2)
        self.p2 = grid.p_fft**2

    def half_step(self, values):
        return np.fft.ifft(np.fft.fft(values) * self.half)

    def kinetic_energy(self, values, dz):
        ft = np.fft.fft(values)
        n = values.size
        return float(np.sum(0.5 * self.p2 * (ft.real**2 + ft.imag**2)) * dz / n)


class _DirichletKinetic:
    """Sine-basis kinetic propagator between hard walls snapped to the lattice."""

    def __init__(self, grid: Grid1D, halfwidth: float, dtau: float):
        inside = np.abs(grid.z) < halfwidth - 1e-12 * halfwidth
        idx = np.nonzero(inside)[0]
        if idx.size < 8:
            raise GroundStateError(
                f"hard box of halfwidth {halfwidth} covers fewer than 8 grid points")
        if not np.all(np.diff(idx) == 1):
            raise GroundStateError("hard box interior must be contiguous on the grid")
        self.idx = idx
        m = idx.size
        width = (m + 1) * grid.dz  # walls sit on the first excluded points
        k = np.arange(1, m + 1)
        self.pk = k * math.pi / width
        self.half = np.exp(-0.25 * dtau * self.pk**2)

    def half_step(self, values):
        out = np.zeros_like(values)
        for part, assign in ((values.real, "real"), (values.imag, "imag")):
            c = sfft.dst(part[self.idx], type=1, norm="ortho")
            c *= self.half
            seg = sfft.idst(c, type=1, norm="ortho")
            if assign == "real":
                out.real[self.idx] = seg
            else:
                out.imag[self.idx] = seg
        return out

    def kinetic_energy(self, values, dz):
        e = 0.0
        for part in (values.real, values.imag):
            c = sfft.dst(part[self.idx], type=1, norm="ortho")
            e += float(np.sum(0.5 * self.pk**2 * c**2) * dz)
        return e


def _default_guess(spec: PotentialSpec, g_tilde: float, grid: Grid1D) -> np.ndarray:
    z = grid.z
    if isinstance(spec, (LGPowerLaw, LGFull)) and g_tilde > 0 and spec.l >= 1:
        core = spec if isinstance(spec, LGPowerLaw) else LGPowerLaw(spec.l, spec.w0, spec.v_l)
        return tf_profile(core, g_tilde, grid).wavefunction.values.copy()
    if isinstance(spec, (LGPowerLaw, LGFull)) and spec.l >= 1:
        # harmonic fit at the trap bottom sets the width scale
        omega_fit = math.sqrt(2 * spec.v_l / spec.w0**2)
        sigma = omega_fit ** -0.5 if spec.l == 1 else (spec.w0 * 0.5)
        return np.exp(-(z / sigma) ** 2 / 2).astype(np.complex128)
    if isinstance(spec, HardBox):
        prof = np.where(np.abs(z) < spec.halfwidth,
                        np.cos(math.pi * z / (2 * spec.halfwidth)), 0.0)
        return prof.astype(np.complex128)
    width = (grid.z_max - grid.z_min) / 8
    return np.exp(-(z / width) ** 2 / 2).astype(np.complex128)


def _check_window(spec: PotentialSpec, g_tilde: float, grid: Grid1D):
    if isinstance(spec, (LGPowerLaw, LGFull)) and g_tilde > 0 and spec.l >= 1:
        core = spec if isinstance(spec, LGPowerLaw) else LGPowerLaw(spec.l, spec.w0, spec.v_l)
        r = tf_radius_1d(core, g_tilde)
        if 1.2 * r > min(-grid.z_min, grid.z_max):
            raise GroundStateError(
                f"grid window [{grid.z_min}, {grid.z_max}] does not fit the "
                f"Thomas-Fermi radius {r:.3g} with a 20% margin")
    if isinstance(spec, HardBox) and spec.halfwidth >= min(-grid.z_min, grid.z_max):
        raise GroundStateError("hard box does not fit inside the grid window")


def _stable_dtau(spec: PotentialSpec, g_tilde: float, cfg: ItpConfig) -> float:
    """Cap the imaginary-time step so the potential factor stays contractive.

    When dtau * mu grows past order one the relax-renormalize cycle stops
    contracting and oscillates; the Thomas-Fermi estimate of mu, when
    available, bounds the step at 0.5 / mu.  The configured dtau is an upper
    bound, never raised.
    """
    if isinstance(spec, (LGPowerLaw, LGFull)) and g_tilde > 0 and spec.l >= 1:
        core = spec if isinstance(spec, LGPowerLaw) else LGPowerLaw(spec.l, spec.w0, spec.v_l)
        from .potentials import tf_chemical_potential_1d
        mu_est = tf_chemical_potential_1d(core, g_tilde)
        return min(cfg.dtau, 0.5 / mu_est)
    return cfg.dtau


def solve_ground_1d(spec: PotentialSpec, g_tilde: float, grid: Grid1D,
                    cfg: ItpConfig | None = None,
                    initial: WaveFunction | None = None,
                    ) -> tuple[WaveFunction, GroundStateReport]:
    """Relax to the 1D ground state; returns a real nonnegative field.

    The chemical potential follows the density functional
    mu = int phi* (T + V + g |phi|^2) phi dz and its relative change per
    iteration is the convergence residual.
    """
    cfg = cfg or ItpConfig()
    dtau_eff = _stable_dtau(spec, g_tilde, cfg)
    if dtau_eff != cfg.dtau:
        cfg = ItpConfig(dtau=dtau_eff, max_iters=cfg.max_iters,
                        convergence_tol=cfg.convergence_tol,
                        renormalize_every=cfg.renormalize_every)
    _check_window(spec, g_tilde, grid)
    if isinstance(spec, HardBox):
        kin = _DirichletKinetic(grid, spec.halfwidth, cfg.dtau)
        v = np.zeros(grid.n_points)
        dead = np.abs(grid.z) >= spec.halfwidth
    else:
        kin = _FourierKinetic(grid, cfg.dtau)
        v = evaluate_1d(spec, grid.z)
        dead = cfg.dtau * v > DEAD_REGION_LOG
    decay = np.exp(-cfg.dtau * np.where(dead, np.inf, v))
    dz = grid.dz

    phi = (initial.values.copy() if initial is not None
           else _default_guess(spec, g_tilde, grid))
    phi[dead] = 0.0
    nrm = math.sqrt(float(np.sum(phi.real**2 + phi.imag**2)) * dz)
    if nrm == 0:
        raise GroundStateError("initial guess vanishes inside the trap")
    phi = phi.astype(np.complex128) / nrm

    mu_old = math.inf
    e_old = math.inf
    max_e_increase = 0.0
    mu = math.nan
    energy = math.nan
    residual = math.inf
    check = cfg.renormalize_every
    stall_window = 20_000
    stall_residual = math.inf

    for it in range(1, cfg.max_iters + 1):
        phi = kin.half_step(phi)
        dens = phi.real**2 + phi.imag**2
        phi *= decay * np.exp(-cfg.dtau * g_tilde * dens)
        phi = kin.half_step(phi)
        phi[dead] = 0.0
        nrm = math.sqrt(np.vdot(phi, phi).real * dz)
        if nrm == 0 or not math.isfinite(nrm):
            raise GroundStateError(
                f"imaginary-time iteration diverged at step {it} (norm {nrm})",
                GroundStateReport(False, it, mu, energy, residual, max_e_increase))
        phi /= nrm
        if it % check:
            continue
        _kernels.flush_subnormals(phi)
        ekin = kin.kinetic_energy(phi, dz)
        dens = phi.real**2 + phi.imag**2
        epot = float(np.sum(v * dens) * dz)
        eint = g_tilde * float(np.sum(dens**2) * dz)
        mu = ekin + epot + eint
        energy = ekin + epot + 0.5 * eint
        if not math.isfinite(mu):
            raise GroundStateError(
                f"chemical potential became non-finite at step {it}",
                GroundStateReport(False, it, mu, energy, residual, max_e_increase))
        if energy > e_old:
            max_e_increase = max(max_e_increase, energy - e_old)
        e_old = energy
        residual = abs(mu - mu_old) / abs(mu) / check
        mu_old = mu
        if residual <= cfg.convergence_tol:
            phase = np.exp(-1j * np.angle(phi[np.argmax(np.abs(phi))]))
            phi = phi * phase
            out = WaveFunction(grid, phi)
            report = GroundStateReport(True, it, mu, energy, residual, max_e_increase)
            return out, report
        if it % stall_window < check:
            # plateau far above tolerance: oscillating, not relaxing
            if residual > max(1e4 * cfg.convergence_tol, 1e-8) \
                    and residual > 0.5 * stall_residual and it > stall_window:
                raise GroundStateError(
                    f"relaxation stalled at residual {residual:.3e} after {it} "
                    f"iterations; reduce dtau (currently {cfg.dtau:g})",
                    GroundStateReport(False, it, mu, energy, residual, max_e_increase))
            stall_residual = residual

    raise GroundStateError(
        f"no convergence within {cfg.max_iters} iterations "
        f"(residual {residual:.3e} > {cfg.convergence_tol:.3e})",
        GroundStateReport(False, cfg.max_iters, mu, energy, residual, max_e_increase))


def _default_guess_3d(v_perp: PotentialSpec, v_z: PotentialSpec, g3d_n: float,
                      grid3: Grid3D) -> np.ndarray:
    """Separable product guess: transverse oscillator Gaussian times the 1D guess."""
    from .potentials import Harmonic2D
    if isinstance(v_perp, Harmonic2D):
        lx = v_perp.omega_x ** -0.5
        ly = v_perp.omega_y ** -0.5
    else:
        lx = (grid3.x.z_max - grid3.x.z_min) / 8
        ly = (grid3.y.z_max - grid3.y.z_min) / 8
    trans = np.exp(-grid3.x.z[:, None] ** 2 / (2 * lx**2)
                   - grid3.y.z[None, :] ** 2 / (2 * ly**2))
    axial = np.abs(_default_guess(v_z, 0.0, grid3.z))
    return (trans[:, :, None] * axial[None, None, :]).astype(np.complex128)


def solve_ground_3d(v_perp: PotentialSpec, v_z: PotentialSpec, g3d_n: float,
                    grid3: Grid3D, cfg: ItpConfig | None = None,
                    initial: WaveFunction | None = None,
                    memory_cap_bytes: int = 4 << 30,
                    ) -> tuple[WaveFunction, GroundStateReport]:
    """Relax to the 3D ground state with the split-step cycle over the 3D Laplacian.

    `g3d_n` is the dimensionless product of the contact coupling and the atom
    number (the nonlinear prefactor of the density).
    """
    cfg = cfg or ItpConfig()
    nx, ny, nz = grid3.shape
    need = 6 * nx * ny * nz * 16
    if need > memory_cap_bytes:
        raise GroundStateError(
            f"grid {grid3.shape} needs ~{need / 2**30:.1f} GiB, over the "
            f"{memory_cap_bytes / 2**30:.1f} GiB cap")

    x = grid3.x.z[:, None, None]
    y = grid3.y.z[None, :, None]
    v = (evaluate_2d(v_perp, x, y) + evaluate_1d(v_z, grid3.z.z)[None, None, :]
         ) * np.ones(grid3.shape)
    hard = isinstance(v_z, HardBox)
    if hard:
        v = np.where(np.isinf(v), 0.0, v)
        dead = (np.abs(grid3.z.z)[None, None, :] >= v_z.halfwidth) | (cfg.dtau * v > DEAD_REGION_LOG)
    else:
        dead = cfg.dtau * v > DEAD_REGION_LOG
    dead = dead & np.ones(grid3.shape, dtype=bool)
    decay = np.ascontiguousarray(np.where(dead, 0.0, np.exp(-cfg.dtau * v)))
    p2 = (grid3.x.p_fft[:, None, None]**2 + grid3.y.p_fft[None, :, None]**2
          + grid3.z.p_fft[None, None, :]**2)
    kin_half = np.ascontiguousarray(np.exp(-0.25 * cfg.dtau * p2))
    dv = grid3.dv
    ntot = nx * ny * nz

    if initial is None:
        psi = _default_guess_3d(v_perp, v_z, g3d_n, grid3)
    else:
        psi = initial.values
    psi = np.ascontiguousarray(psi.astype(np.complex128))
    psi[dead] = 0.0
    psi /= math.sqrt(float(np.sum(psi.real**2 + psi.imag**2)) * dv)

    mu_old = math.inf
    e_old = math.inf
    max_e_increase = 0.0
    mu = math.nan
    energy = math.nan
    residual = math.inf
    check = cfg.renormalize_every

    for it in range(1, cfg.max_iters + 1):
        ft = sfft.fftn(psi, workers=-1)
        _kernels.multiply_inplace(ft, kin_half)
        psi = np.ascontiguousarray(sfft.ifftn(ft, workers=-1, overwrite_x=True))
        _kernels.decay_nonlinear(psi, decay, g3d_n, cfg.dtau)
        ft = sfft.fftn(psi, workers=-1)
        _kernels.multiply_inplace(ft, kin_half)
        psi = np.ascontiguousarray(sfft.ifftn(ft, workers=-1, overwrite_x=True))
        psi[dead] = 0.0
        nrm2 = np.vdot(psi, psi).real * dv
        if nrm2 == 0 or not math.isfinite(nrm2):
            raise GroundStateError(
                f"3D imaginary-time iteration diverged at step {it}",
                GroundStateReport(False, it, mu, energy, residual, max_e_increase))
        psi *= 1.0 / math.sqrt(nrm2)
        if it % check:
            continue
        ft = sfft.fftn(psi, workers=-1)
        ekin = float(np.sum(0.5 * p2 * (ft.real**2 + ft.imag**2)) * dv / ntot)
        dens = psi.real**2 + psi.imag**2
        epot = float(np.sum(v * dens) * dv)
        eint = g3d_n * float(np.sum(dens**2) * dv)
        mu = ekin + epot + eint
        energy = ekin + epot + 0.5 * eint
        if not math.isfinite(mu):
            raise GroundStateError(
                f"3D chemical potential became non-finite at step {it}",
                GroundStateReport(False, it, mu, energy, residual, max_e_increase))
        if energy > e_old:
            max_e_increase = max(max_e_increase, energy - e_old)
        e_old = energy
        residual = abs(mu - mu_old) / abs(mu) / check
        mu_old = mu
        if residual <= cfg.convergence_tol:
            phase = np.exp(-1j * np.angle(psi.flat[int(np.argmax(np.abs(psi)))]))
            out = WaveFunction(grid3, psi * phase)
            report = GroundStateReport(True, it, mu, energy, residual, max_e_increase)
            return out, report

    raise GroundStateError(
        f"no 3D convergence within {cfg.max_iters} iterations "
        f"(residual {residual:.3e})",
        GroundStateReport(False, cfg.max_iters, mu, energy, residual, max_e_increase))
