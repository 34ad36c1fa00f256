"""Reduced-scale 3D solver pathway validating the effective 1D description.

Runs the full 3D ground state and quench, extracts the transversally
integrated axial density, and compares it against the 1D model driven by
each of the two closed-form transverse couplings.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .dynamics import DensityTrace, EvolutionConfig, evolve_1d, evolve_3d
from .grids import Grid1D, Grid3D, WaveFunction, normalize, resample
from .groundstate import GroundStateReport, ItpConfig, solve_ground_1d, solve_ground_3d
from .metrics import FocusReport, focusing_factor
from .potentials import Harmonic2D, LGPowerLaw, Zero, lg_power_law
from .units import (PhysicalParams, Regime, UnitSystem, contact_coupling,
                    effective_coupling_1d, tf_chemical_potential)


@dataclass
class ComparisonReport:
    """RMS distances of the two 1D variants from the 3D axial trace."""

    rms_tf: float
    rms_weak: float
    focus_3d: FocusReport
    focus_1d_tf: FocusReport
    focus_1d_weak: FocusReport
    times: np.ndarray
    trace_3d: np.ndarray
    trace_1d_tf: np.ndarray
    trace_1d_weak: np.ndarray
    mu_3d: float
    metadata: dict = field(default_factory=dict)
    ground_3d: WaveFunction | None = None  # reusable across final couplings


def default_grid3(params: PhysicalParams, z_grid: Grid1D,
                  n_transverse: int = 64, n_axial: int = 512,
                  transverse_halfwidth_units: float = 8.0) -> Grid3D:
    """Transverse window of +-8 oscillator lengths, axial window matching `z_grid`."""
    units = UnitSystem.from_params(params)
    half = transverse_halfwidth_units * units.length_from_si(params.transverse_length)
    t_axis = Grid1D(n_transverse, -half, half)
    return Grid3D(x=t_axis, y=t_axis,
                  z=Grid1D(n_axial, z_grid.z_min, z_grid.z_max))


def transverse_tf_state(params: PhysicalParams, grid3: Grid3D) -> np.ndarray:
    """Normalized Thomas-Fermi transverse profile on the (x, y) plane."""
    units = UnitSystem.from_params(params)
    mu = units.energy_from_si(tf_chemical_potential(params))
    wx = params.omega_x / params.omega_z
    wy = params.omega_y / params.omega_z
    v = 0.5 * (wx**2 * grid3.x.z[:, None] ** 2 + wy**2 * grid3.y.z[None, :] ** 2)
    prof = np.sqrt(np.maximum(mu - v, 0.0))
    prof /= math.sqrt(float((prof**2).sum()) * grid3.x.dz * grid3.y.dz)
    return prof


def _resample_trace(times: np.ndarray, trace: DensityTrace) -> np.ndarray:
    return np.interp(times, trace.times, trace.on_axis)


def validate_quasi1d(params: PhysicalParams, a_s_final: float,
                     grid3: Grid3D, grid1: Grid1D,
                     l: int = 10,
                     itp_1d: ItpConfig | None = None,
                     itp_3d: ItpConfig | None = None,
                     evolution_1d: EvolutionConfig | None = None,
                     evolution_3d: EvolutionConfig | None = None,
                     ground_3d: WaveFunction | None = None,
                     ) -> ComparisonReport:
    """Compare the 3D quench against the two 1D reductions for one final a_s.

    `ground_3d` lets callers reuse one relaxed 3D state across several
    quenches (the ground state does not depend on the final coupling).
    """
    if not (grid3.z.z_min == grid1.z_min and grid3.z.z_max == grid1.z_max):
        raise ValueError("axial windows of the 3D and 1D grids must agree")
    units = UnitSystem.from_params(params)
    itp_1d = itp_1d or ItpConfig()
    itp_3d = itp_3d or ItpConfig(dtau=1e-5, convergence_tol=1e-9,
                                 renormalize_every=25, max_iters=50_000)
    evolution_1d = evolution_1d or EvolutionConfig(
        dt=1e-4, t_end=0.25, store_every=2, monitor_boundary=False)
    evolution_3d = evolution_3d or EvolutionConfig(
        dt=4e-5, t_end=evolution_1d.t_end, store_every=5, monitor_boundary=False)

    trap = lg_power_law(params, l, units)
    ratio_f = a_s_final / params.scattering_length

    # 1D pathway, once per transverse-coupling variant
    traces_1d: dict[Regime, DensityTrace] = {}
    t0 = time.perf_counter()
    for regime in (Regime.WEAKLY_INTERACTING, Regime.NON_INTERACTING):
        with warnings.catch_warnings():
            # both couplings are run on purpose here, regardless of advisability
            warnings.simplefilter("ignore", UserWarning)
            g_i = units.coupling_1d_from_si(effective_coupling_1d(params, regime))
        ground, _ = solve_ground_1d(trap, g_i, grid1, itp_1d)
        trace, _ = evolve_1d(ground, g_i * ratio_f, Zero(), evolution_1d)
        traces_1d[regime] = trace
    t_1d = time.perf_counter() - t0

    # 3D pathway
    wx = params.omega_x / params.omega_z
    wy = params.omega_y / params.omega_z
    v_perp = Harmonic2D(wx, wy)
    u = units.coupling_3d_from_si(contact_coupling(params) * params.atom_count)
    t0 = time.perf_counter()
    mu_3d = math.nan
    if ground_3d is None:
        g_tf = units.coupling_1d_from_si(
            effective_coupling_1d(params, Regime.WEAKLY_INTERACTING))
        axial, _ = solve_ground_1d(trap, g_tf, grid1, itp_1d)
        axial_small = resample(axial, grid3.z.n_points)
        trans = transverse_tf_state(params, grid3)
        guess = WaveFunction(grid3, (trans[:, :, None]
                                     * axial_small.values[None, None, :]))
        ground_3d, report3 = solve_ground_3d(v_perp, trap, u, grid3, itp_3d,
                                             initial=normalize(guess))
        mu_3d = report3.mu
    t_ground3 = time.perf_counter() - t0

    t0 = time.perf_counter()
    trace_3d, _ = evolve_3d(ground_3d, u * ratio_f, v_perp, evolution_3d)
    t_evo3 = time.perf_counter() - t0

    times = trace_3d.times
    d3 = trace_3d.on_axis
    d_tf = _resample_trace(times, traces_1d[Regime.WEAKLY_INTERACTING])
    d_weak = _resample_trace(times, traces_1d[Regime.NON_INTERACTING])
    rms_tf = float(np.sqrt(np.mean((d_tf - d3) ** 2)))
    rms_weak = float(np.sqrt(np.mean((d_weak - d3) ** 2)))

    return ComparisonReport(
        rms_tf=rms_tf, rms_weak=rms_weak,
        focus_3d=focusing_factor(trace_3d),
        focus_1d_tf=focusing_factor(traces_1d[Regime.WEAKLY_INTERACTING]),
        focus_1d_weak=focusing_factor(traces_1d[Regime.NON_INTERACTING]),
        times=times, trace_3d=d3, trace_1d_tf=d_tf, trace_1d_weak=d_weak,
        mu_3d=mu_3d, ground_3d=ground_3d,
        metadata={
            "grid3": grid3.shape, "n_1d": grid1.n_points,
            "dt_3d": evolution_3d.dt, "dt_1d": evolution_1d.dt,
            "t_end": evolution_3d.t_end,
            "a_s_final_m": a_s_final,
            "runtime_1d_s": round(t_1d, 2),
            "runtime_ground3_s": round(t_ground3, 2),
            "runtime_evolve3_s": round(t_evo3, 2),
        })
