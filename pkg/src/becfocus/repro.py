"""Canned end-to-end scenarios emitting the headline data sets.

Each scenario writes its data files plus a JSON summary of the headline
numbers into the output directory.  Scenario names are stable identifiers
used by the command-line `repro` subcommand.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from . import io
from .config import RunConfig, parse_config
from .dynamics import EvolutionConfig, evolve_1d
from .gpe3d import default_grid3, validate_quasi1d
from .grids import Grid1D, resample
from .groundstate import solve_ground_1d
from .metrics import fidelity, focusing_factor, rectangle_state
from .potentials import Zero, lg_power_law
from .sweep import SweepAxis, SweepConfig, run_sweep
from .trajectories import DensityMovie, integrate_trajectory
from .units import BOHR_RADIUS, Regime, effective_coupling_1d
from .wigner import (downsample, marginal_momentum, marginal_position,
                     negativity_volume, purity, total_mass, wigner_transform)

SCENARIOS = ("fig3a", "fig3b", "fig4", "fig5", "fig6", "fig7")

REFERENCE_COUPLING = 17129.71  # dimensionless initial coupling of the data set
QUENCH_A0 = 0.58  # final scattering length (Bohr radii) of the interacting quench


def _base_config(**quench) -> RunConfig:
    data = {
        "physical": {},
        "grid": {"n_points": 4096, "z_min": -12.0, "z_max": 12.0},
        "potential": {"kind": "lg_power_law", "l": 10},
        "evolution": {"dt": 1e-4, "t_end": 0.4, "store_every": 2,
                      "snapshot_every": 10, "monitor_boundary": False},
        "quench": quench,
    }
    return parse_config(data)


def _prepare_ground(cfg: RunConfig):
    trap = cfg.longitudinal_potential()
    g_i, g_f = cfg.quench.couplings(cfg.params, cfg.units)
    ground, report = solve_ground_1d(trap, g_i, cfg.grid, cfg.itp)
    return trap, g_i, g_f, ground, report


def run_density_scenario(name: str, a_s_final_a0: float, outdir: Path) -> dict:
    cfg = _base_config(final_scattering_length_a0=a_s_final_a0)
    h = io.config_hash(cfg.raw)
    _, g_i, g_f, ground, report = _prepare_ground(cfg)
    trace, _ = evolve_1d(ground, g_f, Zero(), cfg.evolution, keep_snapshots=True)
    focus = focusing_factor(trace)
    io.write_csv(outdir / f"{name}_trace.csv",
                 {"t": trace.times, "density": trace.on_axis}, h,
                 ["time in 1/omega_z, on-axis density over initial peak"])
    io.write_matrix_csv(outdir / f"{name}_density_map.csv",
                        trace.snapshot_times, trace.snapshots, h,
                        "rows: time, columns: z lattice densities")
    summary = {
        "f": focus.f, "t_f": focus.t_f, "bracketed": focus.bracketed,
        "g_initial": g_i, "g_final": g_f,
        "ground_state_mu": report.mu,
        "a_s_final_a0": a_s_final_a0,
    }
    io.write_json(outdir / f"{name}_summary.json", summary, h)
    return summary


def run_fig4(outdir: Path) -> dict:
    cfg = _base_config()
    h = io.config_hash({"scenario": "fig4"})
    a_max = 2.0 * BOHR_RADIUS
    axes = [SweepAxis("l", (2, 6, 10, 12)),
            SweepAxis.linear("a_s_f", 0.0, a_max, 15)]
    summaries = {}
    for mode in ("ground_state", "rectangle"):
        sweep_cfg = SweepConfig(params=cfg.params, axes=axes,
                                initial_state=mode, grid=cfg.grid,
                                evolution=cfg.evolution)
        result = run_sweep(sweep_cfg)
        result.to_csv(outdir / f"fig4_{mode}.csv", h)
        summaries[mode] = {
            "failed_cells": result.metadata["failed"],
            "f_by_l": _curves_by_l(result),
        }
    io.write_json(outdir / "fig4_summary.json", summaries, h)
    return summaries


def _curves_by_l(result) -> dict:
    out: dict[str, dict] = {}
    for cell in result.cells:
        key = str(int(cell.coordinates["l"]))
        entry = out.setdefault(key, {"a_s_f_a0": [], "f": [], "t_f": []})
        entry["a_s_f_a0"].append(cell.coordinates["a_s_f"] / BOHR_RADIUS)
        entry["f"].append(cell.f)
        entry["t_f"].append(cell.t_f)
    return out


def run_fig5(outdir: Path, n_cells: int = 24) -> dict:
    cfg = _base_config()
    h = io.config_hash({"scenario": "fig5", "n": n_cells})
    g_f_ref = REFERENCE_COUPLING * QUENCH_A0 / 100.0
    axes = [SweepAxis.log("g_tilde_i", REFERENCE_COUPLING / 1000.0,
                          REFERENCE_COUPLING, n_cells),
            SweepAxis.log("g_tilde_f", g_f_ref / 100.0, g_f_ref, n_cells)]
    sweep_cfg = SweepConfig(params=cfg.params, axes=axes, grid=cfg.grid,
                            evolution=cfg.evolution)
    result = run_sweep(sweep_cfg)
    result.to_csv(outdir / "fig5_contour.csv", h)
    ref = result.cells[-1]  # top ends of both log axes: the reference cell
    summary = {
        "reference_cell": {"g_tilde_i": ref.coordinates["g_tilde_i"],
                           "g_tilde_f": ref.coordinates["g_tilde_f"],
                           "f": ref.f, "t_f": ref.t_f},
        "failed_cells": result.metadata["failed"],
    }
    io.write_json(outdir / "fig5_summary.json", summary, h)
    return summary


def run_fig6(outdir: Path, quick: bool = False) -> dict:
    cfg = _base_config()
    v3 = cfg.validate3d
    h = io.config_hash({"scenario": "fig6", **v3})
    grid1 = cfg.grid
    grid3 = default_grid3(cfg.params, grid1, v3["n_transverse"], v3["n_axial"],
                          v3["transverse_halfwidth"])
    summary = {}
    ground3 = None
    for asf_a0 in v3["final_scattering_lengths_a0"]:
        evo3 = EvolutionConfig(dt=v3["dt"], t_end=v3["t_end"], store_every=5,
                               monitor_boundary=False)
        evo1 = EvolutionConfig(dt=1e-4, t_end=v3["t_end"], store_every=2,
                               monitor_boundary=False)
        report = validate_quasi1d(cfg.params, asf_a0 * BOHR_RADIUS, grid3, grid1,
                                  l=v3["l"], evolution_1d=evo1, evolution_3d=evo3,
                                  ground_3d=ground3)
        ground3 = report.ground_3d
        tag = f"asf{asf_a0:g}".replace(".", "p")
        io.write_csv(outdir / f"fig6_{tag}.csv",
                     {"t": report.times, "d_3d": report.trace_3d,
                      "d_1d_weak": report.trace_1d_weak,
                      "d_1d_tf": report.trace_1d_tf}, h)
        summary[tag] = {
            "rms_tf": report.rms_tf, "rms_weak": report.rms_weak,
            "f_3d": report.focus_3d.f, "t_f_3d": report.focus_3d.t_f,
            "f_1d_tf": report.focus_1d_tf.f, "t_f_1d_tf": report.focus_1d_tf.t_f,
            "mu_3d": report.mu_3d,
            "metadata": report.metadata,
        }
    io.write_json(outdir / "fig6_summary.json", summary, h)
    return summary


def run_fig7(outdir: Path, wigner_points: int = 1024) -> dict:
    summary = {}
    h = io.config_hash({"scenario": "fig7", "n": wigner_points})
    for tag, asf_a0 in (("free", 0.0), ("interacting", QUENCH_A0)):
        cfg = _base_config(final_scattering_length_a0=asf_a0)
        trap, g_i, g_f, ground, _ = _prepare_ground(cfg)
        full_cfg = EvolutionConfig(dt=1e-4, t_end=0.3, store_every=2,
                                   snapshot_every=10, monitor_boundary=False)
        trace, _ = evolve_1d(ground, g_f, Zero(), full_cfg, keep_snapshots=True)
        focus = focusing_factor(trace)
        frame_times = [0.0, focus.t_f / 2, focus.t_f, 0.3]
        states = {0.0: ground}
        for t in frame_times[1:]:
            part = EvolutionConfig(dt=1e-4, t_end=t, store_every=10,
                                   monitor_boundary=False)
            _, state = evolve_1d(ground, g_f, Zero(), part)
            states[t] = state
        frames = {}
        for t, state in states.items():
            wg = downsample(wigner_transform(resample(state, wigner_points)), 512)
            stamp = f"{tag}_t{t:.3f}".replace(".", "p")
            io.write_matrix_csv(outdir / f"fig7_w_{stamp}.csv", wg.z, wg.w, h,
                                "rows: z, columns: p lattice")
            io.write_csv(outdir / f"fig7_marginals_{stamp}.csv",
                         {"z": wg.z, "pos_density": marginal_position(wg)}, h)
            io.write_csv(outdir / f"fig7_marginals_p_{stamp}.csv",
                         {"p": wg.p, "mom_density": marginal_momentum(wg)}, h)
            frames[stamp] = {
                "negativity_volume": negativity_volume(wg),
                "min_w": float(wg.w.min()), "max_w": float(wg.w.max()),
            }
        movie = DensityMovie.from_trace(cfg.grid, trace)
        for i, start in enumerate(cfg.trajectory["initial_points"]):
            traj = integrate_trajectory(start, movie, g_f, t_end=0.3,
                                        dt=cfg.trajectory["dt"],
                                        store_every=cfg.trajectory["store_every"])
            io.write_csv(outdir / f"fig7_{tag}_trajectory{i}.csv",
                         {"t": traj.times, "z": traj.z, "p": traj.p}, h)
        summary[tag] = {"f": focus.f, "t_f": focus.t_f, "frames": frames,
                        "g_final": g_f}
    io.write_json(outdir / "fig7_summary.json", summary, h)
    return summary


def run_scenario(name: str, outdir: Path | str) -> dict:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if name == "fig3a":
        return run_density_scenario("fig3a", 0.0, outdir)
    if name == "fig3b":
        return run_density_scenario("fig3b", QUENCH_A0, outdir)
    if name == "fig4":
        return run_fig4(outdir)
    if name == "fig5":
        return run_fig5(outdir)
    if name == "fig6":
        return run_fig6(outdir)
    if name == "fig7":
        return run_fig7(outdir)
    raise ValueError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}")
