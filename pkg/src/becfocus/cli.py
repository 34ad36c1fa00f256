"""Command-line entry point.

Subcommands: ground, evolve, wigner, trajectories, sweep, validate3d,
potential-dump, repro.  Exit codes: 0 success, 1 configuration or validation
error, 2 numeric failure.  Errors are emitted as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .config import ConfigError, RunConfig, load_config, parse_config
from .dynamics import EvolutionError, evolve_1d
from .gpe3d import default_grid3, validate_quasi1d
from .groundstate import GroundStateError, solve_ground_1d
from .grids import GridError, resample
from .metrics import fidelity, focusing_factor
from .potentials import Zero, evaluate_1d
from .repro import SCENARIOS, run_scenario
from .sweep import SweepAxis, SweepConfig, run_sweep
from .trajectories import DensityMovie, integrate_trajectory
from .units import BOHR_RADIUS
from .wigner import (marginal_momentum, marginal_position, negativity_volume,
                     purity, total_mass, wigner_transform)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2


def _emit_error(kind: str, exc: Exception) -> None:
    sys.stderr.write(json.dumps({
        "error": kind, "type": type(exc).__name__, "message": str(exc)}) + "\n")


def _load(args) -> RunConfig:
    if args.config:
        return load_config(args.config)
    return parse_config({})


def _outdir(cfg: RunConfig, args) -> Path:
    out = Path(args.output) if args.output else cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_ground(cfg: RunConfig, args) -> int:
    out = _outdir(cfg, args)
    h = io.config_hash(cfg.raw)
    trap = cfg.longitudinal_potential()
    g_i, _ = cfg.quench.couplings(cfg.params, cfg.units)
    ground, report = solve_ground_1d(trap, g_i, cfg.grid, cfg.itp)
    dens = ground.values.real**2 + ground.values.imag**2
    io.write_csv(out / "ground_state.csv",
                 {"z": cfg.grid.z, "re": ground.values.real,
                  "im": ground.values.imag, "density": dens}, h,
                 ["z in box half-lengths"])
    io.write_json(out / "ground_report.json", {
        "mu": report.mu, "energy": report.energy,
        "iterations": report.iterations, "residual": report.residual,
        "g_initial": g_i,
        "rectangle_fidelity": fidelity(ground),
    }, h)
    print(f"ground state: mu = {report.mu:.6g}, "
          f"fidelity = {fidelity(ground):.4f} -> {out}")
    return EXIT_OK


def cmd_evolve(cfg: RunConfig, args) -> int:
    out = _outdir(cfg, args)
    h = io.config_hash(cfg.raw)
    trap = cfg.longitudinal_potential()
    g_i, g_f = cfg.quench.couplings(cfg.params, cfg.units)
    ground, _ = solve_ground_1d(trap, g_i, cfg.grid, cfg.itp)
    trace, final = evolve_1d(ground, g_f, Zero(), cfg.evolution,
                             keep_snapshots=args.snapshots)
    focus = focusing_factor(trace)
    io.write_csv(out / "trace.csv", {"t": trace.times, "density": trace.on_axis},
                 h, ["time in 1/omega_z"])
    if args.snapshots:
        io.write_matrix_csv(out / "density_map.csv", trace.snapshot_times,
                            trace.snapshots, h, "rows: time, cols: z densities")
        io.write_wavefunction(out / "final_state.gpef", final.values)
    io.write_json(out / "evolve_summary.json", {
        "f": focus.f, "t_f": focus.t_f, "bracketed": focus.bracketed,
        "g_initial": g_i, "g_final": g_f,
    }, h)
    print(f"evolve: f = {focus.f:.4f} at t_f = {focus.t_f:.4f}/omega_z -> {out}")
    return EXIT_OK


def cmd_wigner(cfg: RunConfig, args) -> int:
    out = _outdir(cfg, args)
    h = io.config_hash(cfg.raw)
    trap = cfg.longitudinal_potential()
    g_i, g_f = cfg.quench.couplings(cfg.params, cfg.units)
    ground, _ = solve_ground_1d(trap, g_i, cfg.grid, cfg.itp)
    diagnostics = {}
    from .dynamics import EvolutionConfig
    for t in cfg.wigner["times"]:
        if t == 0:
            state = ground
        else:
            part = EvolutionConfig(dt=cfg.evolution.dt, t_end=t, store_every=100,
                                   monitor_boundary=False)
            _, state = evolve_1d(ground, g_f, Zero(), part)
        wg = wigner_transform(resample(state, cfg.wigner["n_points"]))
        stamp = f"t{t:.3f}".replace(".", "p")
        io.write_matrix_csv(out / f"wigner_{stamp}.csv", wg.z, wg.w, h,
                            "rows: z, cols: p")
        io.write_csv(out / f"wigner_{stamp}_marginal_z.csv",
                     {"z": wg.z, "density": marginal_position(wg)}, h)
        io.write_csv(out / f"wigner_{stamp}_marginal_p.csv",
                     {"p": wg.p, "density": marginal_momentum(wg)}, h)
        diagnostics[stamp] = {
            "negativity_volume": negativity_volume(wg),
            "min_w": float(wg.w.min()), "purity": purity(wg),
            "mass": total_mass(wg),
        }
    io.write_json(out / "wigner_summary.json", diagnostics, h)
    print(f"wigner: {len(cfg.wigner['times'])} frame(s) -> {out}")
    return EXIT_OK


def cmd_trajectories(cfg: RunConfig, args) -> int:
    out = _outdir(cfg, args)
    h = io.config_hash(cfg.raw)
    trap = cfg.longitudinal_potential()
    g_i, g_f = cfg.quench.couplings(cfg.params, cfg.units)
    ground, _ = solve_ground_1d(trap, g_i, cfg.grid, cfg.itp)
    from .dynamics import EvolutionConfig
    evo = EvolutionConfig(dt=cfg.evolution.dt, t_end=cfg.trajectory["t_end"],
                          store_every=cfg.evolution.store_every,
                          snapshot_every=10, monitor_boundary=False)
    trace, _ = evolve_1d(ground, g_f, Zero(), evo, keep_snapshots=True)
    movie = DensityMovie.from_trace(cfg.grid, trace)
    rows = []
    for i, start in enumerate(cfg.trajectory["initial_points"]):
        traj = integrate_trajectory(start, movie, g_f,
                                    t_end=cfg.trajectory["t_end"],
                                    dt=cfg.trajectory["dt"],
                                    store_every=cfg.trajectory["store_every"])
        io.write_csv(out / f"trajectory{i}.csv",
                     {"t": traj.times, "z": traj.z, "p": traj.p}, h,
                     [f"start: z = {start[0]}, p = {start[1]}"])
        rows.append({"start": list(start), "exited": traj.exited})
    io.write_json(out / "trajectories_summary.json", {"trajectories": rows}, h)
    print(f"trajectories: {len(rows)} path(s) -> {out}")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, args) -> int:
    if not cfg.sweep_block:
        raise ConfigError("the sweep subcommand needs a [sweep] section")
    out = _outdir(cfg, args)
    h = io.config_hash(cfg.raw)
    axes = []
    for ax in cfg.sweep_block["axis"]:
        name = ax["name"]
        if "values" in ax:
            values = [float(v) for v in ax["values"]]
            if name == "a_s_f":
                values = [v * BOHR_RADIUS for v in values]
            axes.append(SweepAxis(name, tuple(values)))
        else:
            start, stop = float(ax["start"]), float(ax["stop"])
            if name == "a_s_f":
                start, stop = start * BOHR_RADIUS, stop * BOHR_RADIUS
            count = int(ax["count"])
            scale = ax.get("scale", "linear")
            if scale == "log":
                axes.append(SweepAxis.log(name, start, stop, count))
            else:
                axes.append(SweepAxis.linear(name, start, stop, count))
    workers = args.threads or int(cfg.sweep_block.get("workers", 1))
    sweep_cfg = SweepConfig(
        params=cfg.params, axes=axes,
        initial_state=cfg.sweep_block.get("initial_state", "ground_state"),
        regime=cfg.regime, l_default=int(cfg.sweep_block.get("l_default", 10)),
        grid=cfg.grid, itp=cfg.itp, evolution=cfg.evolution, workers=workers,
        cache_dir=out / "ground_cache")
    result = run_sweep(sweep_cfg)
    result.to_csv(out / "sweep.csv", h)
    io.write_json(out / "sweep_manifest.json", {
        "metadata": result.metadata,
        "cells": [{"coordinates": c.coordinates, "f": c.f, "t_f": c.t_f,
                   "status": c.status, "runtime_s": round(c.runtime_s, 3)}
                  for c in result.cells],
    }, h)
    print(f"sweep: {result.metadata['n_cells']} cells, "
          f"{result.metadata['failed']} failed -> {out}")
    return EXIT_OK


def cmd_validate3d(cfg: RunConfig, args) -> int:
    out = _outdir(cfg, args)
    h = io.config_hash(cfg.raw)
    v3 = cfg.validate3d
    from .dynamics import EvolutionConfig
    grid3 = default_grid3(cfg.params, cfg.grid, v3["n_transverse"], v3["n_axial"],
                          v3["transverse_halfwidth"])
    summary = {}
    ground3 = None
    for asf_a0 in v3["final_scattering_lengths_a0"]:
        evo3 = EvolutionConfig(dt=v3["dt"], t_end=v3["t_end"], store_every=5,
                               monitor_boundary=False)
        evo1 = EvolutionConfig(dt=1e-4, t_end=v3["t_end"], store_every=2,
                               monitor_boundary=False)
        report = validate_quasi1d(cfg.params, asf_a0 * BOHR_RADIUS, grid3,
                                  cfg.grid, l=v3["l"], itp_1d=cfg.itp,
                                  evolution_1d=evo1, evolution_3d=evo3,
                                  ground_3d=ground3)
        ground3 = report.ground_3d
        tag = f"asf{asf_a0:g}".replace(".", "p")
        io.write_csv(out / f"validate3d_{tag}.csv",
                     {"t": report.times, "d_3d": report.trace_3d,
                      "d_1d_weak": report.trace_1d_weak,
                      "d_1d_tf": report.trace_1d_tf}, h)
        summary[tag] = {"rms_tf": report.rms_tf, "rms_weak": report.rms_weak,
                        "f_3d": report.focus_3d.f, "t_f_3d": report.focus_3d.t_f,
                        "mu_3d": report.mu_3d, "metadata": report.metadata}
        print(f"validate3d a_s_f = {asf_a0} a0: rms_tf = {report.rms_tf:.4f}, "
              f"rms_weak = {report.rms_weak:.4f}")
    io.write_json(out / "validate3d_summary.json", summary, h)
    return EXIT_OK


def cmd_potential_dump(cfg: RunConfig, args) -> int:
    out = _outdir(cfg, args)
    h = io.config_hash(cfg.raw)
    trap = cfg.longitudinal_potential()
    values = evaluate_1d(trap, cfg.grid.z)
    io.write_csv(out / "potential.csv", {"z": cfg.grid.z, "v": values}, h,
                 [f"kind: {cfg.potential_kind}, l: {cfg.potential_l}"])
    print(f"potential dump -> {out / 'potential.csv'}")
    return EXIT_OK


def cmd_repro(cfg: RunConfig, args) -> int:
    out = Path(args.output) if args.output else Path("out") / args.scenario
    summary = run_scenario(args.scenario, out)
    print(json.dumps({"scenario": args.scenario,
                      "summary_keys": sorted(summary)}, indent=2))
    return EXIT_OK


_COMMANDS = {
    "ground": cmd_ground,
    "evolve": cmd_evolve,
    "wigner": cmd_wigner,
    "trajectories": cmd_trajectories,
    "sweep": cmd_sweep,
    "validate3d": cmd_validate3d,
    "potential-dump": cmd_potential_dump,
    "repro": cmd_repro,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="becfocus",
        description="Diffractive focusing of box-trapped condensates: "
                    "ground states, quench dynamics, phase space, sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="TOML or JSON run configuration")
        p.add_argument("--output", help="output directory (overrides config)")
        p.add_argument("--dry-run", action="store_true",
                       help="validate the configuration and exit")
        p.add_argument("--threads", type=int, default=0,
                       help="worker cap for parallel subcommands")
        if name == "evolve":
            p.add_argument("--snapshots", action="store_true",
                           help="write the full density map and final state")
        if name == "repro":
            p.add_argument("scenario", choices=SCENARIOS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
    except (ConfigError, GridError, ValueError, OSError) as exc:
        _emit_error("configuration", exc)
        return EXIT_CONFIG
    if args.dry_run:
        print("configuration valid")
        return EXIT_OK
    try:
        return _COMMANDS[args.command](cfg, args)
    except (ConfigError, GridError) as exc:
        _emit_error("configuration", exc)
        return EXIT_CONFIG
    except (GroundStateError, EvolutionError, FloatingPointError) as exc:
        _emit_error("numeric", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
