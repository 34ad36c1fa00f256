"""Parameter scans over quench strength, trap order, and initial coupling.

Cells of the scan grid are independent runs; ground states are computed
once per unique (trap order, initial coupling) pair, cached in memory and
optionally on disk, and shared across cells.  Results are deterministic and
independent of the worker count.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .dynamics import EvolutionConfig, evolve_1d
from .grids import Grid1D, WaveFunction
from .groundstate import ItpConfig, solve_ground_1d
from .metrics import focusing_factor, rectangle_state
from .potentials import lg_power_law
from .units import (HBAR, PhysicalParams, Regime, UnitSystem, DomainError,
                    effective_coupling_1d)

AXIS_NAMES = ("a_s_f", "g_tilde_i", "g_tilde_f", "l")
INITIAL_STATE_MODES = ("ground_state", "rectangle")


def gt_from_as(a_s: float, params: PhysicalParams, regime: Regime) -> float:
    """Dimensionless effective 1D coupling for scattering length `a_s`.

    The transverse profile is evaluated self-consistently at the same
    scattering length; a_s = 0 maps to zero coupling in both regimes.
    """
    if a_s < 0:
        raise DomainError(f"scattering length must be >= 0, got {a_s}")
    if a_s == 0:
        return 0.0
    units = UnitSystem.from_params(params)
    lp2 = params.transverse_length**2
    if regime is Regime.NON_INTERACTING:
        g_si = 2 * HBAR**2 * params.atom_count * a_s / (params.mass * lp2)
    else:
        g_si = (2 * HBAR**2 / (params.mass * lp2)) * math.sqrt(
            (8.0 / 9.0) * params.atom_count * params.box_halflength * a_s)
    return units.coupling_1d_from_si(g_si)


def as_from_gt(g_tilde: float, params: PhysicalParams, regime: Regime) -> float:
    """Invert `gt_from_as`; rejects negative couplings."""
    if g_tilde < 0:
        raise DomainError(f"coupling must be >= 0, got {g_tilde}")
    if g_tilde == 0:
        return 0.0
    units = UnitSystem.from_params(params)
    g_si = units.coupling_1d_to_si(g_tilde)
    lp2 = params.transverse_length**2
    if regime is Regime.NON_INTERACTING:
        return g_si * params.mass * lp2 / (2 * HBAR**2 * params.atom_count)
    return ((g_si * params.mass * lp2 / (2 * HBAR**2)) ** 2
            * 9.0 / (8.0 * params.atom_count * params.box_halflength))


@dataclass(frozen=True)
class SweepAxis:
    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"unknown sweep axis {self.name!r}; "
                             f"allowed: {', '.join(AXIS_NAMES)}")
        if not self.values:
            raise ValueError(f"axis {self.name!r} has no values")

    @classmethod
    def linear(cls, name: str, start: float, stop: float, count: int) -> "SweepAxis":
        return cls(name, tuple(np.linspace(start, stop, count)))

    @classmethod
    def log(cls, name: str, start: float, stop: float, count: int) -> "SweepAxis":
        if start <= 0 or stop <= 0:
            raise ValueError("log axis bounds must be positive")
        return cls(name, tuple(np.geomspace(start, stop, count)))


@dataclass
class SweepConfig:
    params: PhysicalParams
    axes: list[SweepAxis]
    initial_state: str = "ground_state"
    regime: Regime = Regime.WEAKLY_INTERACTING
    l_default: int = 10
    grid: Grid1D = field(default_factory=lambda: Grid1D(4096, -12.0, 12.0))
    itp: ItpConfig = field(default_factory=ItpConfig)
    evolution: EvolutionConfig = field(default_factory=lambda: EvolutionConfig(
        dt=1e-4, t_end=0.4, store_every=2, monitor_boundary=False))
    workers: int = 1
    cache_dir: Path | None = None

    def __post_init__(self):
        if not self.axes:
            raise ValueError("a sweep needs at least one axis")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValueError("duplicate sweep axes")
        if "a_s_f" in names and "g_tilde_f" in names:
            raise ValueError("sweep a_s_f or g_tilde_f, not both")
        if self.initial_state not in INITIAL_STATE_MODES:
            raise ValueError(f"initial_state must be one of {INITIAL_STATE_MODES}")


@dataclass
class SweepCell:
    coordinates: dict
    f: float = math.nan
    t_f: float = math.nan
    bracketed: bool = False
    status: str = "pending"
    runtime_s: float = 0.0


@dataclass
class SweepResult:
    cells: list[SweepCell]
    metadata: dict

    def to_csv(self, path: Path | str, cfg_hash: str) -> None:
        axis_names = self.metadata["axes"]
        cols: dict[str, list] = {name: [] for name in axis_names}
        cols.update({"f": [], "t_f": [], "bracketed": [], "status": []})
        for cell in self.cells:
            for name in axis_names:
                cols[name].append(cell.coordinates[name])
            cols["f"].append(cell.f)
            cols["t_f"].append(cell.t_f)
            cols["bracketed"].append(int(cell.bracketed))
            cols["status"].append(0 if cell.status == "ok" else 1)
        path = Path(path)
        lines = [f"# {io.TOOL_NAME} {io.TOOL_VERSION}", f"# config_hash: {cfg_hash}",
                 "# status: 0 = ok, 1 = failed (see manifest for messages)",
                 ",".join(cols)]
        for i in range(len(self.cells)):
            lines.append(",".join(io.format_float(float(cols[k][i]))
                                  for k in cols))
        path.write_text("\n".join(lines) + "\n")


class GroundStateCache:
    """Per-(l, coupling, grid) ground states, in memory and optionally on disk."""

    def __init__(self, directory: Path | None = None):
        self.directory = Path(directory) if directory else None
        self._mem: dict[str, np.ndarray] = {}
        if self.directory:
            self.directory.mkdir(parents=True, exist_ok=True)
            self._manifest_path = self.directory / "manifest.json"
            if self._manifest_path.exists():
                self._manifest = json.loads(self._manifest_path.read_text())
            else:
                self._manifest = {}

    @staticmethod
    def key(l: int, g_i: float, grid: Grid1D, itp: ItpConfig) -> str:
        return io.config_hash({
            "l": l, "g_i": f"{g_i:.12e}",
            "grid": [grid.n_points, grid.z_min, grid.z_max],
            "itp": [itp.dtau, itp.convergence_tol, itp.renormalize_every],
        })

    def get(self, key: str) -> np.ndarray | None:
        if key in self._mem:
            return self._mem[key]
        if self.directory and key in self._manifest:
            values = io.read_wavefunction(self.directory / self._manifest[key])
            self._mem[key] = values
            return values
        return None

    def put(self, key: str, values: np.ndarray) -> None:
        self._mem[key] = values
        if self.directory:
            fname = f"ground_{key}.gpef"
            io.write_wavefunction(self.directory / fname, values)
            self._manifest[key] = fname
            self._manifest_path.write_text(json.dumps(self._manifest, indent=2,
                                                      sort_keys=True))


def _cell_coordinates(cfg: SweepConfig) -> list[dict]:
    value_lists = [axis.values for axis in cfg.axes]
    names = [axis.name for axis in cfg.axes]
    return [dict(zip(names, combo)) for combo in itertools.product(*value_lists)]


def _resolve_cell(cfg: SweepConfig, coords: dict) -> tuple[int, float, float]:
    """Map raw cell coordinates to (l, g_initial, g_final), dimensionless."""
    l = int(coords.get("l", cfg.l_default))
    units = UnitSystem.from_params(cfg.params)
    if "g_tilde_i" in coords:
        g_i = float(coords["g_tilde_i"])
    else:
        g_i = units.coupling_1d_from_si(
            effective_coupling_1d(cfg.params, cfg.regime))
    if "g_tilde_f" in coords:
        g_f = float(coords["g_tilde_f"])
    elif "a_s_f" in coords:
        # frozen transverse profile: the final coupling scales linearly in a_s
        base = units.coupling_1d_from_si(
            effective_coupling_1d(cfg.params, cfg.regime))
        g_f = base * float(coords["a_s_f"]) / cfg.params.scattering_length
    else:
        g_f = g_i
    return l, g_i, g_f


def _evaluate_cell(payload) -> tuple[int, float, float, bool, str, float]:
    index, ground_values, grid_def, g_f, mode, evo = payload
    t0 = time.perf_counter()
    try:
        grid = Grid1D(*grid_def)
        ground = WaveFunction(grid, ground_values.copy())
        if mode == "rectangle":
            ground = rectangle_state(float(np.abs(ground.values.real).max()), grid)
        from .potentials import Zero
        trace, _ = evolve_1d(ground, g_f, Zero(), evo)
        report = focusing_factor(trace)
        return (index, report.f, report.t_f, report.bracketed, "ok",
                time.perf_counter() - t0)
    except Exception as exc:  # per-cell failures must not kill the sweep
        return (index, math.nan, math.nan, False,
                f"error: {type(exc).__name__}: {exc}", time.perf_counter() - t0)


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Execute every cell; failed cells carry error records, never silent gaps."""
    coords = _cell_coordinates(cfg)
    cells = [SweepCell(coordinates=c) for c in coords]
    cache = GroundStateCache(cfg.cache_dir)

    resolved = [_resolve_cell(cfg, c) for c in coords]
    unique_grounds: dict[str, tuple[int, float]] = {}
    for l, g_i, _ in resolved:
        key = GroundStateCache.key(l, g_i, cfg.grid, cfg.itp)
        unique_grounds.setdefault(key, (l, g_i))

    units = UnitSystem.from_params(cfg.params)
    for key, (l, g_i) in unique_grounds.items():
        if cache.get(key) is not None:
            continue
        trap = lg_power_law(cfg.params, l, units)
        ground, _ = solve_ground_1d(trap, g_i, cfg.grid, cfg.itp)
        cache.put(key, ground.values)

    grid_def = (cfg.grid.n_points, cfg.grid.z_min, cfg.grid.z_max)
    payloads = []
    for i, (cell, (l, g_i, g_f)) in enumerate(zip(cells, resolved)):
        key = GroundStateCache.key(l, g_i, cfg.grid, cfg.itp)
        payloads.append((i, cache.get(key), grid_def, g_f,
                         cfg.initial_state, cfg.evolution))

    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(_evaluate_cell, payloads))
    else:
        outcomes = [_evaluate_cell(p) for p in payloads]

    for index, f, t_f, bracketed, status, rt in outcomes:
        cell = cells[index]
        cell.f, cell.t_f, cell.bracketed = f, t_f, bracketed
        cell.status, cell.runtime_s = status, rt

    return SweepResult(cells=cells, metadata={
        "axes": [a.name for a in cfg.axes],
        "initial_state": cfg.initial_state,
        "regime": cfg.regime.value,
        "l_default": cfg.l_default,
        "grid": grid_def,
        "n_cells": len(cells),
        "workers": cfg.workers,
        "failed": sum(1 for c in cells if c.status != "ok"),
    })
