"""Run-configuration ingestion: TOML or JSON, strictly validated.

Unknown sections or keys are errors so typos can never silently fall back
to defaults.  All physical inputs are SI (with scattering lengths optionally
in Bohr radii); everything downstream of the loader is dimensionless.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .dynamics import EvolutionConfig, QuenchProtocol
from .grids import Grid1D
from .groundstate import ItpConfig
from .potentials import HardBox, LGFull, LGPowerLaw, PotentialSpec, Zero, lg_full, lg_power_law
from .units import BOHR_RADIUS, PhysicalParams, Regime, UnitSystem, rb87_defaults


class ConfigError(ValueError):
    """Malformed or contradictory run configuration."""


_PHYSICAL_KEYS = {
    "atom_count": int,
    "mass_kg": float,
    "scattering_length_m": float,
    "scattering_length_a0": float,
    "omega_x_hz": float,
    "omega_y_hz": float,
    "box_halflength_m": float,
    "beam_waist_m": float,
    "detuning_hz": float,
    "decay_rate_hz": float,
    "saturation_intensity_w_m2": float,
    "laser_power_w": float,
}

_SECTION_KEYS = {
    "physical": set(_PHYSICAL_KEYS),
    "grid": {"n_points", "z_min", "z_max"},
    "potential": {"kind", "l", "halfwidth"},
    "interaction": {"regime"},
    "itp": {"dtau", "max_iters", "convergence_tol", "renormalize_every"},
    "evolution": {"dt", "t_end", "store_every", "snapshot_every",
                  "boundary_density_max", "monitor_boundary"},
    "quench": {"final_scattering_length_a0", "final_scattering_length_m"},
    "trajectory": {"dt", "t_end", "store_every", "initial_points"},
    "wigner": {"n_points", "times"},
    "sweep": {"initial_state", "workers", "l_default", "axis"},
    "validate3d": {"n_transverse", "n_axial", "transverse_halfwidth",
                   "dt", "t_end", "final_scattering_lengths_a0", "l"},
    "output": {"directory", "deterministic"},
}

_SWEEP_AXIS_KEYS = {"name", "values", "start", "stop", "count", "scale"}


@dataclass
class RunConfig:
    """Validated, materialized run configuration."""

    raw: dict
    params: PhysicalParams
    units: UnitSystem
    grid: Grid1D
    regime: Regime
    itp: ItpConfig
    evolution: EvolutionConfig
    potential_kind: str
    potential_l: int
    hard_box_halfwidth: float | None
    quench: QuenchProtocol
    trajectory: dict
    wigner: dict
    sweep_block: dict | None
    validate3d: dict
    output_dir: Path
    deterministic: bool = True

    def longitudinal_potential(self) -> PotentialSpec:
        if self.potential_kind == "lg_power_law":
            return lg_power_law(self.params, self.potential_l, self.units)
        if self.potential_kind == "lg_full":
            return lg_full(self.params, self.potential_l, self.units)
        if self.potential_kind == "hard_box":
            return HardBox(self.hard_box_halfwidth)
        return Zero()


def _fail(msg: str) -> None:
    raise ConfigError(msg)


def _check_keys(section: str, block: dict) -> None:
    allowed = _SECTION_KEYS[section]
    for key in block:
        if key not in allowed:
            _fail(f"unknown key '{key}' in section [{section}]; "
                  f"allowed: {', '.join(sorted(allowed))}")


def _number(section: str, block: dict, key: str, default, minimum=None,
            allow_equal=False):
    value = block.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(f"[{section}] {key} must be a number, got {value!r}")
    if minimum is not None:
        ok = value >= minimum if allow_equal else value > minimum
        if not ok:
            op = ">=" if allow_equal else ">"
            _fail(f"[{section}] {key} must be {op} {minimum}, got {value}")
    return value


def load_config(path: Path | str) -> RunConfig:
    path = Path(path)
    if not path.exists():
        _fail(f"configuration file not found: {path}")
    text = path.read_text()
    if path.suffix == ".json":
        data = json.loads(text)
    else:
        data = tomllib.loads(text)
    return parse_config(data)


def parse_config(data: dict) -> RunConfig:
    for section in data:
        if section not in _SECTION_KEYS:
            _fail(f"unknown section [{section}]; allowed: "
                  f"{', '.join(sorted(_SECTION_KEYS))}")
        if not isinstance(data[section], dict):
            _fail(f"section [{section}] must be a table")
        _check_keys(section, data[section])

    phys = data.get("physical", {})
    defaults = rb87_defaults()
    if "scattering_length_m" in phys and "scattering_length_a0" in phys:
        _fail("[physical] give scattering_length_m or scattering_length_a0, not both")
    a_s = defaults.scattering_length
    if "scattering_length_m" in phys:
        a_s = _number("physical", phys, "scattering_length_m", a_s, 0.0, True)
    elif "scattering_length_a0" in phys:
        a_s = _number("physical", phys, "scattering_length_a0",
                      a_s / BOHR_RADIUS, 0.0, True) * BOHR_RADIUS
    try:
        params = PhysicalParams(
            atom_count=int(_number("physical", phys, "atom_count",
                                   defaults.atom_count, 0)),
            mass=_number("physical", phys, "mass_kg", defaults.mass, 0.0),
            scattering_length=a_s,
            omega_x=2 * math.pi * _number("physical", phys, "omega_x_hz",
                                          defaults.omega_x / (2 * math.pi), 0.0),
            omega_y=2 * math.pi * _number("physical", phys, "omega_y_hz",
                                          defaults.omega_y / (2 * math.pi), 0.0),
            box_halflength=_number("physical", phys, "box_halflength_m",
                                   defaults.box_halflength, 0.0),
            beam_waist=_number("physical", phys, "beam_waist_m",
                               defaults.beam_waist, 0.0),
            detuning=2 * math.pi * _number("physical", phys, "detuning_hz",
                                           defaults.detuning / (2 * math.pi), 0.0),
            decay_rate=2 * math.pi * _number("physical", phys, "decay_rate_hz",
                                             defaults.decay_rate / (2 * math.pi), 0.0),
            saturation_intensity=_number("physical", phys, "saturation_intensity_w_m2",
                                         defaults.saturation_intensity, 0.0),
            laser_power=_number("physical", phys, "laser_power_w",
                                defaults.laser_power, 0.0, True),
        )
    except ValueError as exc:
        _fail(f"[physical] {exc}")
    units = UnitSystem.from_params(params)

    gblock = data.get("grid", {})
    try:
        grid = Grid1D(
            n_points=int(_number("grid", gblock, "n_points", 4096, 0)),
            z_min=_number("grid", gblock, "z_min", -12.0, None),
            z_max=_number("grid", gblock, "z_max", 12.0, None))
    except ValueError as exc:
        _fail(f"[grid] {exc}")

    pblock = data.get("potential", {})
    kind = pblock.get("kind", "lg_power_law")
    if kind not in ("lg_power_law", "lg_full", "hard_box", "zero"):
        _fail(f"[potential] unknown kind {kind!r}")
    l = int(_number("potential", pblock, "l", 10, -1))
    halfwidth = _number("potential", pblock, "halfwidth", None, 0.0)
    if kind == "hard_box" and halfwidth is None:
        _fail("[potential] hard_box requires halfwidth")

    iblock = data.get("interaction", {})
    regime_name = iblock.get("regime", "weakly_interacting")
    try:
        regime = Regime(regime_name)
    except ValueError:
        _fail(f"[interaction] unknown regime {regime_name!r}")

    tblock = data.get("itp", {})
    try:
        itp = ItpConfig(
            dtau=_number("itp", tblock, "dtau", 1e-4, 0.0),
            max_iters=int(_number("itp", tblock, "max_iters", 2_000_000, 0)),
            convergence_tol=_number("itp", tblock, "convergence_tol", 1e-10, 0.0),
            renormalize_every=int(_number("itp", tblock, "renormalize_every", 1, 0)))
    except ValueError as exc:
        _fail(f"[itp] {exc}")

    eblock = data.get("evolution", {})
    monitor = eblock.get("monitor_boundary", True)
    if not isinstance(monitor, bool):
        _fail("[evolution] monitor_boundary must be a boolean")
    snapshot_every = eblock.get("snapshot_every")
    if snapshot_every is not None:
        snapshot_every = int(_number("evolution", eblock, "snapshot_every", None, 0))
    try:
        evolution = EvolutionConfig(
            dt=_number("evolution", eblock, "dt", 1e-4, 0.0),
            t_end=_number("evolution", eblock, "t_end", 0.4, 0.0),
            store_every=int(_number("evolution", eblock, "store_every", 2, 0)),
            snapshot_every=snapshot_every,
            boundary_density_max=_number("evolution", eblock,
                                         "boundary_density_max", 1e-6, 0.0),
            monitor_boundary=monitor)
    except ValueError as exc:
        _fail(f"[evolution] {exc}")

    qblock = data.get("quench", {})
    if ("final_scattering_length_a0" in qblock
            and "final_scattering_length_m" in qblock):
        _fail("[quench] give the final scattering length once")
    a_f = params.scattering_length
    if "final_scattering_length_m" in qblock:
        a_f = _number("quench", qblock, "final_scattering_length_m", a_f, 0.0, True)
    elif "final_scattering_length_a0" in qblock:
        a_f = _number("quench", qblock, "final_scattering_length_a0",
                      a_f / BOHR_RADIUS, 0.0, True) * BOHR_RADIUS
    quench = QuenchProtocol(scattering_length_initial=params.scattering_length,
                            scattering_length_final=a_f, regime=regime)

    trajblock = data.get("trajectory", {})
    points = trajblock.get("initial_points",
                           [[0.5, math.pi / 2], [-0.5, math.pi / 2],
                            [0.5, -math.pi / 2], [-0.5, -math.pi / 2]])
    if not (isinstance(points, list) and
            all(isinstance(p, (list, tuple)) and len(p) == 2 for p in points)):
        _fail("[trajectory] initial_points must be a list of [z, p] pairs")
    trajectory = {
        "dt": _number("trajectory", trajblock, "dt", 1e-4, 0.0),
        "t_end": _number("trajectory", trajblock, "t_end", 0.3, 0.0),
        "store_every": int(_number("trajectory", trajblock, "store_every", 10, 0)),
        "initial_points": [(float(p[0]), float(p[1])) for p in points],
    }

    wblock = data.get("wigner", {})
    times = wblock.get("times", [0.0])
    if not (isinstance(times, list) and
            all(isinstance(t, (int, float)) for t in times)):
        _fail("[wigner] times must be a list of numbers")
    wigner = {
        "n_points": int(_number("wigner", wblock, "n_points", 1024, 0)),
        "times": [float(t) for t in times],
    }

    sweep_block = data.get("sweep")
    if sweep_block is not None:
        axes = sweep_block.get("axis")
        if not axes:
            _fail("[sweep] needs at least one [[sweep.axis]] entry")
        for ax in axes:
            for key in ax:
                if key not in _SWEEP_AXIS_KEYS:
                    _fail(f"unknown key '{key}' in [[sweep.axis]]")
            if "name" not in ax:
                _fail("[[sweep.axis]] entries need a name")
            if ("values" in ax) == ("start" in ax):
                _fail(f"axis '{ax['name']}': give either values or start/stop/count")

    vblock = data.get("validate3d", {})
    asf_list = vblock.get("final_scattering_lengths_a0", [0.0, 0.58])
    if not (isinstance(asf_list, list) and
            all(isinstance(v, (int, float)) and v >= 0 for v in asf_list)):
        _fail("[validate3d] final_scattering_lengths_a0 must be nonnegative numbers")
    validate3d = {
        "n_transverse": int(_number("validate3d", vblock, "n_transverse", 64, 0)),
        "n_axial": int(_number("validate3d", vblock, "n_axial", 512, 0)),
        "transverse_halfwidth": _number("validate3d", vblock,
                                        "transverse_halfwidth", 8.0, 0.0),
        "dt": _number("validate3d", vblock, "dt", 4e-5, 0.0),
        "t_end": _number("validate3d", vblock, "t_end", 0.25, 0.0),
        "l": int(_number("validate3d", vblock, "l", 10, 0)),
        "final_scattering_lengths_a0": [float(v) for v in asf_list],
    }

    oblock = data.get("output", {})
    deterministic = oblock.get("deterministic", True)
    if not isinstance(deterministic, bool):
        _fail("[output] deterministic must be a boolean")

    return RunConfig(
        raw=data, params=params, units=units, grid=grid, regime=regime,
        itp=itp, evolution=evolution,
        potential_kind=kind, potential_l=l, hard_box_halfwidth=halfwidth,
        quench=quench, trajectory=trajectory, wigner=wigner,
        sweep_block=sweep_block, validate3d=validate3d,
        output_dir=Path(oblock.get("directory", "out")),
        deterministic=deterministic)
