"""Focusing factor, focal time, and rectangularity measures."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import DensityTrace
from .grids import Grid1D, WaveFunction, normalize


@dataclass
class FocusReport:
    """Peak of the normalized on-axis density and the time it occurs."""

    f: float
    t_f: float
    peak_density: float  # unnormalized n(0, t_f)
    bracketed: bool  # False when the maximum sits on a trace boundary


@dataclass(frozen=True)
class RectangleState:
    """Normalized top-hat with the same amplitude as a reference profile.

    Amplitude h and support half-width 1/(2 h^2) satisfy
    h^2 * 2 * halfwidth = 1 exactly.
    """

    amplitude: float

    @property
    def halfwidth(self) -> float:
        return 1.0 / (2.0 * self.amplitude**2)


def focusing_factor(trace: DensityTrace, check_spatial_max: bool = False,
                    tol_spatial: float = 5e-3) -> FocusReport:
    """Locate the density peak; the focal time is refined by a local parabola.

    With `check_spatial_max`, snapshot maxima over z are compared against the
    on-axis values to confirm the focus really forms on axis (even states).
    """
    d = trace.on_axis
    t = trace.times
    if d.size < 3:
        raise ValueError("trace too short to locate a focus")
    i = int(np.argmax(d))
    if i == 0 or i == d.size - 1:
        return FocusReport(f=float(d[i]), t_f=float(t[i]),
                           peak_density=float(d[i]) * trace.initial_peak,
                           bracketed=False)
    f1, f2, f3 = d[i - 1], d[i], d[i + 1]
    denom = f1 - 2 * f2 + f3
    if denom == 0:
        t_ref, f_ref = float(t[i]), float(f2)
    else:
        h = t[i] - t[i - 1]
        t_ref = float(t[i] + 0.5 * (f1 - f3) / denom * h)
        f_ref = float(f2 - 0.125 * (f1 - f3) ** 2 / denom)
    if check_spatial_max and trace.snapshots is not None:
        k = int(np.argmin(np.abs(trace.snapshot_times - t_ref)))
        spatial = float(trace.snapshots[k].max()) / trace.initial_peak
        if not math.isclose(spatial, f_ref, rel_tol=tol_spatial):
            raise ValueError(
                f"spatial maximum {spatial:.6g} disagrees with on-axis peak "
                f"{f_ref:.6g} beyond {tol_spatial:.1%}")
    return FocusReport(f=f_ref, t_f=t_ref,
                       peak_density=f_ref * trace.initial_peak, bracketed=True)


def rectangle_state(amplitude: float, grid: Grid1D) -> WaveFunction:
    """Sample the matched top-hat on `grid` and renormalize away pixel error."""
    if amplitude <= 0:
        raise ValueError(f"amplitude must be > 0, got {amplitude}")
    rect = RectangleState(amplitude)
    if rect.halfwidth >= min(-grid.z_min, grid.z_max):
        raise ValueError(
            f"rectangle halfwidth {rect.halfwidth:.3g} does not fit in the grid window")
    values = np.where(np.abs(grid.z) < rect.halfwidth, amplitude, 0.0)
    return normalize(WaveFunction(grid, values.astype(np.complex128)))


def fidelity(phi: WaveFunction, reference: WaveFunction | None = None,
             imag_tol: float = 1e-8) -> float:
    """Real overlap integral between two real normalized profiles.

    With `reference` omitted, the matched rectangle built from the peak
    amplitude of `phi` is used.
    """
    if np.abs(phi.values.imag).max() > imag_tol:
        raise ValueError("rectangularity overlap is defined for real profiles")
    if reference is None:
        reference = rectangle_state(float(np.abs(phi.values.real).max()), phi.grid)
    if np.abs(reference.values.imag).max() > imag_tol:
        raise ValueError("reference profile must be real")
    if reference.grid != phi.grid:
        raise ValueError("profiles must share a grid")
    return float(np.sum(phi.values.real * reference.values.real) * phi.grid.dz)
