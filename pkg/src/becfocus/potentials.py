"""Trapping potentials and the closed-form Thomas-Fermi profile for the ring-beam trap.

All potential objects are dimensionless (trap units); builders that start
from laser parameters take a `PhysicalParams` plus the `UnitSystem` that
fixes the scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .grids import Grid1D, WaveFunction, normalize
from .units import HBAR, PhysicalParams, UnitSystem, DomainError

MAX_LG_ORDER = 16


@dataclass(frozen=True)
class Harmonic2D:
    """Transverse harmonic confinement (1/2)(wx^2 x^2 + wy^2 y^2)."""

    omega_x: float
    omega_y: float


@dataclass(frozen=True)
class LGFull:
    """Ring-beam dipole potential v_l (z/w0)^(2l) exp(-2 z^2/w0^2)."""

    l: int
    w0: float
    v_l: float

    def __post_init__(self):
        _check_lg(self.l, self.w0, self.v_l)


@dataclass(frozen=True)
class LGPowerLaw:
    """Power-law core of the ring-beam trap, v_l (z/w0)^(2l)."""

    l: int
    w0: float
    v_l: float

    def __post_init__(self):
        _check_lg(self.l, self.w0, self.v_l)


@dataclass(frozen=True)
class HardBox:
    """Infinite walls at |z| = halfwidth; evaluates to +inf outside.

    Solvers implement the walls with projector semantics (the field is
    zeroed outside) rather than a large finite energy.
    """

    halfwidth: float

    def __post_init__(self):
        if self.halfwidth <= 0:
            raise ValueError(f"halfwidth must be > 0, got {self.halfwidth}")


@dataclass(frozen=True)
class Zero:
    """Free motion."""


PotentialSpec = Union[Harmonic2D, LGFull, LGPowerLaw, HardBox, Zero]


def _check_lg(l: int, w0: float, v_l: float):
    if not (isinstance(l, (int, np.integer)) and 0 <= l <= MAX_LG_ORDER):
        raise ValueError(f"mode order l must be an integer in [0, {MAX_LG_ORDER}], got {l}")
    if w0 <= 0:
        raise ValueError(f"beam waist must be > 0, got {w0}")
    if v_l <= 0:
        raise ValueError(f"potential amplitude must be > 0, got {v_l}")


def lg_intensity(l: int, w0: float, power: float, rho) -> np.ndarray | float:
    """Ring-beam intensity profile at radius rho (SI units).

    I_l(rho) = (2 / (pi l!)) (P / w0^2) (2 rho^2 / w0^2)^l exp(-2 rho^2 / w0^2).
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise ValueError("radius must be >= 0")
    u = 2 * rho**2 / w0**2
    out = (2.0 / (math.pi * math.factorial(l))) * (power / w0**2) * u**l * np.exp(-u)
    return out if out.ndim else float(out)


def lg_peak_radius(l: int, w0: float) -> float:
    """Radius of the intensity maximum, w0 sqrt(l/2)."""
    return w0 * math.sqrt(l / 2.0)


def lg_amplitude_si(params: PhysicalParams, l: int) -> float:
    """Power-law amplitude v_l = (2^l / (4 pi l!)) (hbar G^2/D) (P/(I_s w0^2)), in J."""
    return ((2.0**l / (4 * math.pi * math.factorial(l)))
            * (HBAR * params.decay_rate**2 / params.detuning)
            * (params.laser_power / (params.saturation_intensity * params.beam_waist**2)))


def lg_power_law(params: PhysicalParams, l: int, units: UnitSystem) -> LGPowerLaw:
    """Dimensionless power-law trap built from the laser parameters."""
    return LGPowerLaw(l=l, w0=units.length_from_si(params.beam_waist),
                      v_l=units.energy_from_si(lg_amplitude_si(params, l)))


def lg_full(params: PhysicalParams, l: int, units: UnitSystem) -> LGFull:
    """Dimensionless full ring-beam trap built from the laser parameters."""
    return LGFull(l=l, w0=units.length_from_si(params.beam_waist),
                  v_l=units.energy_from_si(lg_amplitude_si(params, l)))


def evaluate_1d(spec: PotentialSpec, z) -> np.ndarray:
    """Potential values on the longitudinal axis; HardBox yields +inf outside."""
    z = np.asarray(z, dtype=float)
    if isinstance(spec, Zero):
        return np.zeros_like(z)
    if isinstance(spec, LGPowerLaw):
        return spec.v_l * (z / spec.w0) ** (2 * spec.l)
    if isinstance(spec, LGFull):
        return (spec.v_l * (z / spec.w0) ** (2 * spec.l)
                * np.exp(-2 * z**2 / spec.w0**2))
    if isinstance(spec, HardBox):
        return np.where(np.abs(z) <= spec.halfwidth, 0.0, np.inf)
    raise TypeError(f"{type(spec).__name__} is not a 1D potential")


def evaluate_2d(spec: PotentialSpec, x, y) -> np.ndarray:
    """Transverse potential on a meshgrid-compatible pair of arrays."""
    if isinstance(spec, Zero):
        return np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape)
    if isinstance(spec, Harmonic2D):
        return 0.5 * (spec.omega_x**2 * np.asarray(x)**2
                      + spec.omega_y**2 * np.asarray(y)**2)
    raise TypeError(f"{type(spec).__name__} is not a transverse potential")


@dataclass(frozen=True)
class TFProfile1D:
    """Thomas-Fermi solution for a power-law trap: density (mu - V)/g where positive."""

    mu: float
    z_tf: float
    l: int
    wavefunction: WaveFunction


def tf_chemical_potential_1d(spec: LGPowerLaw, g_tilde: float) -> float:
    """Closed-form chemical potential of the 1D Thomas-Fermi state.

    mu = (1 + 1/(2l))^(2l/(2l+1)) * (v_l g^(2l) / (2^(2l) w0^(2l)))^(1/(2l+1)).
    """
    if g_tilde <= 0:
        raise DomainError("Thomas-Fermi profile requires a positive coupling")
    if spec.l < 1:
        raise DomainError("Thomas-Fermi profile requires mode order l >= 1")
    l = spec.l
    return ((1 + 1 / (2 * l)) ** (2 * l / (2 * l + 1))
            * (spec.v_l * g_tilde ** (2 * l)
               / (2 ** (2 * l) * spec.w0 ** (2 * l))) ** (1 / (2 * l + 1)))


def tf_radius_1d(spec: LGPowerLaw, g_tilde: float) -> float:
    """Half-width of the Thomas-Fermi cloud, w0 (mu / v_l)^(1/(2l))."""
    mu = tf_chemical_potential_1d(spec, g_tilde)
    return spec.w0 * (mu / spec.v_l) ** (1 / (2 * spec.l))


def tf_profile(spec: LGPowerLaw, g_tilde: float, grid: Grid1D) -> TFProfile1D:
    """Thomas-Fermi state sampled on `grid` and renormalized."""
    mu = tf_chemical_potential_1d(spec, g_tilde)
    z_tf = spec.w0 * (mu / spec.v_l) ** (1 / (2 * spec.l))
    dens = np.maximum(mu - evaluate_1d(spec, grid.z), 0.0) / g_tilde
    psi = normalize(WaveFunction(grid, np.sqrt(dens).astype(np.complex128)))
    return TFProfile1D(mu=mu, z_tf=z_tf, l=spec.l, wavefunction=psi)


def power_law_validity(spec: LGFull, mu: float) -> float:
    """Diagnostic ratio mu / V_l(z_l); the power-law core is trustworthy when << 1."""
    z_l = lg_peak_radius(spec.l, spec.w0)
    peak = float(evaluate_1d(spec, z_l))
    return mu / peak
