"""Dimensional constants, nondimensionalization, and Thomas-Fermi estimates.

Everything downstream of this module works in trap units: hbar = m = 1,
lengths in units of the box half-length, times in units of the inverse
effective longitudinal frequency.  SI values enter and leave only here.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

HBAR = 1.054571817e-34  # J s (CODATA)
BOHR_RADIUS = 5.29177210903e-11  # m (CODATA)
RB87_MASS = 1.44316060e-25  # kg


class Regime(enum.Enum):
    """Transverse-profile model used to reduce the 3D problem to 1D."""

    NON_INTERACTING = "non_interacting"
    WEAKLY_INTERACTING = "weakly_interacting"


class DomainError(ValueError):
    """A physical quantity was requested outside its domain of validity."""


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional atomic and trap constants (SI units throughout).

    Derived lengths and frequencies are exposed as properties so they can
    never drift out of sync with the stored fields.
    """

    atom_count: int
    mass: float  # kg
    scattering_length: float  # m
    omega_x: float  # rad/s
    omega_y: float  # rad/s
    box_halflength: float  # m
    beam_waist: float  # m
    detuning: float  # rad/s
    decay_rate: float  # rad/s
    saturation_intensity: float  # W/m^2
    laser_power: float  # W

    def __post_init__(self):
        if self.atom_count < 1:
            raise ValueError(f"atom_count must be >= 1, got {self.atom_count}")
        for name in ("mass", "omega_x", "omega_y", "box_halflength",
                     "beam_waist", "saturation_intensity"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("scattering_length", "laser_power"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    @property
    def oscillator_length_x(self) -> float:
        return math.sqrt(HBAR / (self.mass * self.omega_x))

    @property
    def oscillator_length_y(self) -> float:
        return math.sqrt(HBAR / (self.mass * self.omega_y))

    @property
    def transverse_length(self) -> float:
        return math.sqrt(self.oscillator_length_x * self.oscillator_length_y)

    @property
    def omega_perp(self) -> float:
        return math.sqrt(self.omega_x * self.omega_y)

    @property
    def omega_z(self) -> float:
        # effective longitudinal frequency hbar / (m L_z^2)
        return HBAR / (self.mass * self.box_halflength**2)


def rb87_defaults(scattering_length_a0: float = 100.0,
                  atom_count: int = 10_000) -> PhysicalParams:
    """The 87Rb box-trap configuration used by the bundled repro scenarios."""
    return PhysicalParams(
        atom_count=atom_count,
        mass=RB87_MASS,
        scattering_length=scattering_length_a0 * BOHR_RADIUS,
        omega_x=2 * math.pi * 2.5e3,
        omega_y=2 * math.pi * 2.5e3,
        box_halflength=15e-6,
        beam_waist=15e-6,
        detuning=2 * math.pi * 1.0e13,
        decay_rate=2 * math.pi * 6.1e6,
        saturation_intensity=16.0,
        laser_power=0.1,
    )


@dataclass(frozen=True)
class UnitSystem:
    """Trap units: length L_z, time 1/omega_z, energy hbar*omega_z.

    With this choice the dimensionless 1D equation of motion reads
    i dphi/dt = (-1/2 d^2/dz^2 + V + g |phi|^2) phi.
    """

    length: float  # m
    time: float  # s
    energy: float  # J
    mass: float  # kg

    @classmethod
    def from_params(cls, params: PhysicalParams) -> "UnitSystem":
        length = params.box_halflength
        time = 1.0 / params.omega_z
        energy = HBAR * params.omega_z
        return cls(length=length, time=time, energy=energy, mass=params.mass)

    def __post_init__(self):
        # hbar = energy*time and energy = hbar^2/(m length^2) must both hold
        if not math.isclose(self.energy * self.time, HBAR, rel_tol=1e-12):
            raise ValueError("inconsistent unit system: energy*time != hbar")
        if not math.isclose(self.energy, HBAR**2 / (self.mass * self.length**2),
                            rel_tol=1e-12):
            raise ValueError("inconsistent unit system: energy != hbar^2/(m L^2)")

    # --- scalar converters (SI <-> dimensionless) ---
    def length_from_si(self, x: float) -> float:
        return x / self.length

    def length_to_si(self, x: float) -> float:
        return x * self.length

    def time_from_si(self, t: float) -> float:
        return t / self.time

    def time_to_si(self, t: float) -> float:
        return t * self.time

    def energy_from_si(self, e: float) -> float:
        return e / self.energy

    def energy_to_si(self, e: float) -> float:
        return e * self.energy

    def coupling_1d_from_si(self, g: float) -> float:
        # 1D coupling carries energy*length
        return g / (self.energy * self.length)

    def coupling_1d_to_si(self, g: float) -> float:
        return g * (self.energy * self.length)

    def coupling_3d_from_si(self, g: float) -> float:
        # 3D coupling carries energy*volume
        return g / (self.energy * self.length**3)

    def coupling_3d_to_si(self, g: float) -> float:
        return g * (self.energy * self.length**3)


def contact_coupling(params: PhysicalParams) -> float:
    """3D contact-interaction constant 4 pi hbar^2 a_s / m, in J m^3."""
    return 4 * math.pi * HBAR**2 * params.scattering_length / params.mass


def interaction_ratio(params: PhysicalParams) -> float:
    """N a_s / L_perp, the dimensionless measure separating the two regimes."""
    return params.atom_count * params.scattering_length / params.transverse_length


def advisable_regime(params: PhysicalParams) -> Regime | None:
    """Suggest a regime from N a_s / L_perp; None inside the crossover band."""
    ratio = interaction_ratio(params)
    if ratio < 0.1:
        return Regime.NON_INTERACTING
    if ratio > 10.0:
        return Regime.WEAKLY_INTERACTING
    return None


def transverse_overlap(params: PhysicalParams, regime: Regime) -> float:
    """Transverse overlap integral of the squared profile, in 1/m^2.

    Gaussian transverse ground state gives 1/(2 pi L_perp^2); the
    Thomas-Fermi transverse profile multiplies that by
    sqrt((8/9) L_z / (N a_s)).
    """
    advised = advisable_regime(params)
    if advised is not None and advised != regime:
        warnings.warn(
            f"regime {regime.value} requested but N a_s/L_perp = "
            f"{interaction_ratio(params):.3g} suggests {advised.value}",
            stacklevel=2,
        )
    base = 1.0 / (2 * math.pi * params.transverse_length**2)
    if regime is Regime.NON_INTERACTING:
        return base
    n_as = params.atom_count * params.scattering_length
    if n_as == 0:
        raise DomainError(
            "transverse overlap in the weakly interacting regime requires a_s > 0")
    return base * math.sqrt((8.0 / 9.0) * params.box_halflength / n_as)


def effective_coupling_1d(params: PhysicalParams, regime: Regime) -> float:
    """Effective 1D coupling g N c_perp, in J m."""
    return contact_coupling(params) * params.atom_count * transverse_overlap(params, regime)


def tf_chemical_potential(params: PhysicalParams) -> float:
    """Thomas-Fermi chemical potential for hard walls plus transverse harmonic trap.

    mu = sqrt(m g N omega_x omega_y / (2 pi L_z)), in J.  Requires a_s > 0.
    """
    if params.scattering_length <= 0:
        raise DomainError("Thomas-Fermi chemical potential requires a_s > 0")
    g = contact_coupling(params)
    return math.sqrt(params.mass * g * params.atom_count
                     * params.omega_x * params.omega_y
                     / (2 * math.pi * params.box_halflength))


def tf_total_energy(params: PhysicalParams) -> float:
    """Total mean-field energy (2/3) N mu in the Thomas-Fermi limit, in J."""
    return (2.0 / 3.0) * params.atom_count * tf_chemical_potential(params)


def tf_energy_per_particle(params: PhysicalParams) -> float:
    """Energy per particle (2 sqrt(2)/3) hbar omega_perp sqrt(N a_s / L_z), in J.

    Algebraically identical to tf_total_energy / N; kept separate because it
    is the form used to judge whether the transverse motion stays frozen.
    """
    if params.scattering_length <= 0:
        raise DomainError("Thomas-Fermi energy estimate requires a_s > 0")
    return (2.0 * math.sqrt(2.0) / 3.0) * HBAR * params.omega_perp * math.sqrt(
        params.atom_count * params.scattering_length / params.box_halflength)


def transverse_energy_offset(params: PhysicalParams, regime: Regime) -> float:
    """Constant energy offset carried by the frozen transverse profile, in J.

    Gaussian profile: hbar (omega_x + omega_y) / 2.  Thomas-Fermi profile:
    one third of the chemical potential.
    """
    if regime is Regime.NON_INTERACTING:
        return 0.5 * HBAR * (params.omega_x + params.omega_y)
    return tf_chemical_potential(params) / 3.0


@dataclass(frozen=True)
class InteractionParams:
    """Bundle of the interaction constants for one configuration."""

    g3d: float  # J m^3
    c_perp: float  # 1/m^2
    g_tilde: float  # J m
    regime: Regime

    @classmethod
    def from_params(cls, params: PhysicalParams, regime: Regime) -> "InteractionParams":
        g3d = contact_coupling(params)
        c_perp = transverse_overlap(params, regime)
        return cls(g3d=g3d, c_perp=c_perp, g_tilde=g3d * params.atom_count * c_perp,
                   regime=regime)
