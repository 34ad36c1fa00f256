import math

import numpy as np
import pytest
from scipy.integrate import dblquad
from scipy.optimize import brentq

import becfocus as bf
from becfocus.units import DomainError

HBAR = 1.054571817e-34
A0 = 5.29177210903e-11


def make_params(**overrides):
    base = dict(atom_count=10_000, mass=1.44316060e-25, scattering_length=100 * A0,
                omega_x=2 * math.pi * 2.5e3, omega_y=2 * math.pi * 2.5e3,
                box_halflength=15e-6, beam_waist=15e-6,
                detuning=2 * math.pi * 1.0e13, decay_rate=2 * math.pi * 6.1e6,
                saturation_intensity=16.0, laser_power=0.1)
    base.update(overrides)
    return bf.PhysicalParams(**base)


class TestContactCoupling:
    def test_zero_scattering_length(self, params):
        p = make_params(scattering_length=0.0)
        assert bf.contact_coupling(p) == 0.0

    def test_hand_arithmetic(self, params):
        # direct arithmetic, independently of the implementation
        expected = 4 * math.pi * HBAR**2 * (100 * A0) / 1.44316060e-25
        assert bf.contact_coupling(params) == pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(5.1246e-51, rel=1e-4)

    def test_linearity(self, params):
        doubled = make_params(scattering_length=200 * A0)
        assert bf.contact_coupling(doubled) == pytest.approx(
            2 * bf.contact_coupling(params), rel=1e-14)


class TestTransverseOverlap:
    def test_reference_value(self, params):
        c = bf.transverse_overlap(params, bf.Regime.WEAKLY_INTERACTING)
        assert 1.6e12 < c < 1.8e12

    def test_unit_transverse_length(self):
        # L_x = L_y = 1 m by choosing omega = hbar/m
        m = 1.44316060e-25
        p = make_params(mass=m, omega_x=HBAR / m, omega_y=HBAR / m,
                        scattering_length=0.0)
        assert p.transverse_length == pytest.approx(1.0, rel=1e-12)
        c = bf.transverse_overlap(p, bf.Regime.NON_INTERACTING)
        assert c == pytest.approx(1 / (2 * math.pi), rel=1e-12)

    def test_crossover_identity(self):
        # N a_s = (8/9) L_z makes the two closed forms coincide
        n = 1000
        lz = 15e-6
        p = make_params(atom_count=n, scattering_length=(8 / 9) * lz / n,
                        box_halflength=lz)
        with pytest.warns(UserWarning):
            weak = bf.transverse_overlap(p, bf.Regime.NON_INTERACTING)
        tf = bf.transverse_overlap(p, bf.Regime.WEAKLY_INTERACTING)
        assert tf == pytest.approx(weak, rel=1e-12)

    def test_zero_as_rejected_in_tf_regime(self):
        p = make_params(scattering_length=0.0)
        with pytest.warns(UserWarning), pytest.raises(DomainError):
            bf.transverse_overlap(p, bf.Regime.WEAKLY_INTERACTING)

    def test_inconsistent_regime_warns(self, params):
        with pytest.warns(UserWarning, match="suggests"):
            bf.transverse_overlap(params, bf.Regime.NON_INTERACTING)


class TestInteractionRatio:
    def test_reference_band(self, params):
        assert 240 < bf.interaction_ratio(params) < 250

    def test_unit_cases(self, params):
        p = make_params(scattering_length=params.transverse_length / 10_000)
        assert bf.interaction_ratio(p) == pytest.approx(1.0, rel=1e-9)
        assert bf.interaction_ratio(make_params(scattering_length=0.0)) == 0.0


class TestTFChemicalPotential:
    def test_quadrature_oracle(self, params, units):
        """Root-solve the normalization integral of the 3D profile (dimensionless)."""
        wx = params.omega_x / params.omega_z
        wy = params.omega_y / params.omega_z
        u = units.coupling_3d_from_si(
            bf.contact_coupling(params) * params.atom_count)

        def norm_integral(mu):
            # density (mu - V)/u over the transverse ellipse, times the 2 L_z box;
            # the inner range tracks the ellipse so the integrand stays smooth
            bx = math.sqrt(2 * mu) / wx

            def ylim(x):
                return math.sqrt(max(2 * mu - wx**2 * x**2, 0.0)) / wy

            val, _ = dblquad(
                lambda y, x: mu - 0.5 * (wx**2 * x**2 + wy**2 * y**2),
                -bx, bx, lambda x: -ylim(x), ylim,
                epsabs=1e-12, epsrel=1e-11)
            return 2.0 * val / u

        mu_formula = units.energy_from_si(bf.tf_chemical_potential(params))
        mu_oracle = brentq(lambda m: norm_integral(m) - 1.0,
                           0.5 * mu_formula, 2.0 * mu_formula, xtol=1e-8)
        assert mu_formula == pytest.approx(mu_oracle, rel=1e-6)

    def test_sqrt_n_scaling(self, params):
        p4 = make_params(atom_count=4 * params.atom_count)
        assert bf.tf_chemical_potential(p4) == pytest.approx(
            2 * bf.tf_chemical_potential(params), rel=1e-12)

    def test_isotropic_reduction(self, params):
        # omega_x = omega_y: formula reduces to the cylindrical form
        mu = bf.tf_chemical_potential(params)
        g = bf.contact_coupling(params)
        cyl = math.sqrt(params.mass * g * params.atom_count * params.omega_perp**2
                        / (2 * math.pi * params.box_halflength))
        assert mu == pytest.approx(cyl, rel=1e-14)

    def test_rejects_zero_as(self):
        with pytest.raises(DomainError):
            bf.tf_chemical_potential(make_params(scattering_length=0.0))


class TestTFEnergy:
    def test_exact_ratio(self, params):
        mu = bf.tf_chemical_potential(params)
        e = bf.tf_total_energy(params)
        assert e / (params.atom_count * mu) == pytest.approx(2.0 / 3.0, rel=1e-14)

    def test_prefactor(self):
        assert 2 * math.sqrt(2) / 3 == pytest.approx(0.943, abs=5e-4)

    def test_per_particle_estimate(self, params):
        # per-particle form against hand arithmetic in units of hbar omega_perp
        ratio = bf.tf_energy_per_particle(params) / (HBAR * params.omega_perp)
        expected = (2 * math.sqrt(2) / 3) * math.sqrt(
            params.atom_count * params.scattering_length / params.box_halflength)
        assert ratio == pytest.approx(expected, rel=1e-12)
        assert ratio == pytest.approx(1.771, abs=2e-3)

    def test_consistency_with_total(self, params):
        assert bf.tf_energy_per_particle(params) * params.atom_count == pytest.approx(
            bf.tf_total_energy(params), rel=1e-12)


class TestTransverseOffset:
    def test_isotropic_gaussian_case(self):
        p = make_params(scattering_length=0.0)
        e0 = bf.transverse_energy_offset(p, bf.Regime.NON_INTERACTING)
        assert e0 == pytest.approx(HBAR * p.omega_x, rel=1e-12)

    def test_tf_third_of_mu(self, params):
        e0 = bf.transverse_energy_offset(params, bf.Regime.WEAKLY_INTERACTING)
        assert e0 == pytest.approx(bf.tf_chemical_potential(params) / 3, rel=1e-14)

    def test_gaussian_quadrature_oracle(self):
        """2D quadrature of the kinetic-plus-trap functional, anisotropic case."""
        p = make_params(scattering_length=0.0, omega_y=2 * math.pi * 4.0e3)
        wx = p.omega_x / p.omega_z
        wy = p.omega_y / p.omega_z
        lx, ly = wx**-0.5, wy**-0.5

        def integrand(y, x):
            phi2 = math.exp(-x**2 / lx**2 - y**2 / ly**2) / (math.pi * lx * ly)
            kin = -0.5 * ((x**2 / lx**4 - 1 / lx**2) + (y**2 / ly**4 - 1 / ly**2))
            pot = 0.5 * (wx**2 * x**2 + wy**2 * y**2)
            return (kin + pot) * phi2

        lim = 8 * max(lx, ly)
        val, _ = dblquad(integrand, -lim, lim, lambda x: -lim, lambda x: lim,
                         epsabs=1e-12, epsrel=1e-12)
        expected = 0.5 * (wx + wy)
        assert val == pytest.approx(expected, rel=1e-8)
        e0 = bf.transverse_energy_offset(p, bf.Regime.NON_INTERACTING)
        assert e0 / (HBAR * p.omega_z) == pytest.approx(val, rel=1e-10)


class TestUnitSystem:
    def test_consistency_invariant(self, params, units):
        assert units.energy == pytest.approx(
            HBAR**2 / (params.mass * units.length**2), rel=1e-14)

    def test_round_trips(self, units, rng):
        for _ in range(20):
            x = float(rng.uniform(1e-9, 1e-3))
            assert units.length_to_si(units.length_from_si(x)) == pytest.approx(x, rel=1e-12)
            assert units.time_to_si(units.time_from_si(x)) == pytest.approx(x, rel=1e-12)
            assert units.energy_to_si(units.energy_from_si(x)) == pytest.approx(x, rel=1e-12)
            assert units.coupling_1d_to_si(units.coupling_1d_from_si(x)) == pytest.approx(x, rel=1e-12)

    def test_coupling_composition_paths(self, params, units):
        """SI-then-nondimensionalize equals composing dimensionless factors."""
        si_path = units.coupling_1d_from_si(
            bf.effective_coupling_1d(params, bf.Regime.WEAKLY_INTERACTING))
        g3d_star = 4 * math.pi * (params.scattering_length / units.length)
        c_star = (bf.transverse_overlap(params, bf.Regime.WEAKLY_INTERACTING)
                  * units.length**2)
        assert g3d_star * params.atom_count * c_star == pytest.approx(si_path, rel=1e-12)


class TestInteractionParams:
    def test_bundle(self, params):
        ip = bf.InteractionParams.from_params(params, bf.Regime.WEAKLY_INTERACTING)
        assert ip.g_tilde == pytest.approx(
            ip.g3d * params.atom_count * ip.c_perp, rel=1e-14)
        assert ip.regime is bf.Regime.WEAKLY_INTERACTING

    def test_validation(self):
        with pytest.raises(ValueError):
            make_params(atom_count=0)
        with pytest.raises(ValueError):
            make_params(mass=-1.0)
        with pytest.raises(ValueError):
            make_params(scattering_length=-1e-9)
