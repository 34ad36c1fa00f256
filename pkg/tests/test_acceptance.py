"""End-to-end acceptance checks with their stated tolerances.

Each test prints one pass line with the measured numbers so a suite run
doubles as a results summary.  The two short-time criteria in
`TestShortTimeApproximation` assert the stated tolerances verbatim even
though the measured physics exceeds them; see the test docstrings.
"""

import math
import time

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

import becfocus as bf
from becfocus.dynamics import EvolutionConfig, evolve_1d, phase_imprint
from becfocus.gpe3d import default_grid3, validate_quasi1d
from becfocus.groundstate import ItpConfig
from becfocus.potentials import tf_chemical_potential_1d, tf_radius_1d
from becfocus.sweep import SweepAxis, SweepConfig, gt_from_as, run_sweep
from becfocus.trajectories import DensityMovie, integrate_trajectory
from becfocus.units import BOHR_RADIUS
from becfocus.wigner import momentum_density_reference, shear, total_mass


def report(line):
    print(f"\n[acceptance] {line}")


class TestCriterion1FreeQuench:
    def test_focus_factor_and_time(self, quench_runs):
        t0 = time.perf_counter()
        trace, _, _ = quench_runs["free"]
        focus = bf.focusing_factor(trace)
        assert focus.bracketed
        assert focus.f == pytest.approx(1.78, abs=0.03)
        assert focus.t_f == pytest.approx(0.22, abs=0.01)
        report(f"criterion 1 PASS: a_f = 0 gives f = {focus.f:.4f} (1.78 +- 0.03), "
               f"t_f = {focus.t_f:.4f} (0.22 +- 0.01)")

    def test_runtime_budget(self, params, units, trap_l10, g_initial, default_grid):
        """Fresh ground state plus quench on the default grid, single-threaded."""
        t0 = time.perf_counter()
        ground, _ = bf.solve_ground_1d(trap_l10, g_initial, default_grid)
        cfg = EvolutionConfig(dt=1e-4, t_end=0.4, store_every=2,
                              monitor_boundary=False)
        trace, _ = evolve_1d(ground, 0.0, bf.Zero(), cfg)
        elapsed = time.perf_counter() - t0
        assert bf.focusing_factor(trace).f == pytest.approx(1.78, abs=0.03)
        assert elapsed < 60.0
        report(f"criterion 1 PASS: end-to-end run took {elapsed:.1f} s (< 60 s)")


class TestCriterion2InteractingQuench:
    def test_focus_factor_and_time(self, quench_runs):
        trace, _, _ = quench_runs["weak"]
        focus = bf.focusing_factor(trace)
        assert focus.bracketed
        assert focus.f == pytest.approx(1.25, abs=0.03)
        assert focus.t_f == pytest.approx(0.09, abs=0.01)
        report(f"criterion 2 PASS: a_f = 0.58 a0 gives f = {focus.f:.4f} "
               f"(1.25 +- 0.03), t_f = {focus.t_f:.4f} (0.09 +- 0.01)")


class TestCriterion3Rectangularity:
    def test_fidelity_curves(self, params, units, g_initial):
        t0 = time.perf_counter()
        grid = bf.Grid1D(8192, -4.0, 4.0)
        itp = ItpConfig(dtau=2.5e-5)
        ground_fid = {}
        tf_fid = {}
        for l in range(2, 13):
            spec = bf.lg_power_law(params, l, units)
            tf_fid[l] = bf.fidelity(bf.tf_profile(spec, g_initial, grid).wavefunction)
            state, _ = bf.solve_ground_1d(spec, g_initial, grid, itp)
            ground_fid[l] = bf.fidelity(state)
        elapsed = time.perf_counter() - t0
        assert ground_fid[10] >= 0.99
        assert all(tf_fid[l] > 0.99 for l in (10, 11, 12))
        assert all(tf_fid[l] < 0.99 for l in (2, 3, 4))
        assert elapsed < 300.0
        report(f"criterion 3 PASS: ground-state fidelity(l=10) = "
               f"{ground_fid[10]:.4f} >= 0.99; analytic curve "
               f"{tf_fid[10]:.4f}/{tf_fid[11]:.4f}/{tf_fid[12]:.4f} for "
               f"l = 10/11/12; curve runtime {elapsed:.0f} s (< 300 s)")


class TestCriterion4DerivedConstants:
    def test_reference_values(self, params, units):
        ratio = bf.interaction_ratio(params)
        c_perp = bf.transverse_overlap(params, bf.Regime.WEAKLY_INTERACTING)
        g_ref = gt_from_as(100 * BOHR_RADIUS, params, bf.Regime.WEAKLY_INTERACTING)
        assert 240 <= ratio <= 250
        assert 1.6e12 <= c_perp <= 1.8e12
        assert g_ref == pytest.approx(17129.71, rel=0.01)
        report(f"criterion 4 PASS: N a_s/L_perp = {ratio:.2f}, "
               f"c_perp = {c_perp:.3e} /m^2, g_i = {g_ref:.2f} (17129.71 +- 1%)")


class TestCriterion5FreeSlitOracle:
    def test_rectangle_against_propagator_quadrature(self):
        h = 0.712734987860651
        a = 1 / (2 * h * h)
        grid = bf.Grid1D(32768, -96.0, 96.0)
        rect = bf.rectangle_state(h, grid)
        cfg = EvolutionConfig(dt=1e-4, t_end=0.4, store_every=2,
                              monitor_boundary=False)
        trace, _ = evolve_1d(rect, 0.0, bf.Zero(), cfg)
        focus = bf.focusing_factor(trace)

        def oracle(t):
            re = quad(lambda z: math.cos(z * z / (2 * t)), -a, a, limit=400)[0]
            im = quad(lambda z: math.sin(z * z / (2 * t)), -a, a, limit=400)[0]
            return (re * re + im * im) / (2 * math.pi * t)

        res = minimize_scalar(lambda t: -oracle(t), bounds=(0.05, 0.4),
                              method="bounded", options={"xatol": 1e-12})
        f_oracle = -res.fun
        assert focus.f == pytest.approx(f_oracle, rel=0.01)
        assert f_oracle == pytest.approx(1.8, abs=0.01)
        report(f"criterion 5 PASS: free top-hat f = {focus.f:.4f} vs "
               f"quadrature oracle {f_oracle:.4f} (within 1%), both near 1.8")


class TestCriterion6SweepMonotonicity:
    @pytest.fixture(scope="class")
    def fig4_sweeps(self, params):
        axes = [SweepAxis("l", (2, 6, 10, 12)),
                SweepAxis.linear("a_s_f", 0.0, 2.0 * BOHR_RADIUS, 15)]
        out = {}
        for mode in ("ground_state", "rectangle"):
            cfg = SweepConfig(params=params, axes=axes, initial_state=mode,
                              grid=bf.Grid1D(4096, -12.0, 12.0),
                              evolution=EvolutionConfig(dt=1e-4, t_end=0.4,
                                                        store_every=2,
                                                        monitor_boundary=False))
            out[mode] = run_sweep(cfg)
        return out

    @staticmethod
    def curves(result):
        by_l = {}
        for cell in result.cells:
            by_l.setdefault(int(cell.coordinates["l"]), []).append(cell)
        return by_l

    def test_monotone_in_final_scattering_length(self, fig4_sweeps):
        for mode, result in fig4_sweeps.items():
            assert result.metadata["failed"] == 0
            for l, cells in self.curves(result).items():
                fs = np.array([c.f for c in cells])
                tfs = np.array([c.t_f for c in cells])
                assert np.all(np.diff(fs) <= 1e-9), (mode, l, fs)
                assert np.all(np.diff(tfs) <= 1e-9), (mode, l, tfs)
        report("criterion 6 PASS: f and t_f nonincreasing in a_f over 15 "
               "points for l = 2, 6, 10, 12, both initial-state modes")

    def test_rectangle_matches_ground_state_focal_time(self, fig4_sweeps):
        ground = self.curves(fig4_sweeps["ground_state"])[10]
        rect = self.curves(fig4_sweeps["rectangle"])[10]
        gaps = [abs(g.t_f - r.t_f) / g.t_f for g, r in zip(ground, rect)]
        assert max(gaps) < 0.05
        report(f"criterion 6 PASS: rectangle-initial t_f within "
               f"{max(gaps):.2%} of the ground-state t_f across the axis (< 5%)")


@pytest.mark.slow
class TestCriterion7Validation3D:
    @pytest.fixture(scope="class")
    def reports(self, params):
        grid1 = bf.Grid1D(4096, -12.0, 12.0)
        grid3 = default_grid3(params, grid1)
        evo1 = EvolutionConfig(dt=1e-4, t_end=0.25, store_every=2,
                               monitor_boundary=False)
        evo3 = EvolutionConfig(dt=4e-5, t_end=0.25, store_every=5,
                               monitor_boundary=False)
        out = {}
        ground3 = None
        t0 = time.perf_counter()
        for asf_a0 in (0.0, 0.58):
            rep = validate_quasi1d(params, asf_a0 * BOHR_RADIUS, grid3, grid1,
                                   evolution_1d=evo1, evolution_3d=evo3,
                                   ground_3d=ground3)
            ground3 = rep.ground_3d
            out[asf_a0] = rep
        out["runtime"] = time.perf_counter() - t0
        return out

    def test_tf_coupling_wins_and_rms_bound(self, reports):
        for asf in (0.0, 0.58):
            rep = reports[asf]
            assert rep.rms_tf < rep.rms_weak, asf
            assert rep.rms_tf < 0.05, asf
        report(f"criterion 7 PASS: rms_tf = {reports[0.0].rms_tf:.4f}/"
               f"{reports[0.58].rms_tf:.4f} beats rms_weak = "
               f"{reports[0.0].rms_weak:.4f}/{reports[0.58].rms_weak:.4f} "
               f"for a_f = 0/0.58 a0; both under 0.05")

    def test_3d_focus_consistency(self, reports):
        assert reports[0.0].focus_3d.t_f == pytest.approx(0.22, abs=0.015)
        assert reports[0.58].focus_3d.t_f == pytest.approx(0.09, abs=0.015)

    def test_3d_ground_state_quality(self, reports, params, units):
        mu_tf = units.energy_from_si(bf.tf_chemical_potential(params))
        excess = reports[0.0].mu_3d / mu_tf - 1
        # the closed form omits all kinetic energy; the measured excess is
        # grid-converged physics (identical at 64 and 128 transverse points)
        assert 0.0 < excess < 0.12
        report(f"criterion 7 PASS: 3D mu = {reports[0.0].mu_3d:.0f} sits "
               f"{excess:.1%} above the kinetic-free estimate {mu_tf:.0f}")

    def test_runtime_budget(self, reports):
        assert reports["runtime"] < 1800
        report(f"criterion 7 PASS: both quenches validated in "
               f"{reports['runtime'] / 60:.1f} min (< 30 min)")


class TestCriterion8WignerSuite:
    def test_marginals_normalization_positivity(self):
        grid = bf.Grid1D(512, -10.0, 10.0)
        gauss = bf.normalize(bf.WaveFunction(
            grid, (math.pi**-0.25 * np.exp(-grid.z**2 / 2)).astype(complex)))
        wg = bf.wigner_transform(gauss)
        pos_err = np.abs(bf.marginal_position(wg)
                         - bf.probability_density(gauss)).max()
        mom_err = np.abs(bf.marginal_momentum(wg)
                         - momentum_density_reference(gauss)).max()
        assert pos_err < 1e-8
        assert mom_err < 1e-6
        assert total_mass(wg) == pytest.approx(1.0, abs=1e-6)
        assert wg.w.min() >= -1e-9
        report(f"criterion 8 PASS: marginals match to {pos_err:.1e}/{mom_err:.1e} "
               f"(z/p), mass 1 +- 1e-6, Gaussian min W = {wg.w.min():.1e} >= -1e-9")

    def test_shear_equivalence(self):
        grid = bf.Grid1D(512, -10.0, 10.0)
        gauss = bf.normalize(bf.WaveFunction(
            grid, (math.pi**-0.25 * np.exp(-grid.z**2 / 2)).astype(complex)))
        w0 = bf.wigner_transform(gauss)
        cfg = EvolutionConfig(dt=1e-4, t_end=0.5, store_every=100,
                              monitor_boundary=False)
        _, evolved = evolve_1d(gauss, 0.0, bf.Zero(), cfg)
        rms = math.sqrt(float(((bf.wigner_transform(evolved).w
                                - shear(w0, 0.5))**2).mean()))
        assert rms < 1e-3
        report(f"criterion 8 PASS: free-evolution shear equivalence RMS = {rms:.1e}")

    def test_box_state_negativity(self, trap_l10, g_initial):
        grid = bf.Grid1D(2048, -3.0, 3.0)
        state, _ = bf.solve_ground_1d(trap_l10, g_initial, grid)
        wg = bf.wigner_transform(state)
        pos_err = np.abs(bf.marginal_position(wg)
                         - bf.probability_density(state)).max()
        mom_err = np.abs(bf.marginal_momentum(wg)
                         - momentum_density_reference(state)).max()
        assert pos_err < 1e-8 and mom_err < 1e-6
        assert wg.w.min() < -0.01 * wg.w.max()
        report(f"criterion 8 PASS: box ground state has negativity "
               f"min W = {wg.w.min():.3f} < -1% of max W = {wg.w.max():.3f}")


class TestCriterion9SolverProperties:
    def test_norm_and_energy_drift(self):
        grid = bf.Grid1D(2048, -24.0, 24.0)
        phi = bf.normalize(bf.WaveFunction(
            grid, np.exp(-grid.z**2 / 2).astype(complex)))

        def energy(wf, g):
            ft = np.fft.fft(wf.values)
            kin = float(np.sum(0.5 * grid.p_fft**2 * np.abs(ft)**2)
                        * grid.dz / grid.n_points)
            dens = bf.probability_density(wf)
            return kin + 0.5 * g * float(np.sum(dens**2) * grid.dz)

        cfg = EvolutionConfig(dt=1e-4, t_end=1.0, store_every=1000,
                              monitor_boundary=False)
        _, f1 = evolve_1d(phi, 99.0, bf.Zero(), cfg)
        norm_drift = abs(bf.norm(f1) - 1.0)
        _, f2 = evolve_1d(phi, 1.0, bf.Zero(), cfg)
        e_drift = abs(energy(f2, 1.0) - energy(phi, 1.0)) / energy(phi, 1.0)
        assert norm_drift < 1e-10
        assert e_drift < 1e-8
        report(f"criterion 9 PASS: norm drift {norm_drift:.1e} per 1e4 steps, "
               f"free-run energy drift {e_drift:.1e}")

    def test_second_order_convergence(self):
        grid = bf.Grid1D(2048, -24.0, 24.0)
        phi = bf.normalize(bf.WaveFunction(
            grid, np.exp(-(grid.z / 1.5)**4).astype(complex)))
        fs = {}
        for dt, every in ((4e-3, 1), (2e-3, 2), (5e-4, 8)):
            cfg = EvolutionConfig(dt=dt, t_end=0.8, store_every=every,
                                  monitor_boundary=False)
            trace, _ = evolve_1d(phi, 30.0, bf.Zero(), cfg)
            fs[dt] = bf.focusing_factor(trace).f
        ratio = (fs[4e-3] - fs[5e-4]) / (fs[2e-3] - fs[5e-4])
        assert 3.5 <= ratio <= 4.5
        report(f"criterion 9 PASS: halving dt shrinks the focus error by "
               f"{ratio:.2f}x (target 4x, band [3.5, 4.5])")

    def test_relaxation_oracles(self):
        grid = bf.Grid1D(1024, -12.0, 12.0)
        _, harm = bf.solve_ground_1d(bf.LGPowerLaw(1, 1.0, 0.5), 0.0, grid)
        boxgrid = bf.Grid1D(1024, -2.0, 2.0)
        _, box = bf.solve_ground_1d(bf.HardBox(1.0), 0.0, boxgrid)
        assert harm.energy == pytest.approx(0.5, abs=1e-6)
        assert box.energy == pytest.approx(math.pi**2 / 8, abs=1e-5)
        report(f"criterion 9 PASS: relaxation reproduces E = 1/2 "
               f"({harm.energy:.10f}) and E = pi^2/8 ({box.energy:.10f})")


class TestCriterion10ShortTime:
    """Stated tolerances for the short-time checks at t = 0.005.

    Both assertions fail for physical reasons: the quench releases the
    healing-layer kinetic pressure of the initial state on a 1e-4 time
    scale, so no phase-only window survives to t = 0.005.  The measured
    gap is L2 ~ 0.11 (vs the stated 1e-3) and the local momentum-kick law
    is off by ~25% at any point with measurable density gradient.  The
    tests assert the stated numbers anyway; see the decisions ledger.
    """

    def test_phase_imprint_l2(self, ground_l10, g_initial):
        ground, _ = ground_l10
        g_f = g_initial * 0.58 / 100
        t = 0.005
        imprinted = phase_imprint(ground, g_f, t)
        cfg = EvolutionConfig(dt=1e-4, t_end=t, store_every=10,
                              monitor_boundary=False)
        _, evolved = evolve_1d(ground, g_f, bf.Zero(), cfg)
        l2 = math.sqrt(float(np.sum(np.abs(imprinted.values - evolved.values)**2))
                       * ground.grid.dz)
        report(f"criterion 10: phase-imprint L2 gap at t = 0.005 measures {l2:.4f} "
               "(stated bound 1e-3)")
        assert l2 < 1e-3

    def test_momentum_kick_law(self, quench_runs, g_initial):
        trace, _, g_f = quench_runs["weak"]
        grid = bf.Grid1D(4096, -12.0, 12.0)
        movie = DensityMovie.from_trace(grid, trace)
        t = 0.005
        z0 = 0.9  # on the outer density slope
        traj = integrate_trajectory((z0, 0.0), movie, g_f, t_end=t, dt=1e-5)
        grad0 = movie.gradient(z0, 0.0)
        predicted = -g_f * t * grad0
        rel = abs(traj.p[-1] - predicted) / abs(predicted)
        report(f"criterion 10: instantaneous kick law deviates by {rel:.1%} "
               "at t = 0.005 (stated bound 1%)")
        assert rel < 0.01


class TestCriterion11ThomasFermiOracles:
    def test_profile_normalization_identity(self, trap_l10, g_initial):
        l = trap_l10.l
        mu = tf_chemical_potential_1d(trap_l10, g_initial)
        z_tf = tf_radius_1d(trap_l10, g_initial)
        identity = (4 * l / (2 * l + 1)) * (mu / g_initial) * z_tf
        assert identity == pytest.approx(1.0, abs=1e-10)
        report(f"criterion 11 PASS: profile normalization identity = "
               f"{identity:.12f} (1 +- 1e-10)")

    def test_mu_against_quadrature(self, params, units):
        from scipy.integrate import dblquad
        from scipy.optimize import brentq
        wx = params.omega_x / params.omega_z
        wy = params.omega_y / params.omega_z
        u = units.coupling_3d_from_si(
            bf.contact_coupling(params) * params.atom_count)

        def norm_integral(mu):
            bx = math.sqrt(2 * mu) / wx

            def ylim(x):
                return math.sqrt(max(2 * mu - wx**2 * x**2, 0.0)) / wy

            val, _ = dblquad(lambda y, x: mu - 0.5 * (wx**2 * x**2 + wy**2 * y**2),
                             -bx, bx, lambda x: -ylim(x), ylim,
                             epsabs=1e-12, epsrel=1e-11)
            return 2.0 * val / u

        mu_formula = units.energy_from_si(bf.tf_chemical_potential(params))
        mu_oracle = brentq(lambda m: norm_integral(m) - 1.0,
                           0.5 * mu_formula, 2.0 * mu_formula, xtol=1e-8)
        assert mu_formula == pytest.approx(mu_oracle, rel=1e-6)
        report(f"criterion 11 PASS: closed-form mu = {mu_formula:.4f} matches "
               f"quadrature root {mu_oracle:.4f} to 1e-6")

    def test_energy_ratio_exact(self, params):
        e = bf.tf_total_energy(params)
        mu = bf.tf_chemical_potential(params)
        assert e == (2.0 / 3.0) * params.atom_count * mu
        report("criterion 11 PASS: E = (2/3) N mu holds exactly")
