import math

import numpy as np
import pytest

import becfocus as bf
from becfocus.grids import GridError


class TestGrid1D:
    def test_basic_lattice(self):
        g = bf.make_grid_1d(64, -1.0, 1.0)
        assert g.dz == pytest.approx(1 / 32)
        assert g.dp == pytest.approx(math.pi)
        assert g.z[0] == -1.0
        assert g.p_sorted[0] == pytest.approx(-math.pi / g.dz)
        assert np.all(np.diff(g.p_sorted) > 0)

    def test_production_grid(self):
        g = bf.make_grid_1d(4096, -12.0, 12.0)
        assert g.n_points == 4096
        assert 0.0 in g.z  # on-axis readout lands on a lattice point

    def test_degenerate_interval(self):
        with pytest.raises(GridError):
            bf.make_grid_1d(128, 0.0, 0.0)

    def test_non_power_of_two(self):
        with pytest.raises(GridError):
            bf.make_grid_1d(100, -1.0, 1.0)
        with pytest.raises(GridError):
            bf.make_grid_1d(32, -1.0, 1.0)


def gaussian_state(grid, sigma=1.0):
    values = np.exp(-grid.z**2 / (2 * sigma**2)).astype(np.complex128)
    return bf.normalize(bf.WaveFunction(grid, values))


class TestMomentumTransform:
    def test_gaussian_self_conjugate(self):
        grid = bf.make_grid_1d(512, -20.0, 20.0)
        phi = gaussian_state(grid)
        phi_p = bf.to_momentum(phi)
        expected = math.pi**-0.25 * np.exp(-phi_p.grid.z**2 / 2)
        assert np.abs(phi_p.values - expected).max() < 1e-12

    def test_constant_is_momentum_delta(self):
        grid = bf.make_grid_1d(256, -8.0, 8.0)
        phi = bf.normalize(bf.WaveFunction(grid, np.ones(256, dtype=complex)))
        phi_p = bf.to_momentum(phi)
        mags = np.abs(phi_p.values)
        k0 = int(np.argmin(np.abs(phi_p.grid.z)))
        assert np.argmax(mags) == k0
        others = np.delete(mags, k0)
        assert others.max() < 1e-12 * mags[k0]

    def test_rectangle_sinc_profile(self):
        """Sampled top-hat against the closed-form transform at 5 momenta."""
        grid = bf.make_grid_1d(8192, -20.0, 20.0)
        h = 0.8
        halfw = 1 / (2 * h * h)
        # align the edges mid-pixel so sampling matches the midpoint rule
        halfw = (math.floor(halfw / grid.dz) + 0.5) * grid.dz
        amp = 1 / math.sqrt(2 * halfw)
        phi = bf.WaveFunction(grid, np.where(np.abs(grid.z) < halfw, amp, 0.0
                                             ).astype(np.complex128))
        phi_p = bf.to_momentum(phi)
        p = phi_p.grid.z
        for target in (0.5, 2.0, 5.0, 11.0, 23.0):
            k = int(np.argmin(np.abs(p - target)))
            exact = amp * 2 * math.sin(p[k] * halfw) / (p[k] * math.sqrt(2 * math.pi))
            assert phi_p.values[k].real == pytest.approx(exact, abs=5e-5)
            assert abs(phi_p.values[k].imag) < 1e-12

    def test_round_trip_identity(self, rng):
        grid = bf.make_grid_1d(256, -5.0, 11.0)  # deliberately off-center window
        values = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        phi = bf.normalize(bf.WaveFunction(grid, values))
        back = bf.to_position(bf.to_momentum(phi), grid)
        assert np.abs(back.values - phi.values).max() < 1e-12

    def test_parseval(self, rng):
        grid = bf.make_grid_1d(512, -7.0, 7.0)
        values = rng.standard_normal(512) + 1j * rng.standard_normal(512)
        phi = bf.normalize(bf.WaveFunction(grid, values))
        assert abs(bf.norm(bf.to_momentum(phi)) - 1.0) < 1e-12

    def test_double_transform_rejected(self):
        grid = bf.make_grid_1d(64, -1.0, 1.0)
        phi_p = bf.to_momentum(gaussian_state(grid, 0.2))
        with pytest.raises(GridError):
            bf.to_momentum(phi_p)


class TestNormOverlap:
    def test_normalize_scaling(self):
        grid = bf.make_grid_1d(128, -6.0, 6.0)
        phi = gaussian_state(grid)
        doubled = bf.WaveFunction(grid, 2 * phi.values)
        renorm = bf.normalize(doubled)
        assert np.abs(renorm.values - phi.values).max() < 1e-14

    def test_self_overlap(self):
        grid = bf.make_grid_1d(128, -6.0, 6.0)
        phi = gaussian_state(grid)
        assert bf.overlap(phi, phi) == pytest.approx(1.0, rel=1e-12)

    def test_disjoint_rectangles(self):
        grid = bf.make_grid_1d(256, -4.0, 4.0)
        left = np.where((grid.z > -3) & (grid.z < -1), 1.0, 0.0)
        right = np.where((grid.z > 1) & (grid.z < 3), 1.0, 0.0)
        a = bf.normalize(bf.WaveFunction(grid, left.astype(complex)))
        b = bf.normalize(bf.WaveFunction(grid, right.astype(complex)))
        assert bf.overlap(a, b) == 0

    def test_zero_field_rejected(self):
        grid = bf.make_grid_1d(64, -1.0, 1.0)
        with pytest.raises(GridError):
            bf.normalize(bf.WaveFunction(grid, np.zeros(64, dtype=complex)))

    def test_probability_density(self):
        grid = bf.make_grid_1d(64, -1.0, 1.0)
        phi = bf.WaveFunction(grid, (1 + 1j) * np.ones(64))
        assert np.all(bf.probability_density(phi) == pytest.approx(2.0))


class TestQuadratureAccuracy:
    def test_sampled_gaussian_integral(self):
        # rectangle rule on a periodic lattice is spectrally accurate
        grid = bf.make_grid_1d(64, -8.0, 8.0)  # dz = 0.25
        dens = np.exp(-grid.z**2)
        total = float(dens.sum() * grid.dz)
        assert abs(total - math.sqrt(math.pi)) < 1e-13


class TestResample:
    def test_up_down_round_trip(self):
        grid = bf.make_grid_1d(256, -10.0, 10.0)
        phi = gaussian_state(grid, 1.3)
        up = bf.resample(phi, 512)
        down = bf.resample(up, 256)
        assert np.abs(down.values - phi.values).max() < 1e-12

    def test_band_limited_exactness(self):
        grid = bf.make_grid_1d(256, -10.0, 10.0)
        phi = gaussian_state(grid)
        fine = bf.resample(phi, 1024)
        expected = math.pi**-0.25 * np.exp(-fine.grid.z**2 / 2)
        expected /= math.sqrt(float((expected**2).sum()) * fine.grid.dz)
        assert np.abs(fine.values - expected).max() < 1e-10


class TestGrid3D:
    def test_shape_and_measure(self):
        axis = bf.make_grid_1d(64, -1.0, 1.0)
        g3 = bf.Grid3D(axis, axis, bf.make_grid_1d(128, -4.0, 4.0))
        assert g3.shape == (64, 64, 128)
        assert g3.dv == pytest.approx(axis.dz**2 * (8 / 128))

    def test_wavefunction_shape_check(self):
        axis = bf.make_grid_1d(64, -1.0, 1.0)
        g3 = bf.Grid3D(axis, axis, axis)
        with pytest.raises(GridError):
            bf.WaveFunction(g3, np.zeros((64, 64, 32), dtype=complex))
