import math

import numpy as np
import pytest

from tomocirc.errors import ValidationError
from tomocirc.gaussian import (
    GaussianState,
    ReferenceFrame,
    quadrature_stats,
    squeezed_state,
    tomogram_density,
    vacuum_state,
)
from tomocirc.tomography import (
    CharacteristicSlice,
    UniformAxis,
    WignerGrid,
    characteristic_slice,
    forward_slices,
    gaussian_slices,
    optical_slice,
    radon_forward,
    radon_inverse,
    tomogram_to_csv,
    wigner_of_gaussian,
    wigner_to_csv,
)

AXIS_129 = UniformAxis(-6.0, 6.0, 129)
AXIS_257 = UniformAxis(-6.0, 6.0, 257)
J_AXIS = UniformAxis(-9.0, 9.0, 515)


def vacuum_grid(axis=AXIS_129):
    return wigner_of_gaussian(vacuum_state(1), axis, axis)


class TestWignerOfGaussian:
    def test_vacuum_peak(self):
        grid = vacuum_grid()
        assert float(np.max(grid.values)) == pytest.approx(1.0 / math.pi, rel=1e-12)

    def test_normalization(self):
        assert vacuum_grid().integral() == pytest.approx(1.0, abs=1e-6)

    def test_displaced_peak_location(self):
        st0 = GaussianState(1, [1.0, 0.0], 0.5 * np.eye(2))
        grid = wigner_of_gaussian(st0, AXIS_129, AXIS_129)
        i, j = np.unravel_index(np.argmax(grid.values), grid.values.shape)
        nearest = AXIS_129.points()[np.argmin(np.abs(AXIS_129.points() - 1.0))]
        assert grid.i_axis[i] == nearest
        assert grid.v_axis[j] == pytest.approx(0.0, abs=1e-12)

    def test_narrow_axes_rejected(self):
        narrow = UniformAxis(-2.0, 2.0, 33)
        with pytest.raises(ValidationError, match="sigma"):
            wigner_of_gaussian(vacuum_state(1), narrow, narrow)

    def test_grid_invariants(self):
        with pytest.raises(ValidationError, match="points"):
            WignerGrid(UniformAxis(-6, 6, 8).points(), AXIS_129.points(), np.zeros((8, 129)))


class TestRadonForward:
    def test_vacuum_matches_analytic(self):
        grid = wigner_of_gaussian(vacuum_state(1), AXIS_257, AXIS_257)
        frame = ReferenceFrame(1.0, 0.0)
        tom = radon_forward(grid, frame, J_AXIS)
        analytic = tomogram_density(quadrature_stats(vacuum_state(1), frame), tom.j)
        assert float(np.max(np.abs(tom.w - analytic))) <= 1e-4

    def test_rotated_vacuum_variance(self):
        grid = vacuum_grid()
        theta = math.pi / 4
        tom = radon_forward(grid, ReferenceFrame(math.cos(theta), math.sin(theta)), J_AXIS)
        _, var = tom.moments()
        assert var == pytest.approx(0.5, abs=2e-4)

    def test_frame_scaling_variance(self):
        tom = radon_forward(vacuum_grid(), ReferenceFrame(2.0, 0.0), UniformAxis(-14, 14, 801))
        _, var = tom.moments()
        assert var == pytest.approx(2.0, abs=1e-3)

    def test_mass_preserved(self, rng):
        grid = wigner_of_gaussian(squeezed_state(0.4, angle=0.5), AXIS_129, AXIS_129)
        for _ in range(3):
            mu, nu = rng.uniform(-1.5, 1.5, 2)
            if mu * mu + nu * nu < 0.1:
                continue
            tom = radon_forward(grid, ReferenceFrame(mu, nu), UniformAxis(-16, 16, 901))
            assert float(np.trapezoid(tom.w, tom.j)) == pytest.approx(1.0, abs=1e-4)

    def test_clipping_rejected_with_mass_report(self):
        with pytest.raises(ValidationError, match="clips"):
            radon_forward(vacuum_grid(), ReferenceFrame(1.0, 0.0), UniformAxis(-0.5, 0.5, 64))

    def test_homogeneity_under_frame_scaling(self):
        # w(J; lam mu, lam nu) = w(J/lam; mu, nu) / lam, checked on samples
        grid = wigner_of_gaussian(squeezed_state(0.3), AXIS_257, AXIS_257)
        base = radon_forward(grid, ReferenceFrame(0.8, 0.6), J_AXIS)
        for lam in (0.5, 2.0):
            scaled = radon_forward(
                grid, ReferenceFrame(0.8 * lam, 0.6 * lam), UniformAxis(-9 * lam, 9 * lam, 515)
            )
            j_probe = np.linspace(-2.0, 2.0, 41)
            got = tomogram_density(scaled, lam * j_probe) * lam
            want = tomogram_density(base, j_probe)
            assert float(np.max(np.abs(got - want))) <= 1e-4


class TestOpticalSlice:
    def test_vacuum_any_angle(self):
        for theta in (0.0, 0.9, 2.4):
            tom = optical_slice(vacuum_state(1), theta, J_AXIS)
            _, var = tom.moments()
            assert var == pytest.approx(0.5, abs=1e-6)

    def test_squeezed_principal_variances(self):
        st0 = squeezed_state(0.6)
        _, var0 = optical_slice(st0, 0.0, J_AXIS).moments()
        _, var90 = optical_slice(st0, math.pi / 2, J_AXIS).moments()
        assert var0 == pytest.approx(0.5 * math.exp(1.2), rel=1e-6)
        assert var90 == pytest.approx(0.5 * math.exp(-1.2), rel=1e-6)

    def test_half_turn_mirrors(self):
        st0 = GaussianState(1, [0.8, -0.3], 0.5 * np.eye(2))
        theta = 0.7
        a = optical_slice(st0, theta, J_AXIS)
        b = optical_slice(st0, theta + math.pi, J_AXIS)
        np.testing.assert_allclose(b.w, a.w[::-1], rtol=0, atol=1e-12)


class TestCharacteristicSlice:
    def test_origin_normalization_enforced(self):
        r = np.linspace(-10, 10, 101)
        with pytest.raises(ValidationError, match="chi"):
            CharacteristicSlice(0.0, r, np.full(101, 0.99))

    def test_analytic_matches_numeric(self):
        st0 = GaussianState(1, [0.5, 0.2], 0.5 * np.eye(2))
        tom = quadrature_stats(st0, ReferenceFrame(1.0, 0.0))
        r_axis = UniformAxis(-12.0, 12.0, 257)
        analytic = characteristic_slice(tom, 0.0, r_axis)
        sampled = optical_slice(st0, 0.0, UniformAxis(-8.5, 9.5, 1001))
        numeric = characteristic_slice(sampled, 0.0, r_axis)
        assert float(np.max(np.abs(analytic.values - numeric.values))) <= 1e-6

    def test_json_round_trip(self):
        sl = gaussian_slices(vacuum_state(1), 32, UniformAxis(-8, 8, 65))[3]
        back = CharacteristicSlice.from_json(sl.to_json())
        np.testing.assert_allclose(back.values, sl.values, rtol=0, atol=1e-15)
        assert back.theta == sl.theta


class TestRadonInverse:
    def setup_method(self):
        self.axis = AXIS_129
        self.r_axis = UniformAxis.symmetric(math.pi / self.axis.spacing, 257)

    def test_vacuum_from_analytic_slices(self):
        slices = gaussian_slices(vacuum_state(1), 64, self.r_axis)
        recon = radon_inverse(slices, self.axis, self.axis)
        reference = vacuum_grid(self.axis)
        assert float(np.max(np.abs(recon.values - reference.values))) <= 5e-3

    def test_squeezed_round_trip(self):
        st0 = squeezed_state(0.5)
        reference = wigner_of_gaussian(st0, self.axis, self.axis)
        slices = forward_slices(reference, 64, J_AXIS, self.r_axis)
        recon = radon_inverse(slices, self.axis, self.axis)
        assert float(np.max(np.abs(recon.values - reference.values))) <= 1e-2

    def test_displaced_mean_recovery(self):
        st0 = GaussianState(1, [1.0, -0.5], 0.5 * np.eye(2))
        reference = wigner_of_gaussian(st0, self.axis, self.axis)
        slices = forward_slices(reference, 64, J_AXIS, self.r_axis)
        recon = radon_inverse(slices, self.axis, self.axis)
        i_mean = np.trapezoid(
            np.trapezoid(recon.values, recon.v_axis, axis=1) * recon.i_axis, recon.i_axis
        )
        v_mean = np.trapezoid(
            np.trapezoid(recon.values, recon.i_axis, axis=0) * recon.v_axis, recon.v_axis
        )
        assert abs(i_mean - 1.0) <= self.axis.spacing
        assert abs(v_mean + 0.5) <= self.axis.spacing

    def test_reconstruction_normalized(self):
        slices = gaussian_slices(squeezed_state(0.3), 48, self.r_axis)
        recon = radon_inverse(slices, self.axis, self.axis)
        assert recon.integral() == pytest.approx(1.0, abs=1e-2)

    def test_too_few_angles_rejected(self):
        slices = gaussian_slices(vacuum_state(1), 16, self.r_axis)
        with pytest.raises(ValidationError, match="angular"):
            radon_inverse(slices, self.axis, self.axis)

    def test_bandwidth_below_nyquist_rejected(self):
        slices = gaussian_slices(vacuum_state(1), 64, UniformAxis.symmetric(5.0, 65))
        with pytest.raises(ValidationError, match="Nyquist"):
            radon_inverse(slices, self.axis, self.axis)

    def test_nonuniform_angles_rejected(self):
        slices = gaussian_slices(vacuum_state(1), 64, self.r_axis)
        thetas = [s.theta for s in slices]
        bad = CharacteristicSlice(thetas[3] + 0.01, slices[3].r, slices[3].values)
        with pytest.raises(ValidationError, match="uniform"):
            radon_inverse(slices[:3] + [bad] + slices[4:], self.axis, self.axis)


class TestCsvExports:
    def test_wigner_csv(self, tmp_path):
        grid = vacuum_grid()
        path = tmp_path / "w.csv"
        wigner_to_csv(grid, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "I,V,W"
        assert len(lines) == 1 + 129 * 129
        i0, v0, w0 = map(float, lines[1].split(","))
        assert (i0, v0) == (-6.0, -6.0)
        assert w0 == pytest.approx(grid.values[0, 0], rel=1e-15)

    def test_tomogram_csv(self, tmp_path):
        tom = optical_slice(vacuum_state(1), 0.3, UniformAxis(-7, 7, 201))
        path = tmp_path / "t.csv"
        tomogram_to_csv(tom, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "J,w"
        assert len(lines) == 202
