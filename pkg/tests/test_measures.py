import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tomocirc.errors import ValidationError
from tomocirc.gaussian import (
    GaussianState,
    ReferenceFrame,
    quadrature_stats,
    random_frame,
    random_state,
    squeezed_state,
    tomogram_density,
    vacuum_state,
)
from tomocirc.measures import (
    MeasureResult,
    bounds_check,
    entropy_1mode,
    entropy_2mode,
    fidelity,
    fidelity_wigner_overlap,
    purity,
    tomographic_information,
)

UNIT_FRAME = ReferenceFrame(1.0, 0.0)
UNIT_FRAME_2 = ReferenceFrame((1.0, 1.0), (0.0, 0.0))

VACUUM_ENTROPY = 0.5 * math.log(math.pi * math.e)


def two_mode_correlated(rho: float) -> GaussianState:
    """Two-mode squeezed vacuum whose current-current correlation is rho."""
    r = 0.5 * math.atanh(rho)
    ch, sh = math.cosh(2 * r), math.sinh(2 * r)
    cov = 0.5 * np.array(
        [
            [ch, 0, sh, 0],
            [0, ch, 0, -sh],
            [sh, 0, ch, 0],
            [0, -sh, 0, ch],
        ]
    )
    return GaussianState(2, np.zeros(4), cov)


class TestEntropyOneMode:
    @pytest.mark.parametrize("theta", [0.0, 0.6, 1.9, 3.0])
    def test_vacuum_rotation_invariant(self, theta):
        frame = ReferenceFrame(math.cos(theta), math.sin(theta))
        res = entropy_1mode(vacuum_state(1), frame)
        assert res.value == pytest.approx(VACUUM_ENTROPY, abs=1e-12)

    def test_methods_agree_vacuum(self):
        cf = entropy_1mode(vacuum_state(1), UNIT_FRAME, "closed-form")
        q = entropy_1mode(vacuum_state(1), UNIT_FRAME, "quadrature")
        assert abs(cf.value - q.value) <= 1e-10

    def test_doubling_variance_adds_half_log_two(self):
        # frame scaled by sqrt(2) doubles sigma_J
        base = entropy_1mode(vacuum_state(1), UNIT_FRAME)
        doubled_cf = entropy_1mode(vacuum_state(1), ReferenceFrame(math.sqrt(2.0), 0.0))
        doubled_q = entropy_1mode(
            vacuum_state(1), ReferenceFrame(math.sqrt(2.0), 0.0), "quadrature"
        )
        assert doubled_cf.value - base.value == pytest.approx(0.5 * math.log(2.0), abs=1e-14)
        assert doubled_q.value - base.value == pytest.approx(0.5 * math.log(2.0), abs=1e-8)

    def test_frame_two_zero(self):
        res = entropy_1mode(vacuum_state(1), ReferenceFrame(2.0, 0.0))
        assert res.value == pytest.approx(0.5 * math.log(2 * math.pi * math.e * 2.0), abs=1e-14)

    def test_dual_path_random(self, rng):
        for _ in range(50):
            state = random_state(rng, 1)
            frame = random_frame(rng, 1)
            cf = entropy_1mode(state, frame, "closed-form").value
            q = entropy_1mode(state, frame, "quadrature").value
            assert abs(cf - q) <= 1e-7

    def test_unphysical_rejected(self):
        bad = GaussianState(1, [0, 0], np.diag([0.1, 0.1]))
        with pytest.raises(ValidationError, match="physicality"):
            entropy_1mode(bad, UNIT_FRAME)


class TestEntropyTwoMode:
    def test_vacuum_additive(self):
        res = entropy_2mode(vacuum_state(2), UNIT_FRAME_2)
        assert res.value == pytest.approx(math.log(math.pi * math.e), abs=1e-12)
        assert res.value == pytest.approx(2 * VACUUM_ENTROPY, abs=1e-12)

    def test_correlation_lowers_entropy(self):
        rho = 0.5
        state = two_mode_correlated(rho)
        s_corr = entropy_2mode(state, UNIT_FRAME_2).value
        # same marginal variances, correlation removed
        diag = GaussianState(2, np.zeros(4), np.diag(np.diag(state.cov)))
        s_uncorr = entropy_2mode(diag, UNIT_FRAME_2).value
        assert s_corr - s_uncorr == pytest.approx(0.5 * math.log(1 - rho**2), abs=1e-12)

    def test_methods_agree(self):
        state = two_mode_correlated(0.5)
        cf = entropy_2mode(state, UNIT_FRAME_2, "closed-form").value
        q = entropy_2mode(state, UNIT_FRAME_2, "quadrature").value
        assert abs(cf - q) <= 1e-7

    def test_mode_exchange_invariance(self, rng):
        swap = np.array([2, 3, 0, 1])
        for _ in range(10):
            state = random_state(rng, 2)
            frame = random_frame(rng, 2)
            swapped_state = GaussianState(2, state.mean[swap], state.cov[np.ix_(swap, swap)])
            swapped_frame = ReferenceFrame(frame.mu[::-1], frame.nu[::-1])
            a = entropy_2mode(state, frame).value
            b = entropy_2mode(swapped_state, swapped_frame).value
            assert a == pytest.approx(b, rel=1e-12)


class TestTomographicInformation:
    def test_product_state_zero(self, rng):
        for _ in range(5):
            frame = random_frame(rng, 2)
            res = tomographic_information(vacuum_state(2), frame)
            assert abs(res.value) <= 1e-9

    def test_known_correlation(self):
        state = two_mode_correlated(0.6)
        res = tomographic_information(state, UNIT_FRAME_2)
        assert res.value == pytest.approx(-0.5 * math.log(0.64), abs=1e-12)
        assert res.value == pytest.approx(0.22314355, abs=1e-7)

    def test_methods_agree(self):
        state = two_mode_correlated(0.6)
        cf = tomographic_information(state, UNIT_FRAME_2, "closed-form").value
        q = tomographic_information(state, UNIT_FRAME_2, "quadrature").value
        assert abs(cf - q) <= 1e-6

    def test_scale_invariance(self):
        state = two_mode_correlated(0.5)
        base = tomographic_information(state, UNIT_FRAME_2).value
        scaled = tomographic_information(
            state, ReferenceFrame((3.0, 0.25), (0.0, 0.0))
        ).value
        assert scaled == pytest.approx(base, rel=1e-12)

    def test_nonnegative(self, rng):
        for _ in range(20):
            state = random_state(rng, 2)
            frame = random_frame(rng, 2)
            assert tomographic_information(state, frame).value >= -1e-9

    def test_marginal_ignores_other_frame(self, rng):
        # the J1 marginal of the joint tomogram must not depend on (mu2, nu2)
        state = two_mode_correlated(0.5)
        j1 = np.linspace(-4, 4, 41)
        reference = None
        for mu2, nu2 in [(1.0, 0.0), (0.3, -1.2), (2.0, 2.0)]:
            frame = ReferenceFrame((1.0, mu2), (0.5, nu2))
            tom = quadrature_stats(state, frame)
            j2 = np.linspace(
                tom.mean[1] - 10 * math.sqrt(tom.cov[1, 1]),
                tom.mean[1] + 10 * math.sqrt(tom.cov[1, 1]),
                2001,
            )
            g1, g2 = np.meshgrid(j1, j2, indexing="ij")
            joint = tomogram_density(tom, np.stack([g1, g2], axis=-1))
            marginal = np.trapezoid(joint, j2, axis=1)
            if reference is None:
                reference = marginal
            np.testing.assert_allclose(marginal, reference, rtol=0, atol=1e-9)


class TestPurity:
    def test_vacuum(self):
        assert purity(vacuum_state(1)).value == pytest.approx(1.0, abs=1e-15)
        assert purity(vacuum_state(2)).value == pytest.approx(1.0, abs=1e-15)

    def test_thermal_like(self):
        state = GaussianState(1, [0, 0], np.diag([1.0, 1.0]))
        assert purity(state).value == pytest.approx(0.5, abs=1e-15)
        assert purity(state, "quadrature").value == pytest.approx(0.5, abs=1e-6)

    def test_squeezed_pure(self):
        assert purity(squeezed_state(1.0)).value == pytest.approx(1.0, rel=1e-12)

    def test_pure_iff_min_uncertainty(self, rng):
        for _ in range(30):
            state = random_state(rng, 1)
            p = purity(state).value
            assert p <= 1.0 + 1e-9
            det = float(np.linalg.det(state.cov))
            assert (abs(p - 1.0) <= 1e-9) == (abs(det - 0.25) <= 1e-9)

    def test_unphysical_rejected(self):
        bad = GaussianState(1, [0, 0], np.diag([0.1, 0.1]))
        with pytest.raises(ValidationError, match="physicality"):
            purity(bad)


class TestFidelity:
    def test_equal_vacua(self):
        assert fidelity(vacuum_state(1), vacuum_state(1)).value == pytest.approx(1.0, abs=1e-15)

    def test_displaced_overlap(self):
        shifted = GaussianState(1, [math.sqrt(2.0), 0.0], 0.5 * np.eye(2))
        res = fidelity(vacuum_state(1), shifted)
        assert res.value == pytest.approx(math.exp(-1.0), rel=1e-12)

    def test_vacuum_thermal(self):
        thermal = GaussianState(1, [0, 0], np.diag([1.0, 1.0]))
        res = fidelity(vacuum_state(1), thermal)
        assert res.value == pytest.approx(2.0 / 3.0, rel=1e-12)
        # independent Wigner-grid inner product
        assert fidelity_wigner_overlap(vacuum_state(1), thermal) == pytest.approx(
            2.0 / 3.0, abs=1e-6
        )

    def test_symmetric(self, rng):
        for _ in range(20):
            a = random_state(rng, 1)
            b = random_state(rng, 1)
            assert abs(fidelity(a, b).value - fidelity(b, a).value) <= 1e-10

    def test_self_fidelity_is_purity(self, rng):
        for n in (1, 2):
            for _ in range(15):
                state = random_state(rng, n)
                assert abs(fidelity(state, state).value - purity(state).value) <= 1e-9

    def test_mode_mismatch(self):
        with pytest.raises(ValidationError, match="mode count"):
            fidelity(vacuum_state(1), vacuum_state(2))

    def test_dual_path_and_wigner_oracle(self, rng):
        for _ in range(8):
            a = random_state(rng, 1, max_squeeze=0.25, max_thermal=1.0, max_mean=1.5)
            b = random_state(rng, 1, max_squeeze=0.25, max_thermal=1.0, max_mean=1.5)
            cf = fidelity(a, b).value
            assert abs(cf - fidelity(a, b, "quadrature").value) <= 1e-6
            assert abs(cf - fidelity_wigner_overlap(a, b)) <= 1e-4

    def test_two_mode_normalization(self, rng):
        # pure equal two-mode states must give exactly 1
        state = random_state(rng, 2, max_thermal=0.0)
        assert fidelity(state, state).value == pytest.approx(1.0, abs=1e-9)
        assert fidelity(state, state, "quadrature").value == pytest.approx(1.0, abs=1e-6)


class TestBoundsCheck:
    def test_ok(self):
        assert bounds_check(MeasureResult("purity", 0.5, "closed-form")) == "ok"

    def test_tolerated_noise(self):
        assert bounds_check(MeasureResult("fidelity", 1.0 + 1e-12, "quadrature")) == "ok"

    def test_violated(self):
        assert bounds_check(MeasureResult("purity", 1.2, "quadrature")) == "violated"

    def test_wrong_measure_rejected(self):
        with pytest.raises(ValidationError):
            bounds_check(MeasureResult("entropy", 1.0, "closed-form"))

    def test_record_shape(self):
        rec = MeasureResult("entropy", 1.0, "closed-form", 1e-12, UNIT_FRAME).to_record()
        assert set(rec) == {"measure", "value", "method", "error_estimate", "frame"}


@settings(max_examples=40, deadline=None)
@given(lam=st.floats(min_value=0.05, max_value=20.0))
def test_entropy_frame_scaling_property(lam):
    # scaling the frame by lam shifts the entropy by ln(lam)
    base = entropy_1mode(vacuum_state(1), UNIT_FRAME).value
    scaled = entropy_1mode(vacuum_state(1), ReferenceFrame(lam, 0.0)).value
    assert scaled - base == pytest.approx(math.log(lam), rel=1e-10, abs=1e-12)
