"""User-invokable verification sweeps.

Bundles the two heaviest cross-checks as reproducible, seeded runs: the
coupled-circuit closed-form-versus-oracle sweep and the tomography round
trip at the documented resolutions.  Reports carry the worst observed
errors so regressions show up as numbers, not just as failures.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .coupled import (
    CoupledCircuitParams,
    apply_propagator_coefficients,
    propagator_coefficients,
    symplectic_oracle,
)
from .errors import NumericalError
from .gaussian import (
    GaussianState,
    physicality_check,
    random_state,
    squeezed_state,
    vacuum_state,
)
from .tomography import (
    UniformAxis,
    forward_slices,
    radon_inverse,
    wigner_of_gaussian,
)

MOMENT_TOL = 1e-9
PURITY_DRIFT_TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    """One verification property with its worst observed error."""

    name: str
    passed: bool
    worst_error: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        msg = f"{status} {self.name}: worst error {self.worst_error:.3e} (tolerance {self.tolerance:.1e})"
        if self.detail:
            msg += f" [{self.detail}]"
        return msg


def coupled_equivalence_sweep(
    seed: int = 0,
    cases: int = 500,
    corrupt_s_sign: bool = False,
    max_workers: int = 1,
) -> list[CheckResult]:
    """Random-case sweep of the closed-form propagation against the oracle.

    Draws L in [0.5, 2], L12 in ±0.9 L, t in [0, 20] and a random physical
    two-mode initial state per case.  Checks elementwise moment agreement,
    physicality of the propagated state, and purity preservation.

    corrupt_s_sign flips the sign of s_minus in the closed-form path; the
    sweep must then fail, demonstrating that it discriminates.
    """
    rng = np.random.default_rng(seed)
    draws = []
    for _ in range(cases):
        ell = rng.uniform(0.5, 2.0)
        params = CoupledCircuitParams(ell, rng.uniform(-0.9, 0.9) * ell)
        draws.append((params, rng.uniform(0.0, 20.0), random_state(rng, 2)))

    def run_case(case):
        params, t, sigma0 = case
        coef = propagator_coefficients(params, t)
        if corrupt_s_sign:
            coef = replace(coef, s_minus=-coef.s_minus)
        closed = apply_propagator_coefficients(coef, sigma0)
        oracle = symplectic_oracle(params, sigma0, t)
        moment_err = float(
            max(np.max(np.abs(closed.cov - oracle.cov)), np.max(np.abs(closed.mean - oracle.mean)))
        )
        margin = physicality_check(closed).margin
        purity_drift = abs(
            float(np.linalg.det(closed.cov)) - float(np.linalg.det(sigma0.cov))
        )
        return moment_err, margin, purity_drift

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(run_case, draws))
    else:
        results = [run_case(c) for c in draws]

    worst_moment = max(r[0] for r in results)
    worst_margin = min(r[1] for r in results)
    worst_purity = max(r[2] for r in results)
    return [
        CheckResult(
            "coupled moment agreement",
            worst_moment <= MOMENT_TOL,
            worst_moment,
            MOMENT_TOL,
            f"{cases} cases, seed {seed}",
        ),
        CheckResult(
            "coupled physicality preserved",
            worst_margin >= -1e-10,
            max(0.0, -worst_margin),
            1e-10,
            f"worst uncertainty margin {worst_margin:.3e}",
        ),
        CheckResult(
            "coupled purity preserved",
            worst_purity <= PURITY_DRIFT_TOL,
            worst_purity,
            PURITY_DRIFT_TOL,
        ),
    ]


@dataclass(frozen=True)
class RoundTripCase:
    label: str
    state: GaussianState
    tolerance: float


def _default_roundtrip_cases() -> list[RoundTripCase]:
    displaced = GaussianState(1, [1.0, 0.0], 0.5 * np.eye(2))
    return [
        RoundTripCase("vacuum", vacuum_state(1), 5e-3),
        RoundTripCase("squeezed r=0.5", squeezed_state(0.5), 1e-2),
        RoundTripCase("displaced vacuum", displaced, 1e-2),
    ]


def radon_roundtrip_check(
    resolution: int = 257,
    n_angles: int = 64,
    half_width: float = 6.0,
    cases_override: list[RoundTripCase] | None = None,
) -> list[CheckResult]:
    """Analytic Wigner grid -> forward projections -> slice inverse, per state.

    Compares the reconstruction with the analytic grid in max absolute
    error; also checks that the displaced state's reconstructed mean lands
    within one grid spacing of the true mean.
    """
    axis = UniformAxis.symmetric(half_width, resolution)
    spacing = axis.spacing
    r_max = math.pi / spacing
    r_axis = UniformAxis.symmetric(r_max, resolution)
    j_axis = UniformAxis.symmetric(1.5 * half_width, 2 * resolution + 1)

    out = []
    for case in cases_override if cases_override is not None else _default_roundtrip_cases():
        reference = wigner_of_gaussian(case.state, axis, axis)
        slices = forward_slices(reference, n_angles, j_axis, r_axis)
        try:
            recon = radon_inverse(slices, axis, axis)
        except NumericalError as exc:
            out.append(
                CheckResult(
                    f"radon round trip: {case.label}",
                    False,
                    math.inf,
                    case.tolerance,
                    str(exc),
                )
            )
            continue
        err = float(np.max(np.abs(recon.values - reference.values)))
        out.append(
            CheckResult(
                f"radon round trip: {case.label}",
                err <= case.tolerance,
                err,
                case.tolerance,
                f"{n_angles} angles, {resolution}^2 grid",
            )
        )
        mean_true = case.state.mean
        if np.any(mean_true != 0.0):
            di = np.trapezoid(
                np.trapezoid(recon.values, recon.v_axis, axis=1) * recon.i_axis, recon.i_axis
            )
            dv = np.trapezoid(
                np.trapezoid(recon.values, recon.i_axis, axis=0) * recon.v_axis, recon.v_axis
            )
            mean_err = float(max(abs(di - mean_true[0]), abs(dv - mean_true[1])))
            out.append(
                CheckResult(
                    f"radon mean recovery: {case.label}",
                    mean_err <= spacing,
                    mean_err,
                    spacing,
                )
            )
    return out
