"""Two inductively coupled resonant circuits.

The symmetric and antisymmetric current combinations decouple the system
into normal modes with frequencies omega_k = sqrt(L / (L + L12)) and
omega_s = sqrt(L / (L - L12)) (base plasma frequency and capacitance fixed
to 1 in reduced units).  Second moments propagate two independent ways:

* closed-form scalar formulas in the six trigonometric coefficients
  c_pm, k_pm, s_pm (the "coefficient path"), and
* conjugation sigma -> M sigma M^T with the transition matrix M built from
  the normal-mode rotations (the "symplectic oracle").

The two paths are algebraically equivalent; keeping both makes each one a
test of the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import ValidationError
from .gaussian import (
    GaussianState,
    GaussianTomogram,
    ReferenceFrame,
    quadrature_stats,
    require_physical,
    symplectic_form,
    vacuum_state,
)

CAPACITANCE = 1.0
BASE_FREQUENCY = 1.0


@dataclass(frozen=True)
class CoupledCircuitParams:
    """Inductance L and mutual inductance L12 of the two identical circuits.

    Both normal modes must stay oscillatory: L + L12 > 0 and L - L12 > 0.
    """

    L: float
    L12: float

    def __post_init__(self):
        if self.L <= 0:
            raise ValidationError("L must be positive")
        if not abs(self.L12) < self.L:
            raise ValidationError(f"|L12| = {abs(self.L12)} must be below L = {self.L}")

    def to_dict(self) -> dict:
        return {"L": self.L, "L12": self.L12}

    @staticmethod
    def from_dict(d: dict) -> "CoupledCircuitParams":
        try:
            return CoupledCircuitParams(float(d["L"]), float(d["L12"]))
        except KeyError as exc:
            raise ValidationError(f"coupled-circuit params missing field {exc}") from None


def normal_mode_frequencies(params: CoupledCircuitParams) -> tuple[float, float]:
    """(omega_k, omega_s) of the symmetric/antisymmetric current modes."""
    omega_k = BASE_FREQUENCY * math.sqrt(params.L / (params.L + params.L12))
    omega_s = BASE_FREQUENCY * math.sqrt(params.L / (params.L - params.L12))
    return omega_k, omega_s


@dataclass(frozen=True)
class PropagatorCoefficients:
    """The six trigonometric coefficients driving the closed-form propagation.

    c_pm = cos(omega_k t) ± cos(omega_s t)
    k_pm = sin(omega_k t)/omega_k ± sin(omega_s t)/omega_s
    s_pm = omega_k sin(omega_k t) ± omega_s sin(omega_s t)
    """

    t: float
    c_plus: float
    c_minus: float
    k_plus: float
    k_minus: float
    s_plus: float
    s_minus: float


def propagator_coefficients(params: CoupledCircuitParams, t: float) -> PropagatorCoefficients:
    if t < 0:
        raise ValidationError("t must be >= 0")
    wk, ws = normal_mode_frequencies(params)
    ck, cs = math.cos(wk * t), math.cos(ws * t)
    sk, ss = math.sin(wk * t), math.sin(ws * t)
    return PropagatorCoefficients(
        t=t,
        c_plus=ck + cs,
        c_minus=ck - cs,
        k_plus=sk / wk + ss / ws,
        k_minus=sk / wk - ss / ws,
        s_plus=wk * sk + ws * ss,
        s_minus=wk * sk - ws * ss,
    )


def transition_matrix(params: CoupledCircuitParams, t: float) -> NDArray[np.float64]:
    """Classical transition matrix in the (I1, V1, I2, V2) ordering.

    Built by mixing into normal modes, rotating each mode harmonically
    (I -> I cos wt - w V sin wt, V -> I sin wt / w + V cos wt) and mixing
    back.  Symplectic by construction.
    """
    if t < 0:
        raise ValidationError("t must be >= 0")
    wk, ws = normal_mode_frequencies(params)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    mix = inv_sqrt2 * np.array(
        [
            [1.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 1.0],
            [1.0, 0.0, -1.0, 0.0],
            [0.0, 1.0, 0.0, -1.0],
        ]
    )

    def rotation(w):
        c, s = math.cos(w * t), math.sin(w * t)
        return np.array([[c, -w * s], [s / w, c]])

    block = np.zeros((4, 4))
    block[0:2, 0:2] = rotation(wk)
    block[2:4, 2:4] = rotation(ws)
    return mix.T @ block @ mix


def symplectic_oracle(
    params: CoupledCircuitParams, sigma0: GaussianState, t: float
) -> GaussianState:
    """Propagate a two-mode state by conjugation with the transition matrix."""
    if sigma0.n_modes != 2:
        raise ValidationError("the coupled-circuit propagation is two-mode")
    require_physical(sigma0, "initial state")
    m = transition_matrix(params, t)
    omega = symplectic_form(2)
    defect = np.max(np.abs(m @ omega @ m.T - omega))
    if defect > 1e-12:
        raise ValidationError(f"transition matrix lost symplecticity: defect {defect:.3e}")
    cov = m @ sigma0.cov @ m.T
    return GaussianState(2, m @ sigma0.mean, 0.5 * (cov + cov.T))


def apply_propagator_coefficients(
    coef: PropagatorCoefficients, sigma0: GaussianState
) -> GaussianState:
    """Closed-form propagation of all ten second moments and the mean.

    Scalar formulas in the coefficient basis; the quadratic forms follow
    from the linear combinations

        I1(t) = [c+ I1 - s+ V1 + c- I2 - s- V2] / 2
        V1(t) = [k+ I1 + c+ V1 + k- I2 + c- V2] / 2

    and their 1 <-> 2 partners.
    """
    if sigma0.n_modes != 2:
        raise ValidationError("the coupled-circuit propagation is two-mode")
    cp, cm = coef.c_plus, coef.c_minus
    kp, km = coef.k_plus, coef.k_minus
    sp, sm = coef.s_plus, coef.s_minus

    c = sigma0.cov
    sI1I1, sV1V1, sI1V1 = c[0, 0], c[1, 1], c[0, 1]
    sI2I2, sV2V2, sI2V2 = c[2, 2], c[3, 3], c[2, 3]
    sI1I2, sV1V2 = c[0, 2], c[1, 3]
    sI1V2, sI2V1 = c[0, 3], c[1, 2]

    out = np.empty((4, 4))
    out[0, 0] = (
        cp**2 * sI1I1 + sp**2 * sV1V1 + cm**2 * sI2I2 + sm**2 * sV2V2
        - 2 * cp * sp * sI1V1 - 2 * cm * sm * sI2V2
        + 2 * cm * cp * sI1I2 + 2 * sm * sp * sV1V2
        - 2 * cp * sm * sI1V2 - 2 * cm * sp * sI2V1
    ) / 4.0
    out[2, 2] = (
        cm**2 * sI1I1 + sm**2 * sV1V1 + cp**2 * sI2I2 + sp**2 * sV2V2
        - 2 * cm * sm * sI1V1 - 2 * cp * sp * sI2V2
        + 2 * cm * cp * sI1I2 + 2 * sm * sp * sV1V2
        - 2 * cm * sp * sI1V2 - 2 * cp * sm * sI2V1
    ) / 4.0
    out[1, 1] = (
        kp**2 * sI1I1 + cp**2 * sV1V1 + km**2 * sI2I2 + cm**2 * sV2V2
        + 2 * cp * kp * sI1V1 + 2 * cm * km * sI2V2
        + 2 * km * kp * sI1I2 + 2 * cm * cp * sV1V2
        + 2 * cm * kp * sI1V2 + 2 * cp * km * sI2V1
    ) / 4.0
    out[3, 3] = (
        km**2 * sI1I1 + cm**2 * sV1V1 + kp**2 * sI2I2 + cp**2 * sV2V2
        + 2 * cm * km * sI1V1 + 2 * cp * kp * sI2V2
        + 2 * km * kp * sI1I2 + 2 * cm * cp * sV1V2
        + 2 * cp * km * sI1V2 + 2 * cm * kp * sI2V1
    ) / 4.0
    out[0, 1] = out[1, 0] = (
        cp * kp * sI1I1 - cp * sp * sV1V1 + cm * km * sI2I2 - cm * sm * sV2V2
        + (cp**2 - kp * sp) * sI1V1 + (cm**2 - km * sm) * sI2V2
        + (cm * kp + cp * km) * sI1I2 - (cm * sp + cp * sm) * sV1V2
        + (cm * cp - kp * sm) * sI1V2 + (cm * cp - km * sp) * sI2V1
    ) / 4.0
    out[2, 3] = out[3, 2] = (
        cm * km * sI1I1 - cm * sm * sV1V1 + cp * kp * sI2I2 - cp * sp * sV2V2
        + (cm**2 - km * sm) * sI1V1 + (cp**2 - kp * sp) * sI2V2
        + (cm * kp + cp * km) * sI1I2 - (cm * sp + cp * sm) * sV1V2
        + (cm * cp - km * sp) * sI1V2 + (cm * cp - kp * sm) * sI2V1
    ) / 4.0
    out[0, 2] = out[2, 0] = (
        cm * cp * sI1I1 + sm * sp * sV1V1 + cm * cp * sI2I2 + sm * sp * sV2V2
        - (cm * sp + cp * sm) * (sI1V1 + sI2V2)
        + (cm**2 + cp**2) * sI1I2 + (sm**2 + sp**2) * sV1V2
        - (cm * sm + cp * sp) * (sI1V2 + sI2V1)
    ) / 4.0
    out[1, 3] = out[3, 1] = (
        km * kp * sI1I1 + cm * cp * sV1V1 + km * kp * sI2I2 + cm * cp * sV2V2
        + (cm * kp + cp * km) * (sI1V1 + sI2V2)
        + (km**2 + kp**2) * sI1I2 + (cm**2 + cp**2) * sV1V2
        + (cm * km + cp * kp) * (sI1V2 + sI2V1)
    ) / 4.0
    out[0, 3] = out[3, 0] = (
        cp * km * sI1I1 - cm * sp * sV1V1 + cm * kp * sI2I2 - cp * sm * sV2V2
        + (cm * cp - km * sp) * sI1V1 + (cm * cp - kp * sm) * sI2V2
        + (cm * km + cp * kp) * sI1I2 - (cm * sm + cp * sp) * sV1V2
        + (cp**2 - km * sm) * sI1V2 + (cm**2 - kp * sp) * sI2V1
    ) / 4.0
    out[1, 2] = out[2, 1] = (
        cm * kp * sI1I1 - cp * sm * sV1V1 + cp * km * sI2I2 - cm * sp * sV2V2
        + (cm * cp - kp * sm) * sI1V1 + (cm * cp - km * sp) * sI2V2
        + (cm * km + cp * kp) * sI1I2 - (cm * sm + cp * sp) * sV1V2
        + (cm**2 - kp * sp) * sI1V2 + (cp**2 - km * sm) * sI2V1
    ) / 4.0

    m = sigma0.mean
    mean = 0.5 * np.array(
        [
            cp * m[0] - sp * m[1] + cm * m[2] - sm * m[3],
            kp * m[0] + cp * m[1] + km * m[2] + cm * m[3],
            cm * m[0] - sm * m[1] + cp * m[2] - sp * m[3],
            km * m[0] + cm * m[1] + kp * m[2] + cp * m[3],
        ]
    )
    return GaussianState(2, mean, out)


def propagate_dispersions(
    params: CoupledCircuitParams, sigma0: GaussianState, t: float
) -> GaussianState:
    """Closed-form propagation of a two-mode state to time t."""
    require_physical(sigma0, "initial state")
    return apply_propagator_coefficients(propagator_coefficients(params, t), sigma0)


def ground_state_tomogram_2c(
    params: CoupledCircuitParams, t: float, frames: ReferenceFrame
) -> GaussianTomogram:
    """Two-mode tomogram of the propagated ground state."""
    if frames.n_modes != 2:
        raise ValidationError("ground_state_tomogram_2c needs a two-mode frame")
    state = propagate_dispersions(params, vacuum_state(2), t)
    return quadrature_stats(state, frames)


_MOMENT_COLUMNS = (
    ("s_I1I1", 0, 0),
    ("s_V1V1", 1, 1),
    ("s_I1V1", 0, 1),
    ("s_I2I2", 2, 2),
    ("s_V2V2", 3, 3),
    ("s_I2V2", 2, 3),
    ("s_I1I2", 0, 2),
    ("s_V1V2", 1, 3),
    ("s_I1V2", 0, 3),
    ("s_I2V1", 1, 2),
)


def moments_to_csv(times, states, path) -> None:
    """Write the ten-moment evolution, one row per time."""
    header = "t," + ",".join(name for name, _, _ in _MOMENT_COLUMNS)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for t, st in zip(times, states):
            vals = [t] + [st.cov[i, j] for _, i, j in _MOMENT_COLUMNS]
            fh.write(",".join(f"{x:.17g}" for x in vals) + "\n")
