"""Gaussian states of one and two circuit modes.

Quadratures are the dimensionless current and voltage of each mode, scaled
by the vacuum fluctuation amplitudes so that [I, V] = i per mode.  In these
units the vacuum covariance matrix is diag(1/2, 1/2) and the canonical
ordering is (I1, V1[, I2, V2]).  For the two-circuit system the second
quadrature is the charge, which coincides with the voltage at unit
capacitance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from numpy.typing import NDArray

from .errors import ValidationError

SYMMETRY_TOL = 1e-12
PHYSICALITY_TOL = 1e-10

# frames shorter than this are indistinguishable from (0, 0) in doubles
_FRAME_DEGENERACY_TOL = 1e-150


def symplectic_form(n_modes: int) -> NDArray[np.float64]:
    """Block-diagonal canonical form with [[0, 1], [-1, 0]] per mode."""
    block = np.array([[0.0, 1.0], [-1.0, 0.0]])
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for m in range(n_modes):
        omega[2 * m : 2 * m + 2, 2 * m : 2 * m + 2] = block
    return omega


def _as_tuple(x) -> tuple[float, ...]:
    if np.isscalar(x):
        return (float(x),)
    return tuple(float(v) for v in x)


@dataclass(frozen=True)
class ReferenceFrame:
    """Per-mode (mu, nu) labels selecting the measured quadrature J = mu*I + nu*V.

    Scalars build a one-mode frame; sequences of equal length build a
    multi-mode frame.  A mode with mu = nu = 0 is rejected: the quadrature
    distribution is undefined there.
    """

    mu: tuple[float, ...]
    nu: tuple[float, ...]

    def __init__(self, mu, nu):
        object.__setattr__(self, "mu", _as_tuple(mu))
        object.__setattr__(self, "nu", _as_tuple(nu))
        if len(self.mu) != len(self.nu):
            raise ValidationError("frame: mu and nu must have the same length")
        if len(self.mu) not in (1, 2):
            raise ValidationError("frame: supports 1 or 2 modes")
        for m, (a, b) in enumerate(zip(self.mu, self.nu)):
            if not (math.isfinite(a) and math.isfinite(b)):
                raise ValidationError(f"frame: non-finite entry in mode {m}")
            if a * a + b * b < _FRAME_DEGENERACY_TOL:
                raise ValidationError(f"frame: degenerate (mu, nu) = (0, 0) in mode {m}")

    @property
    def n_modes(self) -> int:
        return len(self.mu)

    def matrix(self) -> NDArray[np.float64]:
        """n_modes x (2 n_modes) projection onto the frame quadratures."""
        n = self.n_modes
        f = np.zeros((n, 2 * n))
        for m in range(n):
            f[m, 2 * m] = self.mu[m]
            f[m, 2 * m + 1] = self.nu[m]
        return f

    def scaled(self, factors: Sequence[float]) -> "ReferenceFrame":
        """Frame with (mu_m, nu_m) multiplied by factors[m]."""
        return ReferenceFrame(
            tuple(l * a for l, a in zip(factors, self.mu)),
            tuple(l * b for l, b in zip(factors, self.nu)),
        )

    def to_dict(self) -> dict:
        if self.n_modes == 1:
            return {"mu": self.mu[0], "nu": self.nu[0]}
        return {"mu": list(self.mu), "nu": list(self.nu)}


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and covariance matrix of a Gaussian circuit state.

    The covariance matrix is symmetrized at construction (inputs asymmetric
    beyond 1e-12 are rejected) and must be positive definite.  Quantum
    physicality is a separate check (:func:`physicality_check`) so that
    sub-Heisenberg covariance matrices can be represented and diagnosed.
    """

    n_modes: int
    mean: NDArray[np.float64]
    cov: NDArray[np.float64]

    def __post_init__(self):
        if self.n_modes not in (1, 2):
            raise ValidationError(f"n_modes must be 1 or 2, got {self.n_modes}")
        d = 2 * self.n_modes
        mean = np.array(self.mean, dtype=float).reshape(-1)
        if mean.shape != (d,):
            raise ValidationError(f"mean must have length {d}, got {mean.shape}")
        cov = np.array(self.cov, dtype=float)
        if cov.shape != (d, d):
            raise ValidationError(f"cov must be {d}x{d}, got {cov.shape}")
        if not np.all(np.isfinite(mean)) or not np.all(np.isfinite(cov)):
            raise ValidationError("state contains non-finite entries")
        asym = np.max(np.abs(cov - cov.T))
        if asym > SYMMETRY_TOL * max(1.0, np.max(np.abs(cov))):
            raise ValidationError(f"cov asymmetric beyond tolerance: {asym:.3e}")
        cov = 0.5 * (cov + cov.T)
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise ValidationError("cov is not positive definite") from None
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    def mode_moments(self, mode: int) -> tuple[NDArray, NDArray]:
        """(mean, cov) restricted to one mode."""
        if not 0 <= mode < self.n_modes:
            raise ValidationError(f"mode {mode} out of range for {self.n_modes} modes")
        s = slice(2 * mode, 2 * mode + 2)
        return self.mean[s], self.cov[s, s]

    def to_dict(self) -> dict:
        return {
            "n_modes": self.n_modes,
            "mean": [float(x) for x in self.mean],
            "cov": [[float(x) for x in row] for row in self.cov],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @staticmethod
    def from_dict(data: dict) -> "GaussianState":
        try:
            return GaussianState(int(data["n_modes"]), data["mean"], data["cov"])
        except KeyError as exc:
            raise ValidationError(f"state JSON missing field {exc}") from None

    @staticmethod
    def from_json(text: str) -> "GaussianState":
        return GaussianState.from_dict(json.loads(text))


@dataclass(frozen=True)
class GaussianTomogram:
    """Closed-form Gaussian quadrature distribution in a reference frame.

    mean and cov are the first and second moments of the frame observables
    J_m = mu_m I_m + nu_m V_m; the density is the (multivariate) normal.
    """

    frame: ReferenceFrame
    mean: NDArray[np.float64]
    cov: NDArray[np.float64]

    def __post_init__(self):
        n = self.frame.n_modes
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.atleast_2d(np.array(self.cov, dtype=float))
        if mean.shape != (n,) or cov.shape != (n, n):
            raise ValidationError("tomogram moments do not match frame mode count")
        cov = 0.5 * (cov + cov.T)
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise ValidationError("tomogram covariance is not positive definite") from None
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return self.frame.n_modes

    @property
    def variance(self) -> float:
        """Scalar variance; one-mode tomograms only."""
        if self.n_modes != 1:
            raise ValidationError("variance is defined for one-mode tomograms")
        return float(self.cov[0, 0])


# densities from projections may dip slightly negative through interpolation
_SAMPLED_DENSITY_TOL = -1e-6
_SAMPLED_NORM_TOL = 1e-3


@dataclass(frozen=True)
class SampledTomogram:
    """One-mode tomogram sampled on a uniform grid of J values."""

    frame: ReferenceFrame
    j: NDArray[np.float64]
    w: NDArray[np.float64]

    def __post_init__(self):
        if self.frame.n_modes != 1:
            raise ValidationError("sampled tomograms are one-mode")
        j = np.array(self.j, dtype=float).reshape(-1)
        w = np.array(self.w, dtype=float).reshape(-1)
        if j.shape != w.shape or j.size < 2:
            raise ValidationError("sampled tomogram needs matching j and w grids")
        if np.any(np.diff(j) <= 0):
            raise ValidationError("sampled tomogram grid must be strictly increasing")
        if np.min(w) < _SAMPLED_DENSITY_TOL:
            raise ValidationError(f"sampled density negative beyond tolerance: {np.min(w):.3e}")
        total = float(np.trapezoid(w, j))
        if abs(total - 1.0) > _SAMPLED_NORM_TOL:
            raise ValidationError(f"sampled tomogram integrates to {total:.6f}, not 1")
        j.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "w", w)

    @property
    def n_modes(self) -> int:
        return 1

    def moments(self) -> tuple[float, float]:
        """Trapezoidal mean and variance of the sampled density."""
        m = float(np.trapezoid(self.j * self.w, self.j))
        v = float(np.trapezoid((self.j - m) ** 2 * self.w, self.j))
        return m, v


Tomogram = Union[GaussianTomogram, SampledTomogram]


@dataclass(frozen=True)
class PhysicalityResult:
    """Outcome of the uncertainty-principle check on a covariance matrix."""

    physical: bool
    margin: float  # min eigenvalue of cov + (i/2)*Omega


def vacuum_state(n_modes: int) -> GaussianState:
    """Ground state: zero mean, covariance identity/2."""
    if n_modes not in (1, 2):
        raise ValidationError(f"n_modes must be 1 or 2, got {n_modes}")
    d = 2 * n_modes
    return GaussianState(n_modes, np.zeros(d), 0.5 * np.eye(d))


def squeezed_state(r: float, angle: float = 0.0, mean: Sequence[float] = (0.0, 0.0)) -> GaussianState:
    """One-mode squeezed state with principal variances e^{±2r}/2 rotated by angle."""
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    cov = rot @ np.diag([0.5 * math.exp(2 * r), 0.5 * math.exp(-2 * r)]) @ rot.T
    return GaussianState(1, np.asarray(mean, dtype=float), cov)


def quadrature_stats(state: GaussianState, frame: ReferenceFrame) -> GaussianTomogram:
    """Closed-form tomogram of `state` in `frame`.

    The frame observable of mode m is J_m = mu_m I_m + nu_m V_m, so the
    tomogram mean is the projected mean and its covariance the quadratic
    (one mode) or bilinear (two modes) form of the state covariance under
    the frame vectors.
    """
    if state.n_modes != frame.n_modes:
        raise ValidationError(
            f"mode count mismatch: state has {state.n_modes}, frame has {frame.n_modes}"
        )
    f = frame.matrix()
    return GaussianTomogram(frame, f @ state.mean, f @ state.cov @ f.T)


def tomogram_density(tomogram: Tomogram, j) -> NDArray[np.float64] | float:
    """Probability density of the tomogram at J.

    For closed-form tomograms this is the (multivariate) normal density; a
    scalar or an array of J values is accepted for one mode, a length-2
    vector (or an (..., 2) array) for two modes.  Sampled tomograms are
    evaluated by linear interpolation, zero outside the grid.
    """
    if isinstance(tomogram, SampledTomogram):
        jv = np.asarray(j, dtype=float)
        out = np.interp(jv, tomogram.j, tomogram.w, left=0.0, right=0.0)
        return float(out) if np.isscalar(j) else out
    n = tomogram.n_modes
    if n == 1:
        jv = np.asarray(j, dtype=float)
        var = tomogram.cov[0, 0]
        out = np.exp(-0.5 * (jv - tomogram.mean[0]) ** 2 / var) / math.sqrt(2 * math.pi * var)
        return float(out) if jv.ndim == 0 else out
    jv = np.asarray(j, dtype=float)
    if jv.shape[-1] != n:
        raise ValidationError(f"J must have length {n} per point")
    delta = jv - tomogram.mean
    prec = np.linalg.inv(tomogram.cov)
    quad = np.einsum("...i,ij,...j->...", delta, prec, delta)
    norm = 1.0 / (2 * math.pi * math.sqrt(float(np.linalg.det(tomogram.cov))))
    out = norm * np.exp(-0.5 * quad)
    return float(out) if jv.ndim == 1 else out


def physicality_check(state: GaussianState) -> PhysicalityResult:
    """Uncertainty-principle test: cov + (i/2) Omega must be positive semidefinite."""
    omega = symplectic_form(state.n_modes)
    herm = state.cov.astype(complex) + 0.5j * omega
    margin = float(np.linalg.eigvalsh(herm).min())
    return PhysicalityResult(physical=margin >= -PHYSICALITY_TOL, margin=margin)


def require_physical(state: GaussianState, context: str = "state") -> None:
    """Raise if the state fails the physicality check."""
    result = physicality_check(state)
    if not result.physical:
        raise ValidationError(
            f"{context} is unphysical (uncertainty margin {result.margin:.3e}); "
            "see physicality_check"
        )


def mean_quanta(state: GaussianState, mode: int = 0) -> float:
    """Mean excitation number of one mode relative to the unit-frequency vacuum."""
    m, c = state.mode_moments(mode)
    return 0.5 * (c[0, 0] + c[1, 1] + m[0] ** 2 + m[1] ** 2 - 1.0)


def random_state(
    rng: np.random.Generator,
    n_modes: int = 1,
    max_squeeze: float = 0.6,
    max_thermal: float = 1.0,
    max_mean: float = 2.0,
) -> GaussianState:
    """Random physical Gaussian state built from a Williamson decomposition.

    cov = S diag(nu_m/2 per quadrature) S^T with S a random symplectic made
    of per-mode rotations, squeezers and (for two modes) a beam-splitter
    mixer, and nu_m = 2 n_m + 1 >= 1 thermal symplectic eigenvalues.  The
    result passes the physicality check by construction.
    """
    if n_modes not in (1, 2):
        raise ValidationError(f"n_modes must be 1 or 2, got {n_modes}")

    def rot(theta):
        c, s = math.cos(theta), math.sin(theta)
        return np.array([[c, -s], [s, c]])

    def block(*mats):
        d = 2 * n_modes
        out = np.zeros((d, d))
        for m, mat in enumerate(mats):
            out[2 * m : 2 * m + 2, 2 * m : 2 * m + 2] = mat
        return out

    sq = [np.diag([math.exp(r), math.exp(-r)]) for r in rng.uniform(-max_squeeze, max_squeeze, n_modes)]
    s_mat = block(*(rot(a) for a in rng.uniform(0, 2 * math.pi, n_modes)))
    s_mat = s_mat @ block(*sq)
    s_mat = s_mat @ block(*(rot(a) for a in rng.uniform(0, 2 * math.pi, n_modes)))
    if n_modes == 2:
        phi = rng.uniform(0, 2 * math.pi)
        c, s = math.cos(phi), math.sin(phi)
        mixer = np.block([[c * np.eye(2), s * np.eye(2)], [-s * np.eye(2), c * np.eye(2)]])
        s_mat = s_mat @ mixer
    nu = 1.0 + 2.0 * rng.uniform(0.0, max_thermal, n_modes)
    d_mat = block(*(0.5 * v * np.eye(2) for v in nu))
    cov = s_mat @ d_mat @ s_mat.T
    mean = rng.uniform(-max_mean, max_mean, 2 * n_modes)
    return GaussianState(n_modes, mean, 0.5 * (cov + cov.T))


def random_frame(rng: np.random.Generator, n_modes: int = 1, scale: float = 2.0) -> ReferenceFrame:
    """Random nondegenerate frame with entries in [-scale, scale]."""
    while True:
        mu = rng.uniform(-scale, scale, n_modes)
        nu = rng.uniform(-scale, scale, n_modes)
        if np.all(mu**2 + nu**2 > 1e-2):
            return ReferenceFrame(tuple(mu), tuple(nu))
