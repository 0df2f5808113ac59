"""Parametric Josephson-junction dynamics.

A junction in the small-phase regime is a resonant circuit whose plasma
frequency follows the (possibly time-dependent) critical current.  The
quantum state stays Gaussian: its covariance follows a complex classical
solution eps(t) of

    eps''(t) + omega(t)^2 eps(t) = 0,    eps' eps* - eps'* eps = 2i,

with sigma_II = |eps|^2 / 2, sigma_VV = |eps'|^2 / 2 and the signed
covariance Re(eps' eps*) / 2.  An external drive current enters through the
accumulated integral delta(t), which displaces the mean.  Everything here is
in reduced units (2e = hbar = 1); SI constants appear only in the shot-noise
regime check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import solve_ivp

from .errors import NumericalError, ValidationError
from .gaussian import GaussianState, GaussianTomogram, ReferenceFrame, quadrature_stats

ELEMENTARY_CHARGE = 1.602176634e-19  # C
HBAR = 1.054571817e-34  # J s

WRONSKIAN_TOL = 1e-8
_TOL_RANGE = (1e-12, 1e-6)


def plasma_frequency(critical_current: float, capacitance: float) -> float:
    """Junction plasma frequency sqrt(I_c / C) in reduced units (2e = hbar = 1)."""
    if critical_current <= 0 or capacitance <= 0:
        raise ValidationError("critical current and capacitance must be positive")
    return math.sqrt(critical_current / capacitance)


@dataclass(frozen=True)
class ShotNoiseResult:
    quantum_regime: bool
    ratio: float
    threshold: float


def shot_noise_check(critical_current_si: float, capacitance_si: float) -> ShotNoiseResult:
    """Check I_c C against 32 e^3 / hbar (SI units; the quantum-regime condition).

    The product must dominate the threshold; we call the regime quantum when
    the ratio reaches 100.
    """
    if critical_current_si <= 0 or capacitance_si <= 0:
        raise ValidationError("critical current and capacitance must be positive")
    threshold = 32 * ELEMENTARY_CHARGE**3 / HBAR
    ratio = critical_current_si * capacitance_si / threshold
    return ShotNoiseResult(quantum_regime=ratio >= 100.0, ratio=ratio, threshold=threshold)


@dataclass(frozen=True)
class DriveCurrent:
    """External classical drive current I_k(t).

    kinds: constant {value}; sinusoid {amplitude, omega, phase};
    tabulated {t, values} with linear interpolation.
    """

    kind: str
    value: float = 0.0
    amplitude: float = 0.0
    omega: float = 0.0
    phase: float = 0.0
    t: Optional[NDArray[np.float64]] = None
    values: Optional[NDArray[np.float64]] = None

    def __post_init__(self):
        if self.kind not in ("constant", "sinusoid", "tabulated"):
            raise ValidationError(f"unknown drive kind {self.kind!r}")
        if self.kind == "tabulated":
            t = np.asarray(self.t, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if t.ndim != 1 or t.shape != v.shape or t.size < 2:
                raise ValidationError("tabulated drive needs matching t and values")
            if np.any(np.diff(t) <= 0):
                raise ValidationError("tabulated drive times must be strictly increasing")
            object.__setattr__(self, "t", t)
            object.__setattr__(self, "values", v)

    def current(self, t):
        if self.kind == "constant":
            return self.value if np.isscalar(t) else np.full(np.shape(t), self.value)
        if self.kind == "sinusoid":
            return self.amplitude * np.cos(self.omega * np.asarray(t) + self.phase)
        return np.interp(t, self.t, self.values)

    @staticmethod
    def from_dict(d: dict) -> "DriveCurrent":
        kind = d.get("kind")
        if kind == "constant":
            return DriveCurrent("constant", value=float(d["value"]))
        if kind == "sinusoid":
            return DriveCurrent(
                "sinusoid",
                amplitude=float(d["amplitude"]),
                omega=float(d["omega"]),
                phase=float(d.get("phase", 0.0)),
            )
        if kind == "tabulated":
            return DriveCurrent("tabulated", t=np.asarray(d["t"]), values=np.asarray(d["values"]))
        raise ValidationError(f"unknown drive kind {kind!r}")


@dataclass(frozen=True)
class FrequencyProfile:
    """Time-dependent plasma frequency with an optional drive.

    kinds: constant {omega0}; sudden-jump {omega0, omega1, t_jump};
    periodic {omega0, depth, mod_omega} meaning
    omega(t)^2 = omega0^2 (1 + depth cos(mod_omega t)); tabulated {t, omega}.
    """

    kind: str
    omega0: float = 1.0
    omega1: float = 1.0
    t_jump: float = 0.0
    depth: float = 0.0
    mod_omega: float = 0.0
    t: Optional[NDArray[np.float64]] = None
    omega_table: Optional[NDArray[np.float64]] = None
    drive: Optional[DriveCurrent] = None

    def __post_init__(self):
        if self.kind not in ("constant", "sudden-jump", "periodic", "tabulated"):
            raise ValidationError(f"unknown profile kind {self.kind!r}")
        if self.kind in ("constant", "sudden-jump", "periodic") and self.omega0 <= 0:
            raise ValidationError("omega0 must be positive")
        if self.kind == "sudden-jump":
            if self.omega1 <= 0:
                raise ValidationError("omega1 must be positive")
            if self.t_jump < 0:
                raise ValidationError("t_jump must be >= 0")
        if self.kind == "periodic" and not abs(self.depth) < 1.0:
            raise ValidationError("periodic depth must satisfy |depth| < 1 to keep omega real")
        if self.kind == "tabulated":
            t = np.asarray(self.t, dtype=float)
            om = np.asarray(self.omega_table, dtype=float)
            if t.ndim != 1 or t.shape != om.shape or t.size < 2:
                raise ValidationError("tabulated profile needs matching t and omega")
            if np.any(np.diff(t) <= 0):
                raise ValidationError("tabulated profile times must be strictly increasing")
            if np.any(om <= 0):
                raise ValidationError("tabulated omega must be positive everywhere")
            object.__setattr__(self, "t", t)
            object.__setattr__(self, "omega_table", om)

    def omega(self, t):
        """omega(t), vectorized."""
        if self.kind == "constant":
            return self.omega0 if np.isscalar(t) else np.full(np.shape(t), self.omega0)
        if self.kind == "sudden-jump":
            return np.where(np.asarray(t) < self.t_jump, self.omega0, self.omega1)
        if self.kind == "periodic":
            return self.omega0 * np.sqrt(1.0 + self.depth * np.cos(self.mod_omega * np.asarray(t)))
        return np.interp(t, self.t, self.omega_table)

    def omega_sq(self, t):
        if self.kind == "periodic":
            return self.omega0**2 * (1.0 + self.depth * np.cos(self.mod_omega * np.asarray(t)))
        w = self.omega(t)
        return w * w

    def breakpoints(self, t_final: float) -> list[float]:
        """Interior times where omega(t) is not smooth."""
        if self.kind == "sudden-jump" and 0.0 < self.t_jump < t_final:
            return [self.t_jump]
        return []

    def drive_current(self, t):
        if self.drive is None:
            return 0.0 if np.isscalar(t) else np.zeros(np.shape(t))
        return self.drive.current(t)

    @staticmethod
    def constant(omega0: float, drive: Optional[DriveCurrent] = None) -> "FrequencyProfile":
        return FrequencyProfile("constant", omega0=omega0, drive=drive)

    @staticmethod
    def sudden_jump(
        omega0: float, omega1: float, t_jump: float, drive: Optional[DriveCurrent] = None
    ) -> "FrequencyProfile":
        return FrequencyProfile(
            "sudden-jump", omega0=omega0, omega1=omega1, t_jump=t_jump, drive=drive
        )

    @staticmethod
    def periodic(
        omega0: float, depth: float, mod_omega: float, drive: Optional[DriveCurrent] = None
    ) -> "FrequencyProfile":
        return FrequencyProfile(
            "periodic", omega0=omega0, depth=depth, mod_omega=mod_omega, drive=drive
        )

    @staticmethod
    def tabulated(t, omega, drive: Optional[DriveCurrent] = None) -> "FrequencyProfile":
        return FrequencyProfile(
            "tabulated", t=np.asarray(t), omega_table=np.asarray(omega), drive=drive
        )

    @staticmethod
    def from_dict(d: dict) -> "FrequencyProfile":
        drive = DriveCurrent.from_dict(d["drive"]) if d.get("drive") else None
        kind = d.get("kind")
        if kind == "constant":
            return FrequencyProfile.constant(float(d["omega0"]), drive)
        if kind == "sudden-jump":
            return FrequencyProfile.sudden_jump(
                float(d["omega0"]), float(d["omega1"]), float(d["t_jump"]), drive
            )
        if kind == "periodic":
            return FrequencyProfile.periodic(
                float(d["omega0"]), float(d["depth"]), float(d["mod_omega"]), drive
            )
        if kind == "tabulated":
            return FrequencyProfile.tabulated(d["t"], d["omega"], drive)
        raise ValidationError(f"unknown profile kind {kind!r}")


@dataclass(frozen=True)
class EpsilonTrajectory:
    """Sampled complex classical solution with its accumulated drive integral.

    Stores eps, eps', delta and omega(t) at strictly increasing times.  The
    normalization eps' eps* - eps'* eps = 2i must hold at every node within
    wronskian_tol.
    """

    t: NDArray[np.float64]
    eps: NDArray[np.complex128]
    eps_dot: NDArray[np.complex128]
    delta: NDArray[np.complex128]
    omega: NDArray[np.float64]
    wronskian_tol: float = WRONSKIAN_TOL

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        if t.ndim != 1 or t.size < 2 or np.any(np.diff(t) <= 0):
            raise ValidationError("trajectory times must be strictly increasing")
        arrays = {}
        for name in ("eps", "eps_dot", "delta"):
            a = np.asarray(getattr(self, name), dtype=complex)
            if a.shape != t.shape:
                raise ValidationError(f"{name} must match the time grid")
            arrays[name] = a
        om = np.asarray(self.omega, dtype=float)
        if om.shape != t.shape:
            raise ValidationError("omega must match the time grid")
        drift = np.max(
            np.abs(arrays["eps_dot"] * np.conj(arrays["eps"])
                   - np.conj(arrays["eps_dot"]) * arrays["eps"] - 2j)
        )
        if drift > self.wronskian_tol:
            raise ValidationError(
                f"Wronskian drift {drift:.3e} exceeds tolerance {self.wronskian_tol:.3e}"
            )
        for a in (t, om, *arrays.values()):
            a.flags.writeable = False
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "omega", om)
        for name, a in arrays.items():
            object.__setattr__(self, name, a)

    def __len__(self) -> int:
        return self.t.size

    def wronskian_drift(self) -> float:
        """Max deviation of eps' eps* - eps'* eps from 2i over the stored nodes."""
        return float(
            np.max(np.abs(self.eps_dot * np.conj(self.eps) - np.conj(self.eps_dot) * self.eps - 2j))
        )


def evolve_epsilon(
    profile: FrequencyProfile,
    t_final: float,
    tol: float = 1e-10,
    n_samples: int = 1001,
) -> EpsilonTrajectory:
    """Integrate the classical equation from the instantaneous ground state.

    Initial data eps(0) = 1/sqrt(omega(0)), eps'(0) = i sqrt(omega(0))
    satisfy the Wronskian normalization and reduce the covariance to the
    vacuum at constant frequency.  Integration uses an adaptive embedded
    Runge-Kutta pair (DOP853), split at frequency discontinuities, with the
    internal step tolerance set two decades below tol so the accumulated
    global error stays within the 10 tol Wronskian budget; delta(t) is
    accumulated by the same integrator.
    """
    if not (_TOL_RANGE[0] <= tol <= _TOL_RANGE[1]):
        raise ValidationError(f"tol must lie in [{_TOL_RANGE[0]}, {_TOL_RANGE[1]}]")
    if t_final <= 0:
        raise ValidationError("t_final must be positive")
    if n_samples < 2:
        raise ValidationError("n_samples must be >= 2")

    omega0 = float(profile.omega(0.0))
    if omega0 <= 0:
        raise ValidationError("omega(0) must be positive")
    y0 = np.array([1.0 / math.sqrt(omega0), 1j * math.sqrt(omega0), 0.0], dtype=complex)

    def rhs(t, y):
        w2 = profile.omega_sq(t)
        if w2 <= 0:
            raise NumericalError(f"omega(t)^2 <= 0 encountered at t = {t:.6g}")
        return [y[1], -w2 * y[0], -1j / math.sqrt(2.0) * profile.drive_current(t) * y[0]]

    # step tolerance two decades below the contract; global error accumulates
    step_tol = max(1e-2 * tol, 3e-14)
    t_eval = np.linspace(0.0, t_final, n_samples)
    edges = [0.0, *profile.breakpoints(t_final), t_final]
    segments = []
    y = y0
    for a, b in zip(edges[:-1], edges[1:]):
        mask = (t_eval >= a - 1e-15) & (t_eval <= b + 1e-15)
        seg_eval = np.unique(np.concatenate([t_eval[mask], [a, b]]))
        sol = solve_ivp(
            rhs,
            (a, b),
            y,
            method="DOP853",
            rtol=step_tol,
            atol=step_tol,
            t_eval=seg_eval,
            dense_output=False,
        )
        if not sol.success:
            t_fail = sol.t[-1] if sol.t.size else a
            raise NumericalError(f"integration failed near t = {t_fail:.6g}: {sol.message}")
        segments.append((seg_eval, sol.y))
        y = sol.y[:, -1]

    # merge segments onto the requested sample grid (jump nodes take the
    # post-jump segment value, matching omega(t_jump) = omega1)
    eps = np.empty(n_samples, dtype=complex)
    eps_dot = np.empty(n_samples, dtype=complex)
    delta = np.empty(n_samples, dtype=complex)
    for seg_t, seg_y in segments:
        idx = np.searchsorted(t_eval, seg_t)
        keep = (idx < n_samples) & (t_eval[np.minimum(idx, n_samples - 1)] == seg_t)
        eps[idx[keep]] = seg_y[0][keep]
        eps_dot[idx[keep]] = seg_y[1][keep]
        delta[idx[keep]] = seg_y[2][keep]

    omega = np.asarray(profile.omega(t_eval), dtype=float)
    traj = EpsilonTrajectory(
        t=t_eval,
        eps=eps,
        eps_dot=eps_dot,
        delta=delta,
        omega=omega,
        wronskian_tol=max(WRONSKIAN_TOL, 10.0 * tol),
    )
    drift = traj.wronskian_drift()
    if drift > 10.0 * tol:
        raise NumericalError(f"Wronskian drift {drift:.3e} exceeds 10 tol = {10 * tol:.3e}")
    return traj


def state_from_epsilon(traj: EpsilonTrajectory, t_index: int) -> GaussianState:
    """Gaussian state at a stored node.

    Covariance [[|eps|^2, Re(eps' eps*)], [Re(eps' eps*), |eps'|^2]] / 2 and
    mean (-sqrt2 Re(delta eps*), -sqrt2 Re(delta eps'*)); pure at all times.
    """
    if not -len(traj) <= t_index < len(traj):
        raise ValidationError(f"index {t_index} out of range for {len(traj)} nodes")
    e = traj.eps[t_index]
    ed = traj.eps_dot[t_index]
    d = traj.delta[t_index]
    sig_iv = 0.5 * float(np.real(ed * np.conj(e)))
    cov = np.array([[0.5 * abs(e) ** 2, sig_iv], [sig_iv, 0.5 * abs(ed) ** 2]])
    mean = np.array(
        [-math.sqrt(2.0) * float(np.real(d * np.conj(e))),
         -math.sqrt(2.0) * float(np.real(d * np.conj(ed)))]
    )
    return GaussianState(1, mean, cov)


def junction_tomogram(
    traj: EpsilonTrajectory, t_index: int, frame: ReferenceFrame
) -> GaussianTomogram:
    """Tomogram of the junction state at a stored node."""
    return quadrature_stats(state_from_epsilon(traj, t_index), frame)


def casimir_quanta_curve(traj: EpsilonTrajectory) -> NDArray[np.float64]:
    """Mean quanta versus time, referenced to the instantaneous frequency.

    n(t) = <H(t)> / omega(t) - 1/2 evaluated from the moments, which is
    (omega sigma_II + sigma_VV / omega + omega mI^2 + mV^2 / omega - 1) / 2.
    It vanishes identically at constant frequency and measures the quanta
    generated by parametric excitation or an external drive.
    """
    w = traj.omega
    sig_ii = 0.5 * np.abs(traj.eps) ** 2
    sig_vv = 0.5 * np.abs(traj.eps_dot) ** 2
    mean_i = -math.sqrt(2.0) * np.real(traj.delta * np.conj(traj.eps))
    mean_v = -math.sqrt(2.0) * np.real(traj.delta * np.conj(traj.eps_dot))
    return 0.5 * (w * (sig_ii + mean_i**2) + (sig_vv + mean_v**2) / w - 1.0)


def time_averaged_quanta(traj: EpsilonTrajectory, n_periods: float = 10.0) -> float:
    """Trapezoidal average of the quanta curve over the trailing n periods.

    The period is taken at the final frequency; the window is clipped to
    the stored range.
    """
    quanta = casimir_quanta_curve(traj)
    window = n_periods * 2 * math.pi / float(traj.omega[-1])
    t0 = max(traj.t[0], traj.t[-1] - window)
    mask = traj.t >= t0
    if np.count_nonzero(mask) < 2:
        raise ValidationError("averaging window contains fewer than 2 samples")
    return float(
        np.trapezoid(quanta[mask], traj.t[mask]) / (traj.t[mask][-1] - traj.t[mask][0])
    )


def trajectory_to_csv(traj: EpsilonTrajectory, path) -> None:
    """Write the trajectory with per-node moments and the quanta curve."""
    quanta = casimir_quanta_curve(traj)
    mean_i = -math.sqrt(2.0) * np.real(traj.delta * np.conj(traj.eps))
    mean_v = -math.sqrt(2.0) * np.real(traj.delta * np.conj(traj.eps_dot))
    sig_iv = 0.5 * np.real(traj.eps_dot * np.conj(traj.eps))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            "t,re_eps,im_eps,re_epsdot,im_epsdot,"
            "sigma_II,sigma_VV,sigma_IV,mean_I,mean_V,n_quanta\n"
        )
        for k in range(len(traj)):
            row = (
                traj.t[k],
                traj.eps[k].real,
                traj.eps[k].imag,
                traj.eps_dot[k].real,
                traj.eps_dot[k].imag,
                0.5 * abs(traj.eps[k]) ** 2,
                0.5 * abs(traj.eps_dot[k]) ** 2,
                sig_iv[k],
                mean_i[k],
                mean_v[k],
                quanta[k],
            )
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")
