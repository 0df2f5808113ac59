"""Acceptance suite: the eight release criteria, each at its stated tolerance.

Every test prints one PASS line with its worst observed error and runtime;
run with `pytest tests/test_acceptance.py -s` to see them.
"""

import json
import math
import time

import numpy as np
import pytest

from tomocirc.cli import main as cli_main
from tomocirc.coupled import CoupledCircuitParams, propagate_dispersions
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
from tomocirc.josephson import (
    FrequencyProfile,
    casimir_quanta_curve,
    evolve_epsilon,
    state_from_epsilon,
    time_averaged_quanta,
)
from tomocirc.measures import (
    bounds_check,
    entropy_1mode,
    fidelity,
    fidelity_wigner_overlap,
    purity,
    tomographic_information,
)
from tomocirc.verify import coupled_equivalence_sweep, radon_roundtrip_check


def report(name, elapsed, limit, detail):
    print(f"\nPASS {name}: {detail} ({elapsed:.2f} s < {limit:.0f} s)")


def test_criterion_1_ground_tomogram_exactness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    vac = vacuum_state(1)
    worst = 0.0
    for _ in range(100):
        frame = random_frame(rng, 1)
        mu, nu = frame.mu[0], frame.nu[0]
        tom = quadrature_stats(vac, frame)
        j = rng.uniform(-4, 4, 32)
        got = tomogram_density(tom, j)
        want = np.exp(-(j**2) / (mu**2 + nu**2)) / math.sqrt(math.pi * (mu**2 + nu**2))
        worst = max(worst, float(np.max(np.abs(got - want))))
    elapsed = time.perf_counter() - t0
    assert worst <= 1e-12
    assert elapsed < 1.0
    report("criterion 1 (ground tomogram exactness)", elapsed, 1,
           f"100 random frames, worst pointwise error {worst:.2e} <= 1e-12")


def test_criterion_2_entropy_dual_path():
    t0 = time.perf_counter()
    rng = np.random.default_rng(202)
    vac_cf = entropy_1mode(vacuum_state(1), ReferenceFrame(1.0, 0.0), "closed-form")
    assert vac_cf.value == pytest.approx(0.5 * math.log(math.pi * math.e), abs=1e-9)
    worst = 0.0
    for _ in range(200):
        state = random_state(rng, 1)
        frame = random_frame(rng, 1)
        cf = entropy_1mode(state, frame, "closed-form").value
        quad = entropy_1mode(state, frame, "quadrature").value
        worst = max(worst, abs(cf - quad))
    elapsed = time.perf_counter() - t0
    assert worst <= 1e-7
    assert elapsed < 5.0
    report("criterion 2 (entropy dual path)", elapsed, 5,
           f"200 states, worst method disagreement {worst:.2e} <= 1e-7")


def test_criterion_3_fidelity_purity_oracles():
    t0 = time.perf_counter()
    rng = np.random.default_rng(303)
    worst_quad = 0.0
    worst_wigner = 0.0
    worst_bound = 0.0
    for _ in range(20):
        a = random_state(rng, 1, max_squeeze=0.25, max_thermal=1.0, max_mean=1.5)
        b = random_state(rng, 1, max_squeeze=0.25, max_thermal=1.0, max_mean=1.5)
        f_cf = fidelity(a, b, "closed-form")
        f_q = fidelity(a, b, "quadrature")
        worst_quad = max(worst_quad, abs(f_cf.value - f_q.value))
        worst_wigner = max(worst_wigner, abs(f_cf.value - fidelity_wigner_overlap(a, b)))
        p_cf = purity(a, "closed-form")
        p_q = purity(a, "quadrature")
        worst_quad = max(worst_quad, abs(p_cf.value - p_q.value))
        for res in (f_cf, f_q, p_cf, p_q):
            assert bounds_check(res) == "ok"
            worst_bound = max(worst_bound, res.value - 1.0, -res.value)
    elapsed = time.perf_counter() - t0
    assert worst_quad <= 1e-6
    assert worst_wigner <= 1e-4
    assert worst_bound <= 1e-9
    assert elapsed < 30.0
    report("criterion 3 (fidelity/purity oracle equivalence)", elapsed, 30,
           f"20 pairs: kernel vs closed form {worst_quad:.2e} <= 1e-6, "
           f"vs Wigner-grid oracle {worst_wigner:.2e} <= 1e-4, bounds margin {worst_bound:.2e}")


def test_criterion_4_josephson_dynamics():
    t0 = time.perf_counter()
    tol = 1e-10

    constant = evolve_epsilon(FrequencyProfile.constant(1.0), 100.0, tol=tol, n_samples=2001)
    max_quanta = float(np.max(np.abs(casimir_quanta_curve(constant))))
    assert max_quanta <= 1e-10

    jump = evolve_epsilon(FrequencyProfile.sudden_jump(1.0, 2.0, 1.0), 60.0, tol=tol,
                          n_samples=3001)
    avg = time_averaged_quanta(jump)
    assert avg == pytest.approx(0.125, abs=1e-3)

    profiles = [
        constant,
        jump,
        evolve_epsilon(FrequencyProfile.periodic(1.0, 0.1, 2.0), 40.0, tol=tol, n_samples=801),
        evolve_epsilon(
            FrequencyProfile.tabulated(np.linspace(0, 40, 401),
                                       1.0 + 0.3 * np.sin(0.5 * np.linspace(0, 40, 401))),
            40.0, tol=tol, n_samples=801,
        ),
    ]
    worst_drift = max(traj.wronskian_drift() for traj in profiles)
    assert worst_drift <= 10 * tol

    worst_det = 0.0
    for traj in profiles:
        for idx in range(0, len(traj), max(1, len(traj) // 50)):
            det = float(np.linalg.det(state_from_epsilon(traj, idx).cov))
            worst_det = max(worst_det, abs(det - 0.25))
    assert worst_det <= 1e-8

    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    report("criterion 4 (junction dynamics)", elapsed, 10,
           f"vacuum quanta {max_quanta:.1e} <= 1e-10, jump average {avg:.6f} = 0.125 ± 1e-3, "
           f"drift {worst_drift:.1e} <= {10 * tol:.0e}, purity drift {worst_det:.1e} <= 1e-8")


def test_criterion_5_coupled_circuit_sweep():
    t0 = time.perf_counter()
    results = coupled_equivalence_sweep(seed=42, cases=500)
    elapsed = time.perf_counter() - t0
    for res in results:
        assert res.passed, res.line()
    assert results[0].worst_error <= 1e-9
    assert results[2].worst_error <= 1e-9
    assert elapsed < 20.0
    report("criterion 5 (coupled-circuit closed form vs oracle)", elapsed, 20,
           f"500 cases, worst moment error {results[0].worst_error:.2e} <= 1e-9, "
           f"worst purity drift {results[2].worst_error:.2e} <= 1e-9")


def test_criterion_6_tomography_round_trip():
    t0 = time.perf_counter()
    results = radon_roundtrip_check(resolution=257, n_angles=64)
    elapsed = time.perf_counter() - t0
    errors = {}
    for res in results:
        assert res.passed, res.line()
        if res.name.startswith("radon round trip"):
            assert res.worst_error <= 1e-2
            errors[res.name.split(": ")[1]] = res.worst_error
    assert elapsed < 60.0
    report("criterion 6 (tomography round trip)", elapsed, 60,
           "max abs errors " + ", ".join(f"{k}: {v:.2e}" for k, v in errors.items()) + " <= 1e-2")


def test_criterion_7_information_measures():
    t0 = time.perf_counter()
    rng = np.random.default_rng(707)

    worst_product = 0.0
    for _ in range(10):
        frame = random_frame(rng, 2)
        worst_product = max(
            worst_product, abs(tomographic_information(vacuum_state(2), frame).value)
        )
    assert worst_product <= 1e-9

    params = CoupledCircuitParams(1.0, 0.5)
    frames = ReferenceFrame((1.0, 1.0), (0.0, 0.0))
    coupled_state = propagate_dispersions(params, vacuum_state(2), 1.0)
    info_coupled = tomographic_information(coupled_state, frames).value
    assert info_coupled > 0.0

    worst_formula = 0.0
    for rho in (0.2, 0.5, 0.8):
        r = 0.5 * math.atanh(rho)
        ch, sh = math.cosh(2 * r), math.sinh(2 * r)
        state = GaussianState(
            2, np.zeros(4),
            0.5 * np.array([[ch, 0, sh, 0], [0, ch, 0, -sh], [sh, 0, ch, 0], [0, -sh, 0, ch]]),
        )
        got = tomographic_information(state, frames).value
        worst_formula = max(worst_formula, abs(got - (-0.5 * math.log(1 - rho**2))))
    assert worst_formula <= 1e-6

    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    report("criterion 7 (tomographic information)", elapsed, 5,
           f"product nullity {worst_product:.1e} <= 1e-9, coupled info {info_coupled:.4f} > 0, "
           f"formula deviation {worst_formula:.2e} <= 1e-6")


def test_criterion_8_verify_determinism(tmp_path, capsys):
    t0 = time.perf_counter()
    args = ["verify", "--seed", "7", "--cases", "200", "--rt-resolution", "129",
            "--rt-angles", "32"]
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    out1.mkdir()
    out2.mkdir()
    assert cli_main(args + ["--out", str(out1)]) == 0
    stdout1 = capsys.readouterr().out
    assert cli_main(args + ["--out", str(out2)]) == 0
    stdout2 = capsys.readouterr().out
    rep1 = (out1 / "verify_report.json").read_bytes()
    rep2 = (out2 / "verify_report.json").read_bytes()
    assert stdout1 == stdout2
    assert rep1 == rep2
    assert json.loads(rep1)["all_passed"] is True
    elapsed = time.perf_counter() - t0
    report("criterion 8 (verify determinism)", elapsed, 60,
           "two seeded runs produced byte-identical reports")
