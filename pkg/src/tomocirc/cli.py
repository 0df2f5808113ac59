"""Command-line front end.

One subcommand per pipeline, each driven by a JSON config file plus a few
flag overrides, writing delimited data and JSON summaries into an output
directory.  Identical config and seed give byte-identical outputs.  The
`report` subcommand runs a pipeline and additionally renders figures next
to the data files.

Exit codes: 0 ok, 1 verification failure, 2 validation error, 3 numerical
error.  Errors are reported as one-line JSON on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .coupled import (
    CoupledCircuitParams,
    ground_state_tomogram_2c,
    moments_to_csv,
    normal_mode_frequencies,
    propagate_dispersions,
    symplectic_oracle,
)
from .errors import NumericalError, ValidationError
from .gaussian import (
    GaussianState,
    GaussianTomogram,
    ReferenceFrame,
    quadrature_stats,
    tomogram_density,
    vacuum_state,
)
from .josephson import (
    FrequencyProfile,
    casimir_quanta_curve,
    evolve_epsilon,
    time_averaged_quanta,
    trajectory_to_csv,
)
from .measures import (
    CLOSED_FORM,
    QUADRATURE,
    entropy_1mode,
    entropy_2mode,
    fidelity,
    purity,
    tomographic_information,
)
from .tomography import UniformAxis, wigner_of_gaussian, wigner_to_csv
from .verify import coupled_equivalence_sweep, radon_roundtrip_check

EXIT_OK = 0
EXIT_VERIFY_FAILURE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _dump_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _require(config: dict, field: str):
    if field not in config:
        raise ValidationError(f"config missing required field '{field}'")
    return config[field]


def _axis_from(config, default_lo, default_hi, default_count) -> UniformAxis:
    if config is None:
        return UniformAxis(default_lo, default_hi, default_count)
    try:
        return UniformAxis(float(config["min"]), float(config["max"]), int(config["count"]))
    except KeyError as exc:
        raise ValidationError(f"axis config missing field {exc}") from None


def _frame_from(config) -> ReferenceFrame:
    if config is None:
        raise ValidationError("config missing required field 'frame'")
    try:
        return ReferenceFrame(config["mu"], config["nu"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"frame config invalid: {exc}") from None


def _state_from_trajectory_csv(path: str, time: float) -> GaussianState:
    """Rebuild the junction state from a trajectory CSV row nearest to `time`."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValidationError(f"trajectory file {path} is empty")
    times = np.array([float(r["t"]) for r in rows])
    k = int(np.argmin(np.abs(times - time)))
    r = rows[k]
    cov = np.array(
        [
            [float(r["sigma_II"]), float(r["sigma_IV"])],
            [float(r["sigma_IV"]), float(r["sigma_VV"])],
        ]
    )
    return GaussianState(1, [float(r["mean_I"]), float(r["mean_V"])], cov)


def _resolve_state(config: dict) -> GaussianState:
    """State source: inline state, trajectory file + time, or coupled params + time."""
    if "state" in config:
        return GaussianState.from_dict(_require(config, "state"))
    source = _require(config, "source")
    kind = source.get("kind")
    if kind == "state":
        return GaussianState.from_dict(_require(source, "state"))
    if kind == "trajectory":
        return _state_from_trajectory_csv(_require(source, "path"), float(_require(source, "time")))
    if kind == "coupled":
        params = CoupledCircuitParams.from_dict(_require(source, "params"))
        return propagate_dispersions(params, vacuum_state(2), float(_require(source, "time")))
    raise ValidationError(f"unknown state source kind {kind!r}")


def _tomogram_csv_1mode(tom: GaussianTomogram, j_axis: UniformAxis, path: Path) -> None:
    j = j_axis.points()
    w = tomogram_density(tom, j)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("J,w\n")
        for jv, wv in zip(j, w):
            fh.write(f"{_fmt(jv)},{_fmt(wv)}\n")


def _tomogram_csv_2mode(tom: GaussianTomogram, axes: tuple[UniformAxis, UniformAxis], path: Path) -> None:
    j1 = axes[0].points()
    j2 = axes[1].points()
    g1, g2 = np.meshgrid(j1, j2, indexing="ij")
    w = tomogram_density(tom, np.stack([g1, g2], axis=-1))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("J1,J2,w\n")
        for i in range(j1.size):
            for j in range(j2.size):
                fh.write(f"{_fmt(j1[i])},{_fmt(j2[j])},{_fmt(w[i, j])}\n")


def cmd_tomogram(config: dict, out: Path, render: bool = False, fmt: str = "csv") -> dict:
    state = _resolve_state(config)
    frame = _frame_from(config.get("frame"))
    tom = quadrature_stats(state, frame)
    artifacts = {}
    if tom.n_modes == 1:
        sd = math.sqrt(tom.variance)
        j_axis = _axis_from(
            config.get("j_axis"), tom.mean[0] - 8 * sd, tom.mean[0] + 8 * sd, 1001
        )
        if fmt == "json":
            j = j_axis.points()
            csv_path = out / "tomogram.json"
            _dump_json(
                {"J": list(map(float, j)), "w": list(map(float, tomogram_density(tom, j)))},
                csv_path,
            )
        else:
            csv_path = out / "tomogram.csv"
            _tomogram_csv_1mode(tom, j_axis, csv_path)
        entropy = entropy_1mode(state, frame)
        summary = {
            "mean": float(tom.mean[0]),
            "variance": tom.variance,
            "entropy": entropy.value,
            "frame": frame.to_dict(),
        }
        if render:
            from .plotting import save_tomogram_figure

            j = j_axis.points()
            save_tomogram_figure(j, tomogram_density(tom, j), out / "tomogram.png")
            artifacts["figure"] = "tomogram.png"
    else:
        sds = [math.sqrt(tom.cov[0, 0]), math.sqrt(tom.cov[1, 1])]
        axes = tuple(
            _axis_from(
                (config.get("j_axes") or [None, None])[m],
                tom.mean[m] - 6 * sds[m],
                tom.mean[m] + 6 * sds[m],
                101,
            )
            for m in range(2)
        )
        if fmt == "json":
            j1, j2 = axes[0].points(), axes[1].points()
            g1, g2 = np.meshgrid(j1, j2, indexing="ij")
            w = tomogram_density(tom, np.stack([g1, g2], axis=-1))
            csv_path = out / "tomogram.json"
            _dump_json(
                {
                    "J1": list(map(float, j1)),
                    "J2": list(map(float, j2)),
                    "w": [[float(x) for x in row] for row in w],
                },
                csv_path,
            )
        else:
            csv_path = out / "tomogram.csv"
            _tomogram_csv_2mode(tom, axes, csv_path)
        summary = {
            "mean": [float(x) for x in tom.mean],
            "covJ": [[float(x) for x in row] for row in tom.cov],
            "entropy": entropy_2mode(state, frame).value,
            "information": tomographic_information(state, frame).value,
            "frame": frame.to_dict(),
        }
        if render:
            from .plotting import save_tomogram2_figure

            j1, j2 = axes[0].points(), axes[1].points()
            g1, g2 = np.meshgrid(j1, j2, indexing="ij")
            w = tomogram_density(tom, np.stack([g1, g2], axis=-1))
            save_tomogram2_figure(j1, j2, w, out / "tomogram.png")
            artifacts["figure"] = "tomogram.png"
    _dump_json(summary, out / "summary.json")
    artifacts.update({"tomogram": csv_path.name, "summary": "summary.json"})
    return artifacts


def cmd_wigner(config: dict, out: Path, render: bool = False, fmt: str = "csv") -> dict:
    state = _resolve_state(config)
    if state.n_modes != 1:
        raise ValidationError("wigner command expects a one-mode state")
    si, sv = math.sqrt(state.cov[0, 0]), math.sqrt(state.cov[1, 1])
    i_axis = _axis_from(config.get("i_axis"), state.mean[0] - 6 * si, state.mean[0] + 6 * si, 129)
    v_axis = _axis_from(config.get("v_axis"), state.mean[1] - 6 * sv, state.mean[1] + 6 * sv, 129)
    grid = wigner_of_gaussian(state, i_axis, v_axis)
    if fmt == "json":
        data_name = "wigner.json"
        _dump_json(
            {
                "I": list(map(float, grid.i_axis)),
                "V": list(map(float, grid.v_axis)),
                "W": [[float(x) for x in row] for row in grid.values],
            },
            out / data_name,
        )
    else:
        data_name = "wigner.csv"
        wigner_to_csv(grid, out / data_name)
    peak = np.unravel_index(np.argmax(grid.values), grid.values.shape)
    summary = {
        "integral": grid.integral(),
        "peak_value": float(grid.values[peak]),
        "peak_I": float(grid.i_axis[peak[0]]),
        "peak_V": float(grid.v_axis[peak[1]]),
    }
    _dump_json(summary, out / "summary.json")
    artifacts = {"wigner": data_name, "summary": "summary.json"}
    if render:
        from .plotting import save_wigner_figure

        save_wigner_figure(grid, out / "wigner.png")
        artifacts["figure"] = "wigner.png"
    return artifacts


def cmd_josephson(
    config: dict, out: Path, tol_override=None, render: bool = False, fmt: str = "csv"
) -> dict:
    profile = FrequencyProfile.from_dict(_require(config, "profile"))
    t_final = float(_require(config, "t_final"))
    tol = float(tol_override if tol_override is not None else config.get("tol", 1e-10))
    n_samples = int(config.get("n_samples", 2001))
    traj = evolve_epsilon(profile, t_final, tol=tol, n_samples=n_samples)
    quanta = casimir_quanta_curve(traj)
    if fmt == "json":
        data_name = "trajectory.json"
        _dump_json(
            {
                "t": list(map(float, traj.t)),
                "re_eps": list(map(float, traj.eps.real)),
                "im_eps": list(map(float, traj.eps.imag)),
                "re_epsdot": list(map(float, traj.eps_dot.real)),
                "im_epsdot": list(map(float, traj.eps_dot.imag)),
                "n_quanta": list(map(float, quanta)),
            },
            out / data_name,
        )
    else:
        data_name = "trajectory.csv"
        trajectory_to_csv(traj, out / data_name)
    summary = {
        "t_final": t_final,
        "tol": tol,
        "final_quanta": float(quanta[-1]),
        "time_averaged_quanta": time_averaged_quanta(traj),
        "wronskian_drift": traj.wronskian_drift(),
        "final_wronskian": float(
            np.abs(
                traj.eps_dot[-1] * np.conj(traj.eps[-1])
                - np.conj(traj.eps_dot[-1]) * traj.eps[-1]
                - 2j
            )
        ),
    }
    _dump_json(summary, out / "summary.json")
    artifacts = {"trajectory": data_name, "summary": "summary.json"}
    if render:
        from .plotting import save_quanta_figure

        save_quanta_figure(traj, out / "quanta.png")
        artifacts["figure"] = "quanta.png"
    return artifacts


def cmd_coupled(config: dict, out: Path, render: bool = False, fmt: str = "csv") -> dict:
    params = CoupledCircuitParams.from_dict(_require(config, "params"))
    t_max = float(config.get("t_max", 10.0))
    n_times = int(config.get("n_times", 201))
    if t_max <= 0 or n_times < 2:
        raise ValidationError("t_max must be > 0 and n_times >= 2")
    sigma0 = (
        GaussianState.from_dict(config["initial_state"])
        if config.get("initial_state")
        else vacuum_state(2)
    )
    times = np.linspace(0.0, t_max, n_times)
    states = [propagate_dispersions(params, sigma0, float(t)) for t in times]
    oracle_dev = max(
        float(np.max(np.abs(s.cov - symplectic_oracle(params, sigma0, float(t)).cov)))
        for t, s in zip(times, states)
    )
    if fmt == "json":
        data_name = "moments.json"
        payload = {"t": list(map(float, times))}
        from .coupled import _MOMENT_COLUMNS

        for name, i, j in _MOMENT_COLUMNS:
            payload[name] = [float(s.cov[i, j]) for s in states]
        _dump_json(payload, out / data_name)
    else:
        data_name = "moments.csv"
        moments_to_csv(times, states, out / data_name)
    wk, ws = normal_mode_frequencies(params)
    summary = {
        "omega_k": wk,
        "omega_s": ws,
        "max_oracle_deviation": oracle_dev,
        "purity_drift": max(
            abs(float(np.linalg.det(s.cov)) - float(np.linalg.det(sigma0.cov))) for s in states
        ),
    }
    _dump_json(summary, out / "summary.json")
    artifacts = {"moments": data_name, "summary": "summary.json"}
    if render:
        from .plotting import save_moments_figure

        save_moments_figure(times, states, out / "moments.png")
        artifacts["figure"] = "moments.png"
    return artifacts


def _measure_records(config: dict) -> list[dict]:
    state = _resolve_state(config)
    state2 = None
    if "state2" in config or "source2" in config:
        sub = {"state": config["state2"]} if "state2" in config else {"source": config["source2"]}
        state2 = _resolve_state(sub)
    method = config.get("method", CLOSED_FORM)
    if method not in (CLOSED_FORM, QUADRATURE, "both"):
        raise ValidationError("method must be 'closed-form', 'quadrature', or 'both'")
    methods = [CLOSED_FORM, QUADRATURE] if method == "both" else [method]

    frame = None
    if config.get("frame") is not None:
        frame = _frame_from(config["frame"])

    names = config.get("measures")
    if names is None:
        names = ["entropy", "purity"]
        if state.n_modes == 2:
            names.append("information")
        if state2 is not None:
            names.append("fidelity")

    records: list[dict] = []
    for name in names:
        per_method = []
        for m in methods:
            if name == "entropy":
                if frame is None:
                    raise ValidationError("entropy requires a frame")
                res = (entropy_1mode if state.n_modes == 1 else entropy_2mode)(state, frame, m)
            elif name == "information":
                if state.n_modes != 2:
                    raise ValidationError("information requires a two-mode state")
                if frame is None:
                    raise ValidationError("information requires a frame")
                res = tomographic_information(state, frame, m)
            elif name == "purity":
                res = purity(state, m)
            elif name == "fidelity":
                if state2 is None:
                    raise ValidationError("fidelity requires a second state")
                res = fidelity(state, state2, m)
            else:
                raise ValidationError(f"unknown measure {name!r}")
            per_method.append(res)
        recs = [r.to_record() for r in per_method]
        if len(recs) == 2:
            delta = abs(per_method[0].value - per_method[1].value)
            for r in recs:
                r["agreement_delta"] = delta
        records.extend(recs)
    return records


def cmd_measures(config: dict, out: Path) -> dict:
    records = _measure_records(config)
    _dump_json(records, out / "measures.json")
    return {"measures": "measures.json"}


def cmd_verify(args, out: Path | None) -> int:
    try:
        max_workers = int(os.environ.get("TOMOCIRC_THREADS", "1") or 1)
    except ValueError:
        raise ValidationError("TOMOCIRC_THREADS must be an integer") from None
    results = coupled_equivalence_sweep(
        seed=args.seed,
        cases=args.cases,
        corrupt_s_sign=args.corrupt_s_sign,
        max_workers=max(1, max_workers),
    )
    results += radon_roundtrip_check(resolution=args.rt_resolution, n_angles=args.rt_angles)
    for r in results:
        print(r.line())
    all_passed = all(r.passed for r in results)
    print("VERIFY " + ("PASS" if all_passed else "FAIL"))
    if out is not None:
        report = {
            "seed": args.seed,
            "cases": args.cases,
            "corrupt_s_sign": args.corrupt_s_sign,
            "all_passed": all_passed,
            "results": [
                {
                    "name": r.name,
                    "passed": r.passed,
                    "worst_error": r.worst_error,
                    "tolerance": r.tolerance,
                    "detail": r.detail,
                }
                for r in results
            ],
        }
        _dump_json(report, out / "verify_report.json")
    return EXIT_OK if all_passed else EXIT_VERIFY_FAILURE


_REPORT_KINDS = {
    "tomogram": lambda cfg, out, fmt: cmd_tomogram(cfg, out, render=True, fmt=fmt),
    "wigner": lambda cfg, out, fmt: cmd_wigner(cfg, out, render=True, fmt=fmt),
    "josephson": lambda cfg, out, fmt: cmd_josephson(cfg, out, render=True, fmt=fmt),
    "coupled": lambda cfg, out, fmt: cmd_coupled(cfg, out, render=True, fmt=fmt),
}


def cmd_report(config: dict, out: Path, fmt: str = "csv") -> dict:
    kind = _require(config, "kind")
    if kind not in _REPORT_KINDS:
        raise ValidationError(f"report kind must be one of {sorted(_REPORT_KINDS)}")
    return _REPORT_KINDS[kind](config, out, fmt)


_ALLOWED_KEYS = {
    "tomogram": {"state", "source", "frame", "j_axis", "j_axes"},
    "wigner": {"state", "source", "i_axis", "v_axis"},
    "josephson": {"profile", "t_final", "tol", "n_samples"},
    "coupled": {"params", "t_max", "n_times", "initial_state"},
    "measures": {"state", "source", "state2", "source2", "frame", "measures", "method"},
}
_ALLOWED_KEYS["report"] = {"kind"}.union(*_ALLOWED_KEYS.values())


def _check_keys(config: dict, command: str) -> None:
    unknown = sorted(set(config) - _ALLOWED_KEYS[command])
    if unknown:
        raise ValidationError(f"unknown config keys for '{command}': {', '.join(unknown)}")


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            config = json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(config, dict):
        raise ValidationError("config must be a JSON object")
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tomocirc",
        description="Symplectic tomography of quantum electrical circuits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_method=False, with_tol=False):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", default=".", help="output directory (created if missing)")
        p.add_argument("--seed", type=int, default=0, help="RNG seed for sweeps")
        p.add_argument("--format", choices=("csv", "json"), default="csv", help="data file format")
        if with_method:
            p.add_argument("--method", choices=("closed-form", "quadrature", "both"))
        if with_tol:
            p.add_argument("--tol", type=float, help="integration tolerance override")

    add_common(sub.add_parser("tomogram", help="emit a tomogram and its summary"))
    add_common(sub.add_parser("wigner", help="emit a Wigner-function grid"))
    add_common(sub.add_parser("josephson", help="integrate a junction trajectory"), with_tol=True)
    add_common(sub.add_parser("coupled", help="propagate two coupled circuits"))
    add_common(sub.add_parser("measures", help="compute information measures"), with_method=True)
    add_common(sub.add_parser("report", help="run a pipeline and render figures"), with_tol=True)

    p_verify = sub.add_parser("verify", help="run the oracle-equivalence and round-trip checks")
    p_verify.add_argument("--out", help="directory for verify_report.json")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--cases", type=int, default=500)
    p_verify.add_argument("--rt-resolution", type=int, default=257, help="round-trip grid size")
    p_verify.add_argument("--rt-angles", type=int, default=64, help="round-trip angle count")
    p_verify.add_argument(
        "--corrupt-s-sign",
        action="store_true",
        help="debug: flip a propagation coefficient sign; the sweep must then fail",
    )
    return parser


def _field_of(exc: Exception) -> str | None:
    """Leading 'field:' token of a validation message, when present."""
    head = str(exc).split(":", 1)[0].strip()
    return head if head and " " not in head else None


def _error_json(kind: str, message: str, field: str | None = None) -> str:
    rec = {"error": kind, "message": message}
    if field:
        rec["field"] = field
    return json.dumps(rec, sort_keys=True)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            out = Path(args.out) if args.out else None
            if out is not None:
                out.mkdir(parents=True, exist_ok=True)
            return cmd_verify(args, out)

        config = _load_config(args.config)
        if getattr(args, "method", None):
            config["method"] = args.method
        _check_keys(config, args.command)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)

        fmt = getattr(args, "format", "csv")
        if args.command == "tomogram":
            cmd_tomogram(config, out, fmt=fmt)
        elif args.command == "wigner":
            cmd_wigner(config, out, fmt=fmt)
        elif args.command == "josephson":
            cmd_josephson(config, out, tol_override=getattr(args, "tol", None), fmt=fmt)
        elif args.command == "coupled":
            cmd_coupled(config, out, fmt=fmt)
        elif args.command == "measures":
            cmd_measures(config, out)
        elif args.command == "report":
            cmd_report(config, out, fmt=fmt)
        return EXIT_OK
    except ValidationError as exc:
        print(_error_json("validation", str(exc), _field_of(exc)), file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(_error_json("numerical", str(exc)), file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
