"""Command-line front end: bounds, simulations, sweeps, decompositions.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 strict-mode deviation.  Numeric output is fixed at 12 significant digits
and CSV uses LF line endings, so identical invocations are byte-identical.

The environment variable CLONEFORGE_SEED is reserved but inert: nothing in
the package samples randomness (probabilities come from exact projection).
"""

from __future__ import annotations

import json
import math
from typing import Optional

import click

from . import bounds, gates, networks
from . import verify as verify_suites

#: largest tolerated |simulated - bound| before --strict exits with code 3
STRICT_TOL = 1e-8

_CONFIG_KEYS = {
    "theta",
    "m",
    "n",
    "eta_plus",
    "mode",
    "p_s",
    "sweep",
    "output_format",
    "output_path",
}
_SWEEP_KEYS = {"param", "start", "stop", "steps"}


class ConfigError(click.ClickException):
    """Invalid configuration; exits with code 2."""

    exit_code = 2


class StrictDeviationError(click.ClickException):
    """Simulation strayed from its bound in --strict mode; exits with code 3."""

    exit_code = 3


def _fmt(value: float) -> str:
    return format(float(value) + 0.0, ".12g")


def _round12(value: float) -> float:
    return float(_fmt(value))


def _jsonable(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return _round12(obj)
    if isinstance(obj, dict):
        return {key: _jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(value) for value in obj]
    return obj


def _json_text(record) -> str:
    return json.dumps(_jsonable(record), indent=2) + "\n"


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _fmt(value)
    return str(value)


def _csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(value) for value in row))
    return "\n".join(lines) + "\n"


def _flatten(record, prefix=""):
    flat = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{name}_"))
        else:
            flat[name] = value
    return flat


def _emit(text: str, output_path: Optional[str]) -> None:
    if output_path:
        with open(output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _emit_record(record, output_format: Optional[str], output_path: Optional[str]) -> None:
    if (output_format or "json") == "csv":
        flat = _flatten(record)
        text = _csv_text(list(flat), [list(flat.values())])
    else:
        text = _json_text(record)
    _emit(text, output_path)


def _load_config(path: Optional[str]):
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = sorted(set(data) - _CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    sweep = data.get("sweep")
    if sweep is not None:
        if not isinstance(sweep, dict):
            raise ConfigError("config sweep must be an object")
        bad = sorted(set(sweep) - _SWEEP_KEYS)
        if bad:
            raise ConfigError(f"unknown sweep key(s): {', '.join(bad)}")
    return data


#: slack for snapping decimal-truncated angles onto the pi/4 boundary
_ANGLE_SNAP = 1e-9


def _snap_angle(value: Optional[float]) -> Optional[float]:
    """Round an angle onto pi/4 when it misses only by decimal truncation."""
    if value is not None and abs(value - math.pi / 4.0) <= _ANGLE_SNAP:
        return math.pi / 4.0
    return value


def _cli_theta(theta: Optional[float], overlap: Optional[float], degrees: bool):
    """Collapse the --theta/--overlap/--degrees flags into radians (or None)."""
    if theta is not None and overlap is not None:
        raise ConfigError("give either --theta or --overlap, not both")
    if overlap is not None:
        if not -1.0 <= overlap <= 1.0:
            raise ConfigError(f"overlap must lie in [-1, 1], got {overlap}")
        return 0.5 * math.acos(overlap)
    if theta is None:
        return None
    return math.radians(theta) if degrees else theta


def _merged_config(config_path: Optional[str], **flags):
    """Defaults, overlaid by the config file, overlaid by explicit flags."""
    cfg = {
        "theta": None,
        "m": 1,
        "n": 2,
        "eta_plus": 0.5,
        "mode": None,
        "p_s": None,
        "sweep": None,
        "output_format": None,
        "output_path": None,
    }
    cfg.update(_load_config(config_path))
    for key, value in flags.items():
        if value is not None:
            cfg[key] = value
    return cfg


def _build_problem(cfg) -> bounds.CloningProblem:
    if cfg["theta"] is None:
        raise ConfigError("theta is required: give --theta, --overlap, or a config file")
    try:
        return bounds.CloningProblem(
            theta=float(_snap_angle(float(cfg["theta"]))),
            m_copies=int(cfg["m"]),
            n_copies=int(cfg["n"]),
            eta_plus=float(cfg["eta_plus"]),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _problem_options(fn):
    decorators = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(exists=True, dir_okay=False),
            default=None,
            help="JSON config file; explicit flags override its entries.",
        ),
        click.option(
            "--theta",
            type=float,
            default=None,
            help="Family half-angle in radians (degrees with --degrees).",
        ),
        click.option(
            "--overlap",
            type=float,
            default=None,
            help="State overlap s instead of theta; theta = arccos(s)/2.",
        ),
        click.option(
            "--degrees",
            is_flag=True,
            help="Interpret angles given on the command line as degrees.",
        ),
        click.option("--m", "-m", "m", type=int, default=None, help="Input copies (default 1)."),
        click.option("--n", "-n", "n", type=int, default=None, help="Output copies (default 2)."),
        click.option(
            "--eta-plus",
            "eta_plus",
            type=float,
            default=None,
            help="Prior probability of the plus state (default 0.5).",
        ),
        click.option(
            "--format",
            "output_format",
            type=click.Choice(["json", "csv"]),
            default=None,
            help="Output format (bounds/simulate default json, tradeoff csv).",
        ),
        click.option(
            "--output",
            "output_path",
            type=click.Path(dir_okay=False),
            default=None,
            help="Write the report to a file instead of stdout.",
        ),
    ]
    for decorator in reversed(decorators):
        fn = decorator(fn)
    return fn


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main() -> None:
    """Two-state cloning: closed-form bounds, exact network simulation,
    and CNOT-level gate decompositions.

    CLONEFORGE_SEED is accepted in the environment but has no effect;
    every number here is computed analytically or by exact projection.
    """


@main.command("bounds")
@_problem_options
@click.option(
    "--p-s",
    "p_s",
    type=float,
    default=None,
    help="Hybrid success probability; adds f_hybrid to the record.",
)
def bounds_cmd(config_path, theta, overlap, degrees, m, n, eta_plus, output_format, output_path, p_s):
    """Closed-form fidelity and probability bounds for one problem."""
    cfg = _merged_config(
        config_path,
        theta=_cli_theta(theta, overlap, degrees),
        m=m,
        n=n,
        eta_plus=eta_plus,
        p_s=p_s,
        output_format=output_format,
        output_path=output_path,
    )
    problem = _build_problem(cfg)
    try:
        s_m = bounds.overlap_after_copies(problem.theta, problem.m_copies)
        record = {
            "f_max": bounds.fidelity_bound(problem),
            "helstrom": bounds.helstrom_bound(problem.eta_plus, s_m),
            "p_exact": bounds.exact_clone_probability(
                problem.theta, problem.m_copies, problem.n_copies
            ),
            "p_idp": bounds.idp_probability(s_m),
            "theta_m": problem.theta_m,
            "theta_n": problem.theta_n,
        }
        if cfg["p_s"] is not None:
            if abs(problem.eta_plus - 0.5) > 1e-12:
                raise ValueError("the hybrid trade-off is defined for equal priors only")
            point = bounds.hybrid_fidelity_bound(
                problem.theta, problem.m_copies, problem.n_copies, float(cfg["p_s"])
            )
            record["f_hybrid"] = point.fidelity_bound
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _emit_record(record, cfg["output_format"], cfg["output_path"])


@main.command("simulate")
@_problem_options
@click.option(
    "--mode",
    type=click.Choice(list(networks.MODES)),
    default=None,
    help="Cloning strategy to simulate.",
)
@click.option(
    "--p-s",
    "p_s",
    type=float,
    default=None,
    help="Success probability (required for hybrid mode).",
)
@click.option(
    "--decompose-gates",
    is_flag=True,
    help="Replace every two-qubit gate by its CNOT circuit before running.",
)
@click.option(
    "--strict",
    is_flag=True,
    help=f"Exit 3 if simulation deviates from its bound by more than {STRICT_TOL:g}.",
)
def simulate_cmd(
    config_path,
    theta,
    overlap,
    degrees,
    m,
    n,
    eta_plus,
    output_format,
    output_path,
    mode,
    p_s,
    decompose_gates,
    strict,
):
    """Simulate a cloning network and compare it against its bounds."""
    cfg = _merged_config(
        config_path,
        theta=_cli_theta(theta, overlap, degrees),
        m=m,
        n=n,
        eta_plus=eta_plus,
        mode=mode,
        p_s=p_s,
        output_format=output_format,
        output_path=output_path,
    )
    problem = _build_problem(cfg)
    if cfg["mode"] is None:
        raise ConfigError("mode is required: choose exact, approx, or hybrid")
    if cfg["mode"] not in networks.MODES:
        raise ConfigError(f"mode must be one of {networks.MODES}, got {cfg['mode']!r}")
    if cfg["mode"] == "hybrid" and cfg["p_s"] is None:
        raise ConfigError("hybrid mode requires p_s")
    run_p_s = float(cfg["p_s"]) if cfg["mode"] == "hybrid" else None
    try:
        report = networks.evaluate_cloner(
            problem, cfg["mode"], p_s=run_p_s, decompose_gates=decompose_gates
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    record = {
        "mode": report.mode,
        "theta": problem.theta,
        "m": problem.m_copies,
        "n": problem.n_copies,
        "eta_plus": problem.eta_plus,
        "plus": {
            "success_probability": report.plus_result.success_probability,
            "fidelity": report.plus_result.global_fidelity_vs_exact,
        },
        "minus": {
            "success_probability": report.minus_result.success_probability,
            "fidelity": report.minus_result.global_fidelity_vs_exact,
        },
        "fidelity": report.fidelity,
        "success_probability": report.success_probability,
        "fidelity_bound": report.fidelity_bound,
        "success_bound": report.success_bound,
        "fidelity_deviation": report.fidelity_deviation,
        "success_deviation": report.success_deviation,
    }
    if run_p_s is not None:
        record["p_s"] = run_p_s
    _emit_record(record, cfg["output_format"], cfg["output_path"])
    worst = max(report.fidelity_deviation, report.success_deviation)
    if strict and worst > STRICT_TOL:
        raise StrictDeviationError(
            f"deviation {worst:.3e} exceeds the strict tolerance {STRICT_TOL:g}"
        )


@main.command("tradeoff")
@_problem_options
@click.option("--start", type=float, default=None, help="Sweep start (default: exact-cloning probability).")
@click.option("--stop", type=float, default=None, help="Sweep stop (default 1).")
@click.option("--steps", type=int, default=None, help="Number of sweep points (default 11).")
def tradeoff_cmd(
    config_path,
    theta,
    overlap,
    degrees,
    m,
    n,
    eta_plus,
    output_format,
    output_path,
    start,
    stop,
    steps,
):
    """Sweep the hybrid success probability and tabulate the trade-off."""
    cfg = _merged_config(
        config_path,
        theta=_cli_theta(theta, overlap, degrees),
        m=m,
        n=n,
        eta_plus=eta_plus,
        output_format=output_format,
        output_path=output_path,
    )
    problem = _build_problem(cfg)
    if abs(problem.eta_plus - 0.5) > 1e-12:
        raise ConfigError("the hybrid trade-off is defined for equal priors only")
    sweep = dict(cfg["sweep"] or {})
    if start is not None:
        sweep["start"] = start
    if stop is not None:
        sweep["stop"] = stop
    if steps is not None:
        sweep["steps"] = steps
    if sweep.get("param", "p_s") != "p_s":
        raise ConfigError(f"only p_s sweeps are supported, got {sweep.get('param')!r}")
    try:
        p_lo = bounds.exact_clone_probability(
            problem.theta, problem.m_copies, problem.n_copies
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    try:
        start_v = float(sweep.get("start", p_lo))
        stop_v = float(sweep.get("stop", 1.0))
        steps_v = int(sweep.get("steps", 11))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid sweep values: {exc}") from exc
    if steps_v < 2:
        raise ConfigError("sweep needs at least 2 steps")
    if not (p_lo - 1e-9 <= start_v <= stop_v <= 1.0 + 1e-12):
        raise ConfigError(
            f"sweep bounds must satisfy {_fmt(p_lo)} <= start <= stop <= 1, "
            f"got [{start_v}, {stop_v}]"
        )
    rows = []
    for i in range(steps_v):
        p_req = start_v + (stop_v - start_v) * i / (steps_v - 1)
        p_req = min(1.0, max(p_lo, p_req))
        try:
            point = bounds.hybrid_fidelity_bound(
                problem.theta, problem.m_copies, problem.n_copies, p_req
            )
            report = networks.evaluate_cloner(problem, "hybrid", p_s=p_req)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        rows.append(
            [
                point.p_success,
                point.fidelity_bound,
                report.fidelity,
                report.success_probability,
                max(report.fidelity_deviation, report.success_deviation),
            ]
        )
    header = ["p_s", "f_bound", "f_simulated", "p_success_simulated", "abs_deviation"]
    if (cfg["output_format"] or "csv") == "json":
        text = _json_text([dict(zip(header, row)) for row in rows])
    else:
        text = _csv_text(header, rows)
    _emit(text, cfg["output_path"])


def _placement_json(placement: gates.GatePlacement):
    if placement.kind == gates.KIND_CNOT:
        return {
            "gate": "CNOT",
            "qubits": list(placement.qubits),
            "control_active": "plus",
        }
    matrix = [
        [[float(entry.real), float(entry.imag)] for entry in row]
        for row in placement.gate.entries
    ]
    return {"gate": "LU", "qubits": list(placement.qubits), "matrix": matrix}


@main.command("decompose")
@click.option(
    "--gate",
    "gate_name",
    type=click.Choice(["transfer", "separation"]),
    required=True,
    help="Which two-qubit gate to decompose.",
)
@click.option(
    "--theta1",
    type=float,
    required=True,
    help="transfer: first copy angle; separation: input angle.",
)
@click.option(
    "--theta2",
    type=float,
    required=True,
    help="transfer: second copy angle; separation: output angle.",
)
@click.option("--degrees", is_flag=True, help="Angles are given in degrees.")
@click.option(
    "--output",
    "output_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="Write the circuit JSON to a file instead of stdout.",
)
def decompose_cmd(gate_name, theta1, theta2, degrees, output_path):
    """Emit a CNOT + single-qubit circuit for a two-qubit gate as JSON.

    Placements are listed in time order on local wires 0 and 1 (wire 0 is
    the more significant qubit of the gate; for CNOT entries the first
    listed qubit is the control, active on |+>).
    """
    if degrees:
        theta1 = math.radians(theta1)
        theta2 = math.radians(theta2)
    theta1 = _snap_angle(theta1)
    theta2 = _snap_angle(theta2)
    try:
        if gate_name == "transfer":
            circuit = gates.decompose_transfer(theta1, theta2)
        else:
            circuit = gates.decompose_separation(theta1, theta2)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    record = {
        "gate": gate_name,
        "angles": [theta1, theta2],
        "placements": [_placement_json(p) for p in circuit.placements],
        "cnot_count": circuit.cnot_count,
        "max_abs_error": circuit.max_abs_error,
    }
    _emit(_json_text(record), output_path)


@main.command("verify")
def verify_cmd():
    """Run the built-in verification suites; exit 0 only if all pass."""
    results = verify_suites.run_all()
    width = max(len(result.name) for result in results)
    for result in results:
        status = "ok  " if result.passed else "FAIL"
        line = (
            f"{status}  {result.name:<{width}}  max|err| {result.max_error:.3e}"
            f"  (tol {result.tolerance:g})"
        )
        if result.detail:
            line += f"  {result.detail}"
        click.echo(line)
    passed = sum(1 for result in results if result.passed)
    click.echo(f"{passed}/{len(results)} suites passed")
    if passed != len(results):
        raise SystemExit(1)


if __name__ == "__main__":
    main()
