"""Built-in verification suites behind ``cloneforge verify``.

Each suite re-derives a family of claims numerically and reports the worst
absolute error it saw.  The suites intentionally overlap with the test
suite: this module is what ships to a user who wants to check an install
without a dev environment.

``TOLERANCES`` is module-level and looked up at call time, so a harness can
tighten a bound to exercise the failure path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from . import bounds, gates, linalg, networks

TOLERANCES: Dict[str, float] = {
    "gate_algebra": 1e-12,
    "decomposition": 1e-10,
    "exact_network": 1e-10,
    "approx_network": 1e-10,
    "brute_force": 1e-6,
    "hybrid_success": 1e-10,
    "hybrid_fidelity": 1e-9,
    "asymptotic_helstrom": 1e-6,
    "asymptotic_hybrid_limit": 1e-8,
    "d_cloner": 1e-12,
    "decomposed_shift": 1e-9,
    "cli_determinism": 0.0,
}

_THETAS = (math.pi / 16, math.pi / 8, 3 * math.pi / 16, math.pi / 4)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    detail: str = ""


def _result(name: str, tol_key: str, max_error: float, detail: str = "") -> CheckResult:
    tol = TOLERANCES[tol_key]
    return CheckResult(
        name=name,
        passed=max_error <= tol,
        max_error=max_error,
        tolerance=tol,
        detail=detail,
    )


def _merge(name: str, detail: str, *components: CheckResult) -> CheckResult:
    """Combine sub-checks, displaying the one closest to its tolerance."""
    binding = max(
        components, key=lambda c: c.max_error / c.tolerance if c.tolerance else 1.0
    )
    return CheckResult(
        name=name,
        passed=all(c.passed for c in components),
        max_error=binding.max_error,
        tolerance=binding.tolerance,
        detail=detail,
    )


def check_gate_algebra() -> CheckResult:
    """Transfer gates are real, Hermitian, self-inverse, and act as claimed."""
    worst = 0.0
    grid = np.linspace(0.01, math.pi / 4, 8)
    eye = np.eye(4)
    for t1 in grid:
        for t2 in grid:
            d = gates.transfer_gate(t1, t2).entries
            worst = max(worst, float(np.max(np.abs(d.imag))))
            worst = max(worst, float(np.max(np.abs(d - d.conj().T))))
            worst = max(worst, float(np.max(np.abs(d @ d - eye))))
            for sign in (linalg.PLUS, linalg.MINUS):
                pair = linalg.kron(
                    linalg.family_state(t1, sign), linalg.family_state(t2, sign)
                )
                t3 = bounds.compose_angle(t1, t2)
                merged = linalg.kron(
                    linalg.family_state(t3, sign), linalg.basis_state(1, 0)
                )
                out = linalg.apply_gate(pair, gates.transfer_gate(t1, t2), (0, 1))
                worst = max(worst, float(np.max(np.abs(out.amps - merged.amps))))
    return _result("gate-algebra", "gate_algebra", worst, f"{len(grid)}x{len(grid)} grid")


def check_decompositions() -> CheckResult:
    """CNOT + local-unitary circuits rebuild the two-qubit gates exactly."""
    worst = 0.0
    cnots = []
    for t1, t2 in [(0.2, 0.5), (math.pi / 8, math.pi / 8), (0.01, 0.7), (0.0, 0.0)]:
        circuit = gates.decompose_transfer(t1, t2)
        worst = max(worst, circuit.max_abs_error)
        cnots.append(circuit.cnot_count)
    for t_in, t_out in [(0.2, 0.5), (math.pi / 8, math.pi / 4), (0.3, 0.3)]:
        circuit = gates.decompose_separation(t_in, t_out)
        worst = max(worst, circuit.max_abs_error)
        cnots.append(circuit.cnot_count)
    return _result(
        "decompositions", "decomposition", worst, f"CNOT counts {tuple(cnots)}"
    )


def check_exact_networks() -> CheckResult:
    """Heralded networks clone perfectly at the closed-form success rate."""
    worst = 0.0
    cases = 0
    for theta in _THETAS:
        for m, n in [(1, 2), (1, 4), (2, 3), (3, 5)]:
            problem = bounds.CloningProblem(theta=theta, m_copies=m, n_copies=n)
            report = networks.evaluate_cloner(problem, "exact")
            worst = max(worst, report.fidelity_deviation, report.success_deviation)
            cases += 1
    return _result("exact-networks", "exact_network", worst, f"{cases} cases")


def check_approx_networks() -> CheckResult:
    """Deterministic networks hit the closed-form optimum for any priors."""
    worst = 0.0
    cases = 0
    for theta in (math.pi / 8, 3 * math.pi / 16):
        for eta_plus in (0.5, 0.7, 0.9):
            for m, n in [(1, 2), (2, 4)]:
                problem = bounds.CloningProblem(
                    theta=theta, m_copies=m, n_copies=n, eta_plus=eta_plus
                )
                report = networks.evaluate_cloner(problem, "approx")
                worst = max(worst, report.fidelity_deviation, report.success_deviation)
                cases += 1
    return _result("approx-networks", "approx_network", worst, f"{cases} cases")


def check_brute_force() -> CheckResult:
    """The closed-form optimum matches a direct scan over output angles."""
    worst = 0.0
    cases = 0
    for theta in (math.pi / 8, math.pi / 4):
        for eta_plus in (0.5, 0.7, 0.9):
            problem = bounds.CloningProblem(
                theta=theta, m_copies=1, n_copies=3, eta_plus=eta_plus
            )
            closed = bounds.fidelity_bound(problem)
            scanned = bounds.brute_force_fidelity(problem, grid_size=1200)
            worst = max(worst, abs(closed - scanned))
            cases += 1
    return _result("brute-force", "brute_force", worst, f"{cases} cases")


def check_hybrid_networks() -> CheckResult:
    """Hybrid networks trace the fidelity/success trade-off curve."""
    worst_f = 0.0
    worst_p = 0.0
    cases = 0
    for theta in (math.pi / 8, 3 * math.pi / 16):
        for m, n in [(1, 2), (2, 4)]:
            problem = bounds.CloningProblem(theta=theta, m_copies=m, n_copies=n)
            p_lo = bounds.exact_clone_probability(theta, m, n)
            for p_s in (p_lo, (p_lo + 1.0) / 2.0, 1.0):
                report = networks.evaluate_cloner(problem, "hybrid", p_s=p_s)
                worst_f = max(worst_f, report.fidelity_deviation)
                worst_p = max(worst_p, report.success_deviation)
                cases += 1
    name = "hybrid-networks"
    return _merge(
        name,
        f"{cases} cases; success dev {worst_p:.3e}, fidelity dev {worst_f:.3e}",
        _result(name, "hybrid_success", worst_p),
        _result(name, "hybrid_fidelity", worst_f),
    )


def check_asymptotics() -> CheckResult:
    """Large-N cloning bounds converge to the discrimination bounds."""
    worst_h = 0.0
    for theta in (math.pi / 8, 3 * math.pi / 16, math.pi / 4):
        for eta_plus in (0.5, 0.7):
            problem = bounds.CloningProblem(
                theta=theta, m_copies=1, n_copies=50, eta_plus=eta_plus
            )
            f_n = bounds.fidelity_bound(problem)
            s_m = bounds.overlap_after_copies(theta, 1)
            helstrom = bounds.helstrom_bound(eta_plus, s_m)
            worst_h = max(worst_h, abs(f_n - helstrom))
    helstrom_res = _result("asymptotics", "asymptotic_helstrom", worst_h)

    worst_l = 0.0
    theta = 3 * math.pi / 16
    n = 40
    p_lo = bounds.exact_clone_probability(theta, 1, n)
    p_idp = bounds.idp_probability(bounds.overlap_after_copies(theta, 1))
    for p_s in np.linspace(p_lo, 1.0, 7):
        point = bounds.hybrid_fidelity_bound(theta, 1, n, float(p_s))
        limit = bounds.hybrid_limit(float(p_s), p_idp)
        worst_l = max(worst_l, abs(point.fidelity_bound - limit))
    limit_res = _result("asymptotics", "asymptotic_hybrid_limit", worst_l)

    return _merge(
        "asymptotics",
        f"Helstrom gap {worst_h:.3e} (N=50), limit gap {worst_l:.3e} (N=40)",
        helstrom_res,
        limit_res,
    )


def check_d_cloner() -> CheckResult:
    """A lone transfer gate on a blank wire is a symmetric 1->2 cloner."""
    worst = 0.0
    for theta1 in (math.pi / 16, math.pi / 8, 3 * math.pi / 16):
        theta3 = bounds.compose_angle(theta1, theta1)
        gate = gates.transfer_gate(theta1, theta1)
        local_expect = bounds.d_cloner_local_fidelity(theta3, theta1)
        global_expect = bounds.d_cloner_global_fidelity(theta3, theta1)
        for sign in (linalg.PLUS, linalg.MINUS):
            src = linalg.kron(
                linalg.family_state(theta3, sign), linalg.basis_state(1, 0)
            )
            out = linalg.apply_gate(src, gate, (0, 1))
            pair = linalg.family_state(theta1, sign, copies=2)
            # the split is exact ...
            worst = max(worst, abs(abs(linalg.inner(pair, out)) - 1.0))
            # ... and each copy overlaps the original by the claimed amount
            ideal = linalg.family_state(theta3, sign, copies=2)
            worst = max(worst, abs(abs(linalg.inner(ideal, out)) - global_expect))
            single = abs(
                linalg.inner(
                    linalg.family_state(theta3, sign),
                    linalg.family_state(theta1, sign),
                )
            )
            worst = max(worst, abs(single - local_expect))
    return _result("d-cloner", "d_cloner", worst)


def check_decomposed_networks() -> CheckResult:
    """CNOT-level networks report the same numbers as gate-level ones."""
    worst = 0.0
    cases = 0
    for theta, m, n, mode, p_s in [
        (math.pi / 8, 1, 3, "exact", None),
        (math.pi / 8, 1, 3, "approx", None),
        (3 * math.pi / 16, 2, 4, "hybrid", 0.9),
    ]:
        problem = bounds.CloningProblem(theta=theta, m_copies=m, n_copies=n)
        plain = networks.evaluate_cloner(problem, mode, p_s=p_s)
        wired = networks.evaluate_cloner(problem, mode, p_s=p_s, decompose_gates=True)
        worst = max(
            worst,
            abs(plain.fidelity - wired.fidelity),
            abs(plain.success_probability - wired.success_probability),
        )
        cases += 1
    return _result("decomposed-networks", "decomposed_shift", worst, f"{cases} cases")


def check_cli_determinism() -> CheckResult:
    """Repeated CLI invocations are byte-identical."""
    from click.testing import CliRunner

    from .cli import main

    runner = CliRunner()
    argsets = [
        ["bounds", "--theta", "0.4", "-m", "1", "-n", "3", "--eta-plus", "0.7"],
        [
            "tradeoff",
            "--theta",
            "0.392699081698724",
            "-m",
            "1",
            "-n",
            "2",
            "--steps",
            "5",
        ],
    ]
    mismatches = 0
    for args in argsets:
        first = runner.invoke(main, args, catch_exceptions=False)
        second = runner.invoke(main, args, catch_exceptions=False)
        if first.exit_code != 0 or second.exit_code != 0:
            mismatches += 1
        elif first.stdout_bytes != second.stdout_bytes:
            mismatches += 1
    return _result(
        "cli-determinism", "cli_determinism", float(mismatches), f"{len(argsets)} commands"
    )


_SUITES: List[Callable[[], CheckResult]] = [
    check_gate_algebra,
    check_decompositions,
    check_exact_networks,
    check_approx_networks,
    check_brute_force,
    check_hybrid_networks,
    check_asymptotics,
    check_d_cloner,
    check_decomposed_networks,
    check_cli_determinism,
]


def run_all() -> List[CheckResult]:
    """Run every verification suite and return the results in order."""
    return [suite() for suite in _SUITES]
