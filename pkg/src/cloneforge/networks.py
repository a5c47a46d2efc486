"""Assembly and exact simulation of the cloning networks.

Three strategies share one layout: ``N`` system qubits (indices 0..N-1) and,
when a heralding stage exists, one ancilla at index ``N`` (always last, so
system indices never shift).

* exact:   compress M copies onto qubit 0, separate the compressed angle all
           the way to the N-copy angle with an ancilla-heralded gate, then
           decompress.  Succeeds with the exact-cloning probability and
           yields perfect clones.
* approx:  compress, rotate qubit 0 to the optimal compressed output, and
           decompress.  Deterministic; prior-weighted fidelity saturates the
           closed-form optimum.
* hybrid:  compress, separate part of the way (success probability p_s),
           rotate to the optimal equal-prior output for the separated angle,
           and decompress.  Interpolates between the two strategies.

Probabilities are computed by exact projection -- never sampled -- so
repeated runs are bit-identical and 1e-10 comparisons are meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .bounds import (
    CloningProblem,
    OptimalAngles,
    angle_for_copies,
    clone_coefficients,
    exact_clone_probability,
    fidelity_bound,
    hybrid_fidelity_bound,
    optimal_phis,
    separated_angle,
)
from .gates import (
    KIND_CLONE,
    KIND_SEPARATION,
    KIND_TRANSFER,
    GatePlacement,
    clone_gate,
    decompose_separation,
    decompose_transfer,
    separation_gate,
    transfer_gate,
)
from .linalg import (
    MINUS,
    PLUS,
    StateVector,
    apply_gate,
    basis_state,
    discard_qubit,
    family_state,
    global_fidelity,
    kron,
    project_qubit,
)

#: modes understood by evaluate_cloner and the CLI
MODES = ("exact", "approx", "hybrid")


@dataclass(frozen=True)
class Measurement:
    """Heralding measurement: project ``qubit`` and keep ``success_outcome``."""

    qubit: int
    success_outcome: str = PLUS


@dataclass(frozen=True)
class NetworkSpec:
    """An ordered gate list on ``n_qubits`` wires plus an optional herald.

    The measurement, when present, happens immediately after the last
    placement touching the measured qubit; later placements act on the
    post-selected branch only (the failure branch is frozen at the point of
    failure).
    """

    n_qubits: int
    placements: Tuple[GatePlacement, ...]
    measurement: Optional[Measurement] = None

    def __post_init__(self):
        for p in self.placements:
            for q in p.qubits:
                if not (0 <= q < self.n_qubits):
                    raise ValueError(
                        f"placement {p.label!r} references qubit {q}, but the "
                        f"network has {self.n_qubits} qubit(s)"
                    )
        if self.measurement is not None:
            if not (0 <= self.measurement.qubit < self.n_qubits):
                raise ValueError("measurement qubit out of range")


@dataclass(frozen=True)
class SimulationResult:
    """Outcome of one network run on one input sign."""

    success_probability: float
    post_state: StateVector
    global_fidelity_vs_exact: float
    input_sign: str
    failure_state: Optional[StateVector] = None


@dataclass(frozen=True)
class ClonerReport:
    """Both-sign evaluation of a cloning strategy against its bounds."""

    problem: CloningProblem
    mode: str
    p_s: Optional[float]
    plus_result: SimulationResult
    minus_result: SimulationResult
    fidelity: float
    success_probability: float
    fidelity_bound: float
    success_bound: float
    fidelity_deviation: float
    success_deviation: float


def prepare_input(problem: CloningProblem, sign: str, with_ancilla: bool) -> StateVector:
    """M family-state copies, N-M blank |+> qubits, optional |+> ancilla."""
    m, n = problem.m_copies, problem.n_copies
    state = family_state(problem.theta, sign, copies=m)
    blanks = n - m + (1 if with_ancilla else 0)
    if blanks:
        state = kron(state, basis_state(blanks, 0))
    return state


def _transfer_placement(theta1: float, theta2: float, qubits: Tuple[int, int]) -> GatePlacement:
    return GatePlacement(
        gate=transfer_gate(theta1, theta2),
        qubits=qubits,
        label=f"transfer({theta1:.6g},{theta2:.6g})@{qubits}",
        kind=KIND_TRANSFER,
        params=(theta1, theta2),
    )


def compression_sequence(problem: CloningProblem) -> NetworkSpec:
    """Concentrate the M input copies onto qubit 0 (empty for M = 1).

    Pair after pair is folded in: the gate at (j-1, j) combines one fresh
    copy with the angle accumulated so far, leaving the accumulated state on
    qubit j-1 and a blank on qubit j.
    """
    theta = problem.theta
    placements = tuple(
        _transfer_placement(
            theta,
            angle_for_copies(theta, problem.m_copies - j),
            (j - 1, j),
        )
        for j in range(problem.m_copies - 1, 0, -1)
    )
    return NetworkSpec(n_qubits=problem.n_copies, placements=placements)


def decompression_sequence(problem: CloningProblem) -> NetworkSpec:
    """Spread the compressed state on qubit 0 over all N qubits.

    The same gates as compression for the full N, run in the opposite
    order; each gate is self-inverse, so this is exactly the inverse of an
    N-copy compression.  By linearity a superposition of the two compressed
    outputs becomes the corresponding superposition of N-copy states.
    """
    theta = problem.theta
    placements = tuple(
        _transfer_placement(
            theta,
            angle_for_copies(theta, problem.n_copies - j),
            (j - 1, j),
        )
        for j in range(1, problem.n_copies)
    )
    return NetworkSpec(n_qubits=problem.n_copies, placements=placements)


def _separation_placement(theta_in: float, theta_out: float, n: int) -> GatePlacement:
    return GatePlacement(
        gate=separation_gate(theta_in, theta_out),
        qubits=(n, 0),
        label=f"separation({theta_in:.6g},{theta_out:.6g})@({n},0)",
        kind=KIND_SEPARATION,
        params=(theta_in, theta_out),
    )


def exact_network(problem: CloningProblem) -> NetworkSpec:
    """Heralded perfect cloning: compress, separate to theta_N, decompress."""
    if problem.theta == 0.0:
        raise ValueError("identical states: theta = 0 admits no cloning problem")
    n = problem.n_copies
    theta_m = problem.theta_m
    theta_n = problem.theta_n
    placements = (
        compression_sequence(problem).placements
        + (_separation_placement(theta_m, theta_n, n),)
        + decompression_sequence(problem).placements
    )
    return NetworkSpec(
        n_qubits=n + 1,
        placements=placements,
        measurement=Measurement(qubit=n, success_outcome=PLUS),
    )


def approx_network(problem: CloningProblem) -> NetworkSpec:
    """Deterministic optimal cloning: compress, rotate qubit 0, decompress."""
    if problem.theta == 0.0:
        raise ValueError("identical states: theta = 0 admits no cloning problem")
    theta_m = problem.theta_m
    theta_n = problem.theta_n
    coeffs = clone_coefficients(optimal_phis(problem), theta_n)
    rotate = GatePlacement(
        gate=clone_gate(theta_m, theta_n, coeffs),
        qubits=(0,),
        label=f"clone({theta_m:.6g}->{theta_n:.6g})@0",
        kind=KIND_CLONE,
        params=(theta_m, theta_n),
    )
    placements = (
        compression_sequence(problem).placements
        + (rotate,)
        + decompression_sequence(problem).placements
    )
    return NetworkSpec(n_qubits=problem.n_copies, placements=placements)


def hybrid_network(problem: CloningProblem, p_s: float) -> NetworkSpec:
    """Partial separation at success probability p_s, then optimal rotation.

    Only defined for equal priors.  The separated angle theta_tilde solves
    the separation bound at equality for p_s; the follow-up rotation uses
    the equal-prior optimal output angles (+/- theta_tilde) for the
    separated pair.  p_s at the exact-cloning probability reproduces the
    exact network (the rotation collapses to the identity); p_s = 1
    reproduces the deterministic network.
    """
    if abs(problem.eta_plus - 0.5) > 1e-12:
        raise ValueError("hybrid cloning requires equal priors")
    if problem.theta == 0.0:
        raise ValueError("identical states: theta = 0 admits no cloning problem")
    n = problem.n_copies
    theta_m = problem.theta_m
    theta_n = problem.theta_n
    tilde = separated_angle(theta_m, theta_n, p_s)
    coeffs = clone_coefficients(
        OptimalAngles(phi_plus=tilde, phi_minus=-tilde), theta_n
    )
    rotate = GatePlacement(
        gate=clone_gate(tilde, theta_n, coeffs),
        qubits=(0,),
        label=f"clone({tilde:.6g}->{theta_n:.6g})@0",
        kind=KIND_CLONE,
        params=(tilde, theta_n),
    )
    placements = (
        compression_sequence(problem).placements
        + (_separation_placement(theta_m, tilde, n),)
        + (rotate,)
        + decompression_sequence(problem).placements
    )
    return NetworkSpec(
        n_qubits=n + 1,
        placements=placements,
        measurement=Measurement(qubit=n, success_outcome=PLUS),
    )


def expand_decompositions(spec: NetworkSpec) -> NetworkSpec:
    """Replace every transfer/separation gate by its CNOT circuit.

    Placements of other kinds (already single-qubit) are kept as-is.  The
    resulting network simulates to the same numbers as the original.
    """
    expanded = []
    for p in spec.placements:
        if p.kind == KIND_TRANSFER:
            circuit = decompose_transfer(*p.params)
        elif p.kind == KIND_SEPARATION:
            circuit = decompose_separation(*p.params)
        else:
            expanded.append(p)
            continue
        for dp in circuit.placements:
            expanded.append(
                GatePlacement(
                    gate=dp.gate,
                    qubits=tuple(p.qubits[q] for q in dp.qubits),
                    label=f"{dp.label} [from {p.label}]",
                    kind=dp.kind,
                    params=dp.params,
                )
            )
    return NetworkSpec(
        n_qubits=spec.n_qubits,
        placements=tuple(expanded),
        measurement=spec.measurement,
    )


def run_network(
    spec: NetworkSpec,
    input_state: StateVector,
    *,
    input_sign: str = PLUS,
    reference: StateVector,
) -> SimulationResult:
    """Run a network on one input and compare against a reference state.

    Placements are applied in order.  If a measurement is present it fires
    immediately after the last placement touching the measured qubit: the
    success branch is post-selected (probability recorded) and the remaining
    placements act on it; the failure branch is kept, frozen at the point of
    failure, with the measured qubit dropped from both branches (after
    projection it is in an exact product state).  ``reference`` must have
    the network's qubit count minus the measured qubit, and the reported
    fidelity is the squared overlap with it.
    """
    if input_state.n_qubits != spec.n_qubits:
        raise ValueError(
            f"input has {input_state.n_qubits} qubit(s), network expects {spec.n_qubits}"
        )
    state = input_state
    if spec.measurement is None:
        for p in spec.placements:
            state = apply_gate(state, p.gate, p.qubits)
        if reference.n_qubits != spec.n_qubits:
            raise ValueError("reference size does not match the network output")
        return SimulationResult(
            success_probability=1.0,
            post_state=state,
            global_fidelity_vs_exact=global_fidelity(reference, state),
            input_sign=input_sign,
            failure_state=None,
        )
    meas = spec.measurement
    if reference.n_qubits != spec.n_qubits - 1:
        raise ValueError("reference size does not match the post-selected output")
    last_touch = -1
    for i, p in enumerate(spec.placements):
        if meas.qubit in p.qubits:
            last_touch = i
    for p in spec.placements[: last_touch + 1]:
        state = apply_gate(state, p.gate, p.qubits)
    prob, success = project_qubit(state, meas.qubit, meas.success_outcome)
    failure_state = None
    if 1.0 - prob > 1e-12:
        fail_outcome = MINUS if meas.success_outcome == PLUS else PLUS
        _, failure = project_qubit(state, meas.qubit, fail_outcome)
        failure_state = discard_qubit(failure, meas.qubit)
    state = success
    for p in spec.placements[last_touch + 1 :]:
        state = apply_gate(state, p.gate, p.qubits)
    post = discard_qubit(state, meas.qubit)
    return SimulationResult(
        success_probability=prob,
        post_state=post,
        global_fidelity_vs_exact=global_fidelity(reference, post),
        input_sign=input_sign,
        failure_state=failure_state,
    )


def evaluate_cloner(
    problem: CloningProblem,
    mode: str,
    p_s: Optional[float] = None,
    *,
    decompose_gates: bool = False,
) -> ClonerReport:
    """Simulate both input signs and compare against the analytic bounds.

    ``decompose_gates=True`` swaps every two-qubit gate for its CNOT
    decomposition before running (the reported numbers must not move).
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "hybrid":
        if p_s is None:
            raise ValueError("hybrid mode requires a success probability p_s")
        spec = hybrid_network(problem, p_s)
        point = hybrid_fidelity_bound(
            problem.theta, problem.m_copies, problem.n_copies, p_s
        )
        f_bound, p_bound = point.fidelity_bound, point.p_success
    elif mode == "exact":
        spec = exact_network(problem)
        f_bound = 1.0
        p_bound = exact_clone_probability(
            problem.theta, problem.m_copies, problem.n_copies
        )
    else:
        spec = approx_network(problem)
        f_bound = fidelity_bound(problem)
        p_bound = 1.0
    if decompose_gates:
        spec = expand_decompositions(spec)
    with_ancilla = spec.measurement is not None
    results = {}
    for sign in (PLUS, MINUS):
        results[sign] = run_network(
            spec,
            prepare_input(problem, sign, with_ancilla),
            input_sign=sign,
            reference=family_state(problem.theta, sign, copies=problem.n_copies),
        )
    fidelity = (
        problem.eta_plus * results[PLUS].global_fidelity_vs_exact
        + problem.eta_minus * results[MINUS].global_fidelity_vs_exact
    )
    success = (
        problem.eta_plus * results[PLUS].success_probability
        + problem.eta_minus * results[MINUS].success_probability
    )
    return ClonerReport(
        problem=problem,
        mode=mode,
        p_s=p_s,
        plus_result=results[PLUS],
        minus_result=results[MINUS],
        fidelity=fidelity,
        success_probability=success,
        fidelity_bound=f_bound,
        success_bound=p_bound,
        fidelity_deviation=abs(fidelity - f_bound),
        success_deviation=abs(success - p_bound),
    )
