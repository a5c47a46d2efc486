import math

import numpy as np
import pytest

from cloneforge.bounds import (
    CloningProblem,
    angle_for_copies,
    exact_clone_probability,
    fidelity_bound,
    hybrid_fidelity_bound,
)
from cloneforge.gates import (
    KIND_CLONE,
    KIND_CNOT,
    KIND_LOCAL,
    KIND_SEPARATION,
    KIND_TRANSFER,
)
from cloneforge.linalg import MINUS, PLUS, apply_gate, basis_state, family_state, inner, kron
from cloneforge.networks import (
    Measurement,
    NetworkSpec,
    approx_network,
    compression_sequence,
    decompression_sequence,
    evaluate_cloner,
    exact_network,
    expand_decompositions,
    hybrid_network,
    prepare_input,
    run_network,
)

import oracles

P12 = 0.5857864376269049
P13 = 0.4530818393219728
F12_EQUAL = 0.9829629131445341
F_HYBRID_08 = 0.9933752598359651


def problem(theta=math.pi / 8, m=1, n=2, eta_plus=0.5):
    return CloningProblem(theta=theta, m_copies=m, n_copies=n, eta_plus=eta_plus)


# ------------------------------------------------------------- input states


def test_prepare_input_layout():
    prob = problem(m=1, n=2)
    state = prepare_input(prob, PLUS, with_ancilla=False)
    assert state.n_qubits == 2
    expect = oracles.kron_all(
        oracles.family_amps(prob.theta, +1), np.array([1.0, 0.0])
    )
    assert np.max(np.abs(state.amps - expect)) < 1e-15


def test_prepare_input_with_ancilla():
    prob = problem(m=2, n=3)
    state = prepare_input(prob, MINUS, with_ancilla=True)
    assert state.n_qubits == 4
    expect = oracles.kron_all(
        oracles.copies_amps(prob.theta, -1, 2),
        np.array([1.0, 0.0]),
        np.array([1.0, 0.0]),
    )
    assert np.max(np.abs(state.amps - expect)) < 1e-15


def test_prepare_input_overlap_is_copy_power():
    prob = problem(m=3, n=4)
    a = prepare_input(prob, PLUS, with_ancilla=False)
    b = prepare_input(prob, MINUS, with_ancilla=False)
    assert inner(a, b).real == pytest.approx(math.cos(2 * prob.theta) ** 3, abs=1e-13)


# ------------------------------------------------------ gate sequence shapes


def test_compression_sequence_single_copy_is_empty():
    assert compression_sequence(problem(m=1, n=2)).placements == ()


def test_compression_sequence_three_copies():
    prob = problem(m=3, n=4)
    seq = compression_sequence(prob)
    assert [p.qubits for p in seq.placements] == [(1, 2), (0, 1)]
    assert seq.placements[0].params == (prob.theta, prob.theta)
    assert seq.placements[1].params == (prob.theta, angle_for_copies(prob.theta, 2))
    assert all(p.kind == KIND_TRANSFER for p in seq.placements)


def test_decompression_sequence_two_copies():
    prob = problem(m=1, n=2)
    seq = decompression_sequence(prob)
    assert [p.qubits for p in seq.placements] == [(0, 1)]
    assert seq.placements[0].params == (prob.theta, prob.theta)


def test_compression_concentrates_distinguishability():
    prob = problem(m=3, n=4)
    seq = compression_sequence(prob)
    state = prepare_input(prob, PLUS, with_ancilla=False)
    for p in seq.placements:
        state = apply_gate(state, p.gate, p.qubits)
    theta3 = angle_for_copies(prob.theta, 3)
    expect = kron(family_state(theta3, PLUS), basis_state(3, 0))
    assert np.max(np.abs(state.amps - expect.amps)) < 1e-12


def test_decompression_inverts_compression():
    theta = 0.3
    compressed = kron(family_state(theta, MINUS, copies=3), basis_state(1, 0))
    comp = compression_sequence(CloningProblem(theta=theta, m_copies=3, n_copies=4))
    for p in comp.placements:
        compressed = apply_gate(compressed, p.gate, p.qubits)
    # the 4th wire never entered the compression; spreading back out over the
    # first three wires must restore the original copies
    decomp = decompression_sequence(CloningProblem(theta=theta, m_copies=1, n_copies=3))
    restored = compressed
    for p in decomp.placements:
        restored = apply_gate(restored, p.gate, p.qubits)
    expect = kron(family_state(theta, MINUS, copies=3), basis_state(1, 0))
    assert np.max(np.abs(restored.amps - expect.amps)) < 1e-12


# ------------------------------------------------------------ exact cloning


def test_exact_network_shape():
    spec = exact_network(problem(m=1, n=3))
    assert spec.n_qubits == 4
    assert spec.measurement == Measurement(qubit=3, success_outcome=PLUS)
    kinds = [p.kind for p in spec.placements]
    assert kinds.count(KIND_SEPARATION) == 1


def test_exact_network_statistics():
    report = evaluate_cloner(problem(m=1, n=3), "exact")
    assert report.success_probability == pytest.approx(P13, abs=1e-10)
    assert report.fidelity == pytest.approx(1.0, abs=1e-10)
    assert report.success_bound == pytest.approx(
        exact_clone_probability(math.pi / 8, 1, 3), abs=1e-15
    )
    assert report.fidelity_deviation < 1e-10
    assert report.success_deviation < 1e-10


def test_exact_network_failure_branch_is_all_blanks():
    report = evaluate_cloner(problem(m=1, n=2), "exact")
    for result in (report.plus_result, report.minus_result):
        fail = result.failure_state
        assert fail is not None
        assert fail.n_qubits == 2
        assert np.max(np.abs(fail.amps - basis_state(2, 0).amps)) < 1e-10


def test_exact_network_perfect_at_maximal_angle():
    # orthogonal inputs clone deterministically
    report = evaluate_cloner(problem(theta=math.pi / 4, m=1, n=2), "exact")
    assert report.success_probability == pytest.approx(1.0, abs=1e-12)
    assert report.plus_result.failure_state is None


# ------------------------------------------------------ approximate cloning


def test_approx_network_statistics():
    prob = problem(eta_plus=0.7)
    report = evaluate_cloner(prob, "approx")
    assert report.success_probability == pytest.approx(1.0)
    assert report.fidelity == pytest.approx(fidelity_bound(prob), abs=1e-10)
    assert report.fidelity_deviation < 1e-10


def test_approx_network_no_measurement():
    spec = approx_network(problem())
    assert spec.measurement is None
    assert spec.n_qubits == 2


def test_approx_clone_overlap_matches_source_pair():
    # unitarity forces the cloned outputs to keep the M-copy overlap
    prob = problem(m=1, n=2)
    report = evaluate_cloner(prob, "approx")
    got = inner(report.plus_result.post_state, report.minus_result.post_state)
    assert got.real == pytest.approx(math.cos(2 * prob.theta), abs=1e-12)


# ----------------------------------------------------------- hybrid cloning


def test_hybrid_network_interior_point():
    report = evaluate_cloner(problem(), "hybrid", p_s=0.8)
    assert report.success_probability == pytest.approx(0.8, abs=1e-10)
    assert report.fidelity == pytest.approx(F_HYBRID_08, abs=1e-9)


def test_hybrid_network_reduces_to_exact_at_minimum_rate():
    report = evaluate_cloner(problem(), "hybrid", p_s=P12)
    assert report.success_probability == pytest.approx(P12, abs=1e-10)
    assert report.fidelity == pytest.approx(1.0, abs=1e-9)


def test_hybrid_network_reduces_to_approx_at_unit_rate():
    report = evaluate_cloner(problem(), "hybrid", p_s=1.0)
    assert report.success_probability == pytest.approx(1.0, abs=1e-10)
    assert report.fidelity == pytest.approx(F12_EQUAL, abs=1e-9)
    assert report.plus_result.failure_state is None


def test_hybrid_matches_tradeoff_curve_between_endpoints():
    for p_s in (P12, (P12 + 1.0) / 2.0, 1.0):
        report = evaluate_cloner(problem(), "hybrid", p_s=p_s)
        point = hybrid_fidelity_bound(math.pi / 8, 1, 2, p_s)
        assert report.fidelity == pytest.approx(point.fidelity_bound, abs=1e-9)


def test_hybrid_rejects_unequal_priors():
    with pytest.raises(ValueError, match="equal priors"):
        hybrid_network(problem(eta_plus=0.7), 0.8)


def test_hybrid_requires_rate():
    with pytest.raises(ValueError, match="p_s"):
        evaluate_cloner(problem(), "hybrid")


# ------------------------------------------------------------ run mechanics


def test_run_network_is_deterministic():
    prob = problem(m=1, n=3)
    spec = exact_network(prob)
    state = prepare_input(prob, PLUS, with_ancilla=True)
    ref = family_state(prob.theta, PLUS, copies=3)
    a = run_network(spec, state, input_sign=PLUS, reference=ref)
    b = run_network(spec, state, input_sign=PLUS, reference=ref)
    assert a.success_probability == b.success_probability
    assert np.array_equal(a.post_state.amps, b.post_state.amps)
    assert a.global_fidelity_vs_exact == b.global_fidelity_vs_exact


def test_run_network_empty_spec():
    spec = NetworkSpec(n_qubits=1, placements=())
    state = family_state(0.3, PLUS)
    ref = family_state(0.3, MINUS)
    result = run_network(spec, state, reference=ref)
    assert result.success_probability == 1.0
    assert result.global_fidelity_vs_exact == pytest.approx(
        math.cos(0.6) ** 2, abs=1e-14
    )


def test_run_network_rejects_wrong_input_size():
    spec = approx_network(problem())
    with pytest.raises(ValueError, match="qubit"):
        run_network(spec, basis_state(3, 0), reference=basis_state(2, 0))


def test_run_network_rejects_wrong_reference_size():
    prob = problem()
    spec = exact_network(prob)
    state = prepare_input(prob, PLUS, with_ancilla=True)
    with pytest.raises(ValueError, match="reference"):
        run_network(spec, state, reference=basis_state(3, 0))


def test_network_spec_validates_indices():
    with pytest.raises(ValueError, match="qubit"):
        NetworkSpec(
            n_qubits=1,
            placements=compression_sequence(problem(m=3, n=4)).placements,
        )
    with pytest.raises(ValueError, match="measurement"):
        NetworkSpec(n_qubits=2, placements=(), measurement=Measurement(qubit=2))


def test_evaluate_cloner_rejects_unknown_mode():
    with pytest.raises(ValueError, match="mode"):
        evaluate_cloner(problem(), "teleport")


# ----------------------------------------------------- decomposed execution


def test_expand_decompositions_preserves_statistics():
    prob = problem(m=2, n=3)
    direct = evaluate_cloner(prob, "exact")
    via_cnots = evaluate_cloner(prob, "exact", decompose_gates=True)
    assert abs(direct.fidelity - via_cnots.fidelity) < 1e-9
    assert abs(direct.success_probability - via_cnots.success_probability) < 1e-9


def test_expand_decompositions_leaves_only_primitive_gates():
    spec = expand_decompositions(exact_network(problem(m=2, n=3)))
    for p in spec.placements:
        assert p.kind in (KIND_CNOT, KIND_LOCAL)
    spec = expand_decompositions(hybrid_network(problem(m=1, n=2), 0.8))
    kinds = {p.kind for p in spec.placements}
    assert kinds <= {KIND_CNOT, KIND_LOCAL, KIND_CLONE}


def test_expand_decompositions_remaps_wires():
    prob = problem(m=1, n=2)
    spec = expand_decompositions(exact_network(prob))
    # the separation acted on (ancilla, qubit 0) = (2, 0); its CNOT must too
    cnots = [p for p in spec.placements if p.kind == KIND_CNOT]
    assert any(p.qubits == (0, 2) for p in cnots)
    assert all("[from" in p.label for p in spec.placements if p.kind != KIND_CLONE)
