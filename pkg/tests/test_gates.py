import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cloneforge.bounds import CloneCoefficients, CloningProblem, clone_coefficients, compose_angle, optimal_phis
from cloneforge.gates import (
    CircuitDecomposition,
    GatePlacement,
    KIND_CNOT,
    clone_gate,
    cnot,
    conjugating_rotation,
    controlled_reflection,
    decompose_separation,
    decompose_transfer,
    equal_parity_reflection,
    parity_exchange,
    pauli_x,
    sector_angles,
    separation_gamma,
    separation_gate,
    separation_rotation,
    transfer_gate,
)
from cloneforge.linalg import (
    MINUS,
    PLUS,
    apply_gate,
    basis_state,
    family_state,
    inner,
    kron,
)

GRID = np.linspace(0.01, math.pi / 4, 8)


def reflection(beta):
    c, s = math.cos(beta), math.sin(beta)
    return np.array([[c, s], [s, -c]])


# ------------------------------------------------------------ transfer gate


def test_cnot_is_active_on_plus():
    assert np.allclose(cnot().entries, np.eye(4)[[1, 0, 2, 3]])


def test_sector_angles_symmetric_point():
    d1, d2 = sector_angles(math.pi / 8, math.pi / 8)
    assert d1 == pytest.approx(0.169918454727061, abs=1e-14)
    assert d2 == pytest.approx(math.pi / 4, abs=1e-14)


def test_sector_angles_blank_second_qubit():
    d1, d2 = sector_angles(math.pi / 8, 0.0)
    assert d1 == pytest.approx(0.0, abs=1e-15)
    assert d2 == pytest.approx(math.pi / 2, abs=1e-15)


def test_sector_angles_degenerate_corner_rejected():
    with pytest.raises(ValueError, match="odd-sector"):
        sector_angles(0.0, 0.0)


def test_transfer_gate_is_real_hermitian_involution():
    for t1 in GRID:
        for t2 in GRID:
            m = transfer_gate(t1, t2).entries
            assert np.max(np.abs(m.imag)) < 1e-12
            assert np.max(np.abs(m - m.conj().T)) < 1e-12
            assert np.max(np.abs(m @ m - np.eye(4))) < 1e-12


def test_transfer_gate_forward_action():
    """family(t1) (x) family(t2) -> family(composed) (x) |+>, both signs."""
    for t1 in GRID:
        for t2 in GRID:
            gate = transfer_gate(t1, t2)
            t3 = compose_angle(t1, t2)
            for sign in (PLUS, MINUS):
                state = kron(family_state(t1, sign), family_state(t2, sign))
                out = apply_gate(state, gate, (0, 1))
                expect = kron(family_state(t3, sign), basis_state(1, 0))
                assert np.max(np.abs(out.amps - expect.amps)) < 1e-12


def test_transfer_gate_reverse_action():
    # Hermitian and self-inverse, so the same gate splits a composed state
    t1, t2 = 0.3, 0.55
    gate = transfer_gate(t1, t2)
    t3 = compose_angle(t1, t2)
    for sign in (PLUS, MINUS):
        state = kron(family_state(t3, sign), basis_state(1, 0))
        out = apply_gate(state, gate, (0, 1))
        expect = kron(family_state(t1, sign), family_state(t2, sign))
        assert np.max(np.abs(out.amps - expect.amps)) < 1e-12


def test_transfer_gate_degenerate_corner_is_sign_flip():
    m = transfer_gate(0.0, 0.0).entries
    assert np.allclose(m, np.diag([1.0, 1.0, 1.0, -1.0]))


def test_transfer_gate_rejects_out_of_range():
    with pytest.raises(ValueError):
        transfer_gate(1.0, 0.1)


@given(
    st.floats(min_value=0.0, max_value=math.pi / 4),
    st.floats(min_value=0.0, max_value=math.pi / 4),
)
@settings(max_examples=80, deadline=None)
def test_transfer_gate_unitary_everywhere(t1, t2):
    m = transfer_gate(t1, t2).entries
    assert np.max(np.abs(m @ m.conj().T - np.eye(4))) < 1e-12


# ------------------------------------------------- sector-reflection algebra


def test_equal_parity_reflection_at_zero():
    assert np.allclose(equal_parity_reflection(0.0).entries, np.diag([1, 1, 1, -1]))


def test_equal_parity_reflection_quarter_turn_swaps_extremes():
    out = apply_gate(basis_state(2, 0), equal_parity_reflection(math.pi / 2), (0, 1))
    assert np.allclose(out.amps, basis_state(2, 3).amps)


def test_controlled_reflection_examples():
    assert np.allclose(controlled_reflection(0.0).entries, np.diag([1, -1, 1, 1]))
    out = apply_gate(basis_state(2, 0), controlled_reflection(math.pi / 2), (0, 1))
    assert np.allclose(out.amps, basis_state(2, 1).amps)


def test_parity_exchange_is_hermitian_involution():
    e = parity_exchange().entries
    assert np.allclose(e, e.conj().T)
    assert np.allclose(e @ e, np.eye(4))


def test_sector_exchange_identity():
    """Conjugating the controlled reflection by the parity exchange turns it
    into the equal-parity reflection with the same angle."""
    e = parity_exchange().entries
    for d in np.linspace(-1.5, 1.5, 13):
        q = equal_parity_reflection(d).entries
        lam = controlled_reflection(d).entries
        assert np.max(np.abs(q - e @ lam @ e)) < 1e-12


def test_transfer_gate_splits_into_sector_reflections():
    """The full gate factors into commuting even- and odd-sector reflections,
    the odd one shifted by a quarter turn."""
    x = pauli_x().entries.real
    swap_parity = np.kron(np.eye(2), x)
    for t1, t2 in [(0.2, 0.5), (math.pi / 8, math.pi / 8), (0.01, 0.7), (math.pi / 8, 0.0)]:
        d1, d2 = sector_angles(t1, t2)
        odd = swap_parity @ equal_parity_reflection(d2 + math.pi / 2).entries @ swap_parity
        rebuilt = equal_parity_reflection(d1).entries @ odd
        assert np.max(np.abs(transfer_gate(t1, t2).entries - rebuilt)) < 1e-12


def test_conjugating_rotation_turns_x_into_reflection():
    x = pauli_x().entries
    for d in np.linspace(-1.5, 1.5, 13):
        a = conjugating_rotation(d).entries
        assert np.max(np.abs(a.conj().T @ x @ a - reflection(d))) < 1e-12


# ----------------------------------------------------------- separation gate


def test_separation_gamma_value():
    gamma = separation_gamma(math.pi / 8, math.pi / 6)
    assert math.sin(gamma) == pytest.approx(0.696621399498013, abs=1e-14)
    assert math.cos(gamma) == pytest.approx(0.7174389352143008, abs=1e-14)


def test_separation_gate_action():
    """Ancilla |+> splits into a heralding superposition with the advertised
    branch amplitudes."""
    t_in, t_out = math.pi / 8, math.pi / 6
    p = (1.0 - math.cos(2 * t_in)) / (1.0 - math.cos(2 * t_out))
    gate = separation_gate(t_in, t_out)
    for sign in (PLUS, MINUS):
        state = kron(basis_state(1, 0), family_state(t_in, sign))
        out = apply_gate(state, gate, (0, 1))
        success = kron(basis_state(1, 0), family_state(t_out, sign))
        failure = kron(basis_state(1, 1), basis_state(1, 0))
        expect = math.sqrt(p) * success.amps + math.sqrt(1.0 - p) * failure.amps
        assert np.max(np.abs(out.amps - expect)) < 1e-12


def test_separation_gate_identity_angles_is_not_identity():
    # equal angles give a unit success branch, but the gate still flips one sign
    m = separation_gate(0.3, 0.3).entries
    assert np.allclose(m, np.diag([1.0, 1.0, -1.0, 1.0]))


def test_separation_gate_leaves_idle_states_alone():
    gate = separation_gate(math.pi / 8, math.pi / 6)
    for idx in (1, 3):
        out = apply_gate(basis_state(2, idx), gate, (0, 1))
        assert np.allclose(out.amps, basis_state(2, idx).amps)


def test_separation_gate_rejects_widening():
    with pytest.raises(ValueError, match="not a separation"):
        separation_gate(0.5, 0.3)


def test_separation_rotation_is_plain_rotation():
    gamma = separation_gamma(math.pi / 8, math.pi / 6)
    b = separation_rotation(math.pi / 8, math.pi / 6).entries
    phi = math.pi / 4 - gamma / 2
    expect = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
    assert np.max(np.abs(b - expect)) < 1e-12


# ---------------------------------------------------------------- clone gate


def test_clone_gate_identity_case():
    coeffs = CloneCoefficients(1.0, 0.0, 0.0, 1.0)
    t = clone_gate(math.pi / 8, math.pi / 8, coeffs)
    assert np.max(np.abs(t.entries - np.eye(2))) < 1e-12


def test_clone_gate_maps_family_to_prescribed_superpositions():
    prob = CloningProblem(theta=math.pi / 8, m_copies=1, n_copies=2, eta_plus=0.7)
    coeffs = clone_coefficients(optimal_phis(prob), prob.theta_n)
    t = clone_gate(prob.theta_m, prob.theta_n, coeffs)
    out_p = family_state(prob.theta_n, PLUS).amps
    out_m = family_state(prob.theta_n, MINUS).amps
    got_plus = t.entries @ family_state(prob.theta_m, PLUS).amps
    got_minus = t.entries @ family_state(prob.theta_m, MINUS).amps
    assert np.max(np.abs(got_plus - (coeffs.mu_plus * out_p + coeffs.nu_plus * out_m))) < 1e-12
    assert np.max(np.abs(got_minus - (coeffs.mu_minus * out_p + coeffs.nu_minus * out_m))) < 1e-12


def test_clone_gate_rejects_overlap_mismatch():
    # sending both inputs to the same output state cannot be unitary
    with pytest.raises(ValueError, match="non-unitary request"):
        clone_gate(math.pi / 8, math.pi / 8, CloneCoefficients(1.0, 0.0, 1.0, 0.0))


# ------------------------------------------------------------ decompositions


def test_decompose_transfer_rebuilds_target():
    for t1 in GRID:
        for t2 in GRID:
            circuit = decompose_transfer(t1, t2)
            assert circuit.max_abs_error < 1e-10
            assert circuit.cnot_count == 4
            assert len(circuit.placements) == 7


def test_decompose_transfer_degenerate_corner():
    circuit = decompose_transfer(0.0, 0.0)
    assert circuit.max_abs_error < 1e-10
    assert circuit.cnot_count == 3
    assert len(circuit.placements) == 5


def test_decompose_separation_rebuilds_target():
    for t_in in GRID:
        for t_out in GRID:
            if t_in > t_out:
                continue
            circuit = decompose_separation(t_in, t_out)
            assert circuit.max_abs_error < 1e-10
            assert circuit.cnot_count == 1
            assert len(circuit.placements) == 3


def test_decomposition_factors_are_real_with_unit_determinant():
    circuit = decompose_transfer(0.2, 0.5)
    for p in circuit.placements:
        m = p.gate.entries
        assert np.max(np.abs(m.imag)) == 0.0
        assert abs(abs(np.linalg.det(m.real)) - 1.0) < 1e-12


def test_decompose_separation_cnot_targets_ancilla():
    circuit = decompose_separation(math.pi / 8, math.pi / 6)
    cnots = [p for p in circuit.placements if p.kind == KIND_CNOT]
    assert len(cnots) == 1
    assert cnots[0].qubits == (1, 0)  # system controls, ancilla is the target


def test_placement_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        GatePlacement(gate=cnot(), qubits=(0,), label="bad")


def test_placement_rejects_duplicate_qubits():
    with pytest.raises(ValueError):
        GatePlacement(gate=cnot(), qubits=(1, 1), label="bad")


def test_circuit_decomposition_rejects_wrong_product():
    placements = (
        GatePlacement(gate=cnot(), qubits=(0, 1), label="CNOT", kind=KIND_CNOT),
    )
    with pytest.raises(ValueError, match="re-multiply"):
        CircuitDecomposition(target=transfer_gate(0.2, 0.5), placements=placements)


def test_circuit_decomposition_rejects_composite_kinds():
    placement = GatePlacement(
        gate=transfer_gate(0.2, 0.5),
        qubits=(0, 1),
        label="transfer",
        kind="transfer",
    )
    with pytest.raises(ValueError, match="kind"):
        CircuitDecomposition(target=transfer_gate(0.2, 0.5), placements=(placement,))


@given(
    st.floats(min_value=0.0, max_value=math.pi / 4),
    st.floats(min_value=0.0, max_value=math.pi / 4),
)
@settings(max_examples=60, deadline=None)
def test_decompose_transfer_everywhere(t1, t2):
    circuit = decompose_transfer(t1, t2)
    assert circuit.max_abs_error < 1e-10


def test_transfer_pair_overlap_is_preserved():
    # a quick end-to-end sanity mark: the gate is unitary, so the two-copy
    # overlap before equals the composed overlap after
    t1, t2 = math.pi / 8, 0.4
    gate = transfer_gate(t1, t2)
    a = apply_gate(kron(family_state(t1, PLUS), family_state(t2, PLUS)), gate, (0, 1))
    b = apply_gate(kron(family_state(t1, MINUS), family_state(t2, MINUS)), gate, (0, 1))
    t3 = compose_angle(t1, t2)
    assert inner(a, b).real == pytest.approx(math.cos(2 * t3), abs=1e-12)


def test_gates_are_immutable():
    gate = transfer_gate(0.2, 0.5)
    with pytest.raises(ValueError):
        gate.entries[0, 0] = 5.0
