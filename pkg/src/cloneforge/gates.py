"""Two-qubit gates for concentrating, separating, and redistributing
which-state information, plus their CNOT + single-qubit decompositions.

Basis order is |++>, |+->, |-+>, |--> (first qubit = most significant bit).
Every gate built here is real orthogonal, so decomposition equality is exact
equality of matrices -- there is no global-phase freedom to quotient out.

CNOT convention (used consistently everywhere, including serialized
circuits): the gate is ACTIVE WHEN THE CONTROL QUBIT IS |+>, i.e. on control
bit 0.  This is deliberately not the textbook active-on-1 gate; it keeps the
blank state |+> inert on the target side of every network here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .bounds import (
    CloneCoefficients,
    separation_bound,
)
from .linalg import Unitary, embedded_matrix

#: matrices re-multiplied from a decomposition must match the target this well
DECOMPOSITION_TOL = 1e-10
#: internal consistency checks on derived angles
CONSISTENCY_TOL = 1e-12
#: two single-qubit state maps can only share a unitary if overlaps agree
OVERLAP_MATCH_TOL = 1e-10


def _reflection(beta: float) -> np.ndarray:
    """Real 2x2 reflection: det -1, axis at angle beta/2."""
    c, s = math.cos(beta), math.sin(beta)
    return np.array([[c, s], [s, -c]])


def _rotation(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


def pauli_x() -> Unitary:
    return Unitary(np.array([[0.0, 1.0], [1.0, 0.0]]))


def cnot() -> Unitary:
    """CNOT with control = first (more significant) qubit, active on |+>.

    Swaps |++> <-> |+-> and leaves |-+>, |--> unchanged.
    """
    m = np.eye(4)[[1, 0, 2, 3]]
    return Unitary(m)


def _check_angle_range(value: float, name: str) -> None:
    if not (0.0 <= value <= math.pi / 4 + 1e-15):
        raise ValueError(f"{name} must lie in [0, pi/4], got {value!r}")


def _odd_sector_weight(theta1: float, theta2: float) -> float:
    """1 - cos(2 t3), the odd-sector norm, in a subtraction-free form."""
    s1, s2 = math.sin(theta1), math.sin(theta2)
    return 2.0 * (s1 * s1 + math.cos(2.0 * theta1) * s2 * s2)


def sector_angles(theta1: float, theta2: float) -> Tuple[float, float]:
    """Reflection angles of the transfer gate's two parity sectors.

    The transfer gate is block-diagonal on the spans {|++>, |-->} (even
    sector) and {|+->, |-+>} (odd sector).  This returns (delta1, delta2)
    with

        cos delta1 = N+ cos t1 cos t2,  sin delta1 = N+ sin t1 sin t2,
        cos delta2 = N- cos t1 sin t2,  sin delta2 = N- sin t1 cos t2,

    N_pm = sqrt(2 / (1 pm cos 2 t3)) and t3 the composed angle.  Both pairs
    are verified to be unit vectors.  When both angles vanish (or are so
    small the odd-sector norm underflows) the odd-sector angle is undefined
    and this raises; the gate builders special-case that corner (the odd
    sector becomes the identity there).
    """
    _check_angle_range(theta1, "theta1")
    _check_angle_range(theta2, "theta2")
    if _odd_sector_weight(theta1, theta2) == 0.0:
        raise ValueError(
            "odd-sector angle is undefined at theta1 = theta2 = 0 "
            "(the transfer gate's odd sector degenerates to the identity)"
        )
    c1, s1 = math.cos(theta1), math.sin(theta1)
    c2, s2 = math.cos(theta2), math.sin(theta2)
    # 1 -+ cos(2 t3) in subtraction-free form, so the normalizations stay
    # accurate down to arbitrarily small angles
    one_plus_c3 = 1.0 + math.cos(2.0 * theta1) * math.cos(2.0 * theta2)
    n_even = math.sqrt(2.0 / one_plus_c3)
    n_odd = math.sqrt(2.0 / _odd_sector_weight(theta1, theta2))
    pairs = (
        (n_even * c1 * c2, n_even * s1 * s2),
        (n_odd * c1 * s2, n_odd * s1 * c2),
    )
    for cos_d, sin_d in pairs:
        if abs(cos_d * cos_d + sin_d * sin_d - 1.0) > CONSISTENCY_TOL:
            raise ValueError(
                "internal consistency failure: sector angle pair is not "
                f"normalized ({cos_d!r}, {sin_d!r})"
            )
    delta1 = math.atan2(pairs[0][1], pairs[0][0])
    delta2 = math.atan2(pairs[1][1], pairs[1][0])
    return delta1, delta2


def transfer_gate(theta1: float, theta2: float) -> Unitary:
    """Two-qubit gate concentrating the pair's distinguishability.

    Acting on a product of family states at angles (theta1, theta2) it
    produces the family state at the composed angle theta3 on the first
    qubit and resets the second qubit to |+>; being Hermitian and
    self-inverse, it equally well redistributes a composed state back over
    two qubits.

    The matrix is real, block-diagonal on the even sector {|++>, |-->}
    (reflection by delta1) and the odd sector {|+->, |-+>} (reflection by
    delta2 + pi/2).  The quarter turn on the odd sector is what makes the
    gate Hermitian; it fixes the sign of the image of the fourth basis
    input.  At theta1 = theta2 = 0 the odd sector is defined as the
    identity (the physical family never populates it there).
    """
    _check_angle_range(theta1, "theta1")
    _check_angle_range(theta2, "theta2")
    m = np.zeros((4, 4))
    if _odd_sector_weight(theta1, theta2) == 0.0:
        m[np.ix_([0, 3], [0, 3])] = _reflection(0.0)
        m[1, 1] = m[2, 2] = 1.0
        return Unitary(m)
    delta1, delta2 = sector_angles(theta1, theta2)
    m[np.ix_([0, 3], [0, 3])] = _reflection(delta1)
    m[np.ix_([1, 2], [1, 2])] = _reflection(delta2 + math.pi / 2.0)
    return Unitary(m)


def equal_parity_reflection(delta: float) -> Unitary:
    """Reflection by delta on span{|++>, |-->}, identity on the odd sector."""
    m = np.zeros((4, 4))
    m[np.ix_([0, 3], [0, 3])] = _reflection(delta)
    m[1, 1] = m[2, 2] = 1.0
    return Unitary(m)


def controlled_reflection(delta: float) -> Unitary:
    """Reflection by delta on the second qubit when the first is |+>."""
    m = np.zeros((4, 4))
    m[np.ix_([0, 1], [0, 1])] = _reflection(delta)
    m[2, 2] = m[3, 3] = 1.0
    return Unitary(m)


def parity_exchange() -> Unitary:
    """Hermitian involution exchanging the two sectors' reflection actions.

    Built as (1 (x) X) . CNOT(control=second qubit) . (1 (x) X); it swaps
    |+-> with |--> and conjugates a controlled reflection into an
    equal-parity reflection of the same angle.
    """
    x = pauli_x().entries.real
    i2 = np.eye(2)
    cnot_second = np.eye(4)[[2, 1, 0, 3]]
    m = np.kron(i2, x) @ cnot_second @ np.kron(i2, x)
    return Unitary(m)


def conjugating_rotation(delta: float) -> Unitary:
    """Rotation A(delta) with A^dag X A = reflection by delta.

    Defined as ((1 - i sigma_y) cos(delta/2) + (1 + i sigma_y)
    sin(delta/2)) / sqrt(2); the combination is real orthogonal.
    """
    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    i2 = np.eye(2)
    a = ((i2 - 1.0j * sy) * math.cos(delta / 2.0)
         + (i2 + 1.0j * sy) * math.sin(delta / 2.0)) / math.sqrt(2.0)
    if np.max(np.abs(a.imag)) > CONSISTENCY_TOL:
        raise ValueError("internal consistency failure: rotation is not real")
    return Unitary(a.real)


def separation_gamma(theta_in: float, theta_out: float) -> float:
    """Mixing angle of the separation gate's active sector.

    cos(gamma) = sqrt(P) cos(theta_out)/cos(theta_in) and sin(gamma) =
    sqrt(1-P)/cos(theta_in) with P the separation success probability; the
    pair is checked to be normalized, which encodes the probability-
    conservation identity P cos^2(theta_out) + (1 - P) = cos^2(theta_in).
    """
    _check_separation_angles(theta_in, theta_out)
    p = separation_bound(math.cos(2.0 * theta_in), math.cos(2.0 * theta_out))
    cos_g = math.sqrt(p) * math.cos(theta_out) / math.cos(theta_in)
    sin_g = math.sqrt(1.0 - p) / math.cos(theta_in)
    if abs(cos_g * cos_g + sin_g * sin_g - 1.0) > CONSISTENCY_TOL:
        raise ValueError(
            "internal consistency failure: separation angle pair is not "
            f"normalized ({cos_g!r}, {sin_g!r})"
        )
    return math.atan2(sin_g, cos_g)


def _check_separation_angles(theta_in: float, theta_out: float) -> None:
    if not (0.0 < theta_in <= math.pi / 4 + 1e-15):
        raise ValueError(f"theta_in must lie in (0, pi/4], got {theta_in!r}")
    if not (0.0 < theta_out <= math.pi / 4 + 1e-15):
        raise ValueError(f"theta_out must lie in (0, pi/4], got {theta_out!r}")
    if theta_in > theta_out + 1e-12:
        raise ValueError(
            f"not a separation: theta_in {theta_in!r} exceeds theta_out {theta_out!r}"
        )


def separation_rotation(theta_in: float, theta_out: float) -> Unitary:
    """Single-qubit rotation conjugating a CNOT into the separation gate."""
    return conjugating_rotation(separation_gamma(theta_in, theta_out))


def separation_gate(theta_in: float, theta_out: float) -> Unitary:
    """Probabilistic overlap-reducing gate on (ancilla, system) qubits.

    Qubit order: the ancilla is the first (more significant) qubit.  With
    the ancilla prepared in |+>, a system family state at theta_in is mapped
    to sqrt(P) |+>|family(theta_out)> + sqrt(1-P) |->|+>, so measuring the
    ancilla heralds the separation; P is the separation success probability.
    The states |+-> and |--> are left invariant.
    """
    gamma = separation_gamma(theta_in, theta_out)
    m = np.zeros((4, 4))
    m[np.ix_([0, 2], [0, 2])] = _reflection(gamma)
    m[1, 1] = m[3, 3] = 1.0
    return Unitary(m)


def clone_gate(theta_in: float, theta_out: float, coeffs: CloneCoefficients) -> Unitary:
    """Single-qubit gate mapping each input family state to its prescribed
    superposition of output family states.

    The plus/minus inputs at theta_in are sent to mu |plus_out> +
    nu |minus_out> built from ``coeffs`` at theta_out.  Such a unitary
    exists only when the requested images preserve the input overlap; this
    is checked to OVERLAP_MATCH_TOL before solving the 2x2 linear system.
    """
    if not (0.0 < theta_in <= math.pi / 4 + 1e-15):
        raise ValueError(f"theta_in must lie in (0, pi/4], got {theta_in!r}")
    ci, si = math.cos(theta_in), math.sin(theta_in)
    co, so = math.cos(theta_out), math.sin(theta_out)
    u = np.array([[ci, ci], [si, -si]])
    out_plus = np.array([co, so])
    out_minus = np.array([co, -so])
    w = np.column_stack([
        coeffs.mu_plus * out_plus + coeffs.nu_plus * out_minus,
        coeffs.mu_minus * out_plus + coeffs.nu_minus * out_minus,
    ])
    overlap_in = float(u[:, 0] @ u[:, 1])
    overlap_out = float(w[:, 0] @ w[:, 1])
    if abs(overlap_in - overlap_out) > OVERLAP_MATCH_TOL:
        raise ValueError(
            "non-unitary request: image overlap "
            f"{overlap_out!r} differs from input overlap {overlap_in!r}"
        )
    t = np.linalg.solve(u.T, w.T).T
    return Unitary(t)


# --------------------------------------------------------------------------
# circuit decompositions
# --------------------------------------------------------------------------

#: placement kinds
KIND_CNOT = "cnot"
KIND_LOCAL = "local"
KIND_TRANSFER = "transfer"
KIND_SEPARATION = "separation"
KIND_CLONE = "clone"


@dataclass(frozen=True)
class GatePlacement:
    """One gate applied to named qubits of a register.

    ``qubits`` is in gate-local significance order (first = control for
    CNOTs).  ``kind`` tags what the gate is so circuits can be serialized or
    re-expanded; ``params`` holds the defining angles for re-derivable
    kinds.
    """

    gate: Unitary
    qubits: Tuple[int, ...]
    label: str
    kind: str = "generic"
    params: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.gate.dim != 2 ** len(self.qubits):
            raise ValueError(
                f"gate dimension {self.gate.dim} does not fit {len(self.qubits)} qubit(s)"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"placement qubits must be distinct, got {self.qubits}")


@dataclass(frozen=True)
class CircuitDecomposition:
    """A target two-qubit gate and an equal CNOT + single-qubit circuit.

    ``placements`` is in time order (first entry acts first) on local wires
    0 and 1.  Construction verifies the re-multiplied product against the
    target; all factors are real, so the comparison is plain matrix
    equality.
    """

    target: Unitary
    placements: Tuple[GatePlacement, ...]
    max_abs_error: float = field(init=False)

    def __post_init__(self):
        for p in self.placements:
            if p.kind not in (KIND_CNOT, KIND_LOCAL):
                raise ValueError(
                    f"decompositions may contain only CNOT and single-qubit "
                    f"placements, got kind {p.kind!r}"
                )
        err = float(np.max(np.abs(self.rebuild() - self.target.entries)))
        if err > DECOMPOSITION_TOL:
            raise ValueError(
                f"decomposition does not re-multiply to its target "
                f"(max abs error {err:.3e})"
            )
        object.__setattr__(self, "max_abs_error", err)

    def rebuild(self) -> np.ndarray:
        """Re-multiply the placements into a full matrix on the two wires."""
        n = self.target.n_qubits
        total = np.eye(2 ** n, dtype=np.complex128)
        for p in self.placements:
            total = embedded_matrix(p.gate, p.qubits, n) @ total
        return total

    @property
    def cnot_count(self) -> int:
        return sum(1 for p in self.placements if p.kind == KIND_CNOT)


def _cnot_placement(control: int, target: int) -> GatePlacement:
    return GatePlacement(
        gate=cnot(),
        qubits=(control, target),
        label=f"CNOT(control={control}, target={target}, active on |+>)",
        kind=KIND_CNOT,
    )


def _local_placement(matrix: np.ndarray, qubit: int, label: str) -> GatePlacement:
    return GatePlacement(
        gate=Unitary(matrix),
        qubits=(qubit,),
        label=f"{label}@{qubit}",
        kind=KIND_LOCAL,
    )


def decompose_transfer(theta1: float, theta2: float) -> CircuitDecomposition:
    """CNOT + single-qubit circuit equal to the transfer gate.

    The regular construction uses four CNOTs and three single-qubit gates
    (seven placements).  Writing F(b) for the reflection by b, R(p) for the
    rotation by p, d2' = delta2 + pi/2 and a = d2' - delta1, the product

        C(0->1) . F(d2')_0 . C(1->0) . R(a/2)_0 . C(1->0) . R(a/2)_0 . C(0->1)

    (rightmost factor first) equals the gate: the outer CNOT pair splits the
    matrix into its two parity sectors, the C(1->0)-conjugated rotations
    realize the sector-angle difference, and the remaining reflection aligns
    both sectors at once.

    At theta1 = theta2 = 0 the gate is diagonal (one sign flip) and a
    shorter five-placement, three-CNOT circuit is emitted instead.
    """
    target = transfer_gate(theta1, theta2)
    if _odd_sector_weight(theta1, theta2) == 0.0:
        placements = (
            _cnot_placement(0, 1),
            _local_placement(_reflection(math.pi / 4.0), 0, "reflection(pi/4)"),
            _cnot_placement(1, 0),
            _local_placement(_rotation(-math.pi / 4.0), 0, "rotation(-pi/4)"),
            _cnot_placement(0, 1),
        )
        return CircuitDecomposition(target=target, placements=placements)
    delta1, delta2 = sector_angles(theta1, theta2)
    d2p = delta2 + math.pi / 2.0
    alpha = d2p - delta1
    placements = (
        _cnot_placement(0, 1),
        _local_placement(_rotation(alpha / 2.0), 0, f"rotation({alpha / 2.0:.12g})"),
        _cnot_placement(1, 0),
        _local_placement(_rotation(alpha / 2.0), 0, f"rotation({alpha / 2.0:.12g})"),
        _cnot_placement(1, 0),
        _local_placement(_reflection(d2p), 0, f"reflection({d2p:.12g})"),
        _cnot_placement(0, 1),
    )
    return CircuitDecomposition(target=target, placements=placements)


def decompose_separation(theta_in: float, theta_out: float) -> CircuitDecomposition:
    """Single-CNOT circuit equal to the separation gate.

    The CNOT targets the ancilla (wire 0) controlled by the system
    (wire 1), conjugated by the separation rotation on the ancilla:
    B^dag_0 . C(1->0) . B_0, rightmost factor first.  Three placements.
    """
    target = separation_gate(theta_in, theta_out)
    b = separation_rotation(theta_in, theta_out).entries.real
    gamma = separation_gamma(theta_in, theta_out)
    placements = (
        _local_placement(b, 0, f"rotation({math.pi / 4.0 - gamma / 2.0:.12g})"),
        _cnot_placement(1, 0),
        _local_placement(b.T, 0, f"rotation({gamma / 2.0 - math.pi / 4.0:.12g})"),
    )
    return CircuitDecomposition(target=target, placements=placements)
