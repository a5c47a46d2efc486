"""Dense state-vector simulation primitives for few-qubit circuits.

Conventions used throughout the package:

* The computational basis of one qubit is written ``|+>`` and ``|->``;
  ``|+>`` maps to bit value 0 and ``|->`` to bit value 1.
* Qubit index 0 is the *most significant* bit of an amplitude index, so the
  two-qubit basis order is ``|++>, |+->, |-+>, |-->`` = indices 0..3.
* Measurement outcomes are the strings ``"plus"`` and ``"minus"``.

All values are immutable after construction and all operations are pure
functions, so everything here is safe to evaluate concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

#: outcome labels for single-qubit projections
PLUS = "plus"
MINUS = "minus"

#: construction-time unitarity tolerance
UNITARITY_TOL = 1e-12
#: tolerance for "this vector is normalized"
NORM_TOL = 1e-12
#: branches with probability below this cannot be post-selected
IMPOSSIBLE_BRANCH_TOL = 1e-14


class ImpossibleBranchError(ValueError):
    """Raised when asked to post-select on an outcome with ~zero probability."""


def _as_complex_array(values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128).copy()
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{what} contains non-finite entries")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Amplitudes of an ``n_qubits``-qubit pure state.

    A regular state is normalized; states produced as un-renormalized
    measurement branches carry ``subnormalized=True`` and their squared norm
    is the branch probability.
    """

    n_qubits: int
    amps: np.ndarray
    subnormalized: bool = False

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")
        amps = _as_complex_array(self.amps, "state vector")
        if amps.ndim != 1 or amps.size != 2 ** self.n_qubits:
            raise ValueError(
                f"state vector over {self.n_qubits} qubit(s) must have "
                f"length {2 ** self.n_qubits}, got shape {amps.shape}"
            )
        object.__setattr__(self, "amps", amps)
        if not self.subnormalized:
            norm_sq = float(np.sum(np.abs(amps) ** 2))
            if abs(norm_sq - 1.0) > NORM_TOL:
                raise ValueError(
                    f"state vector is not normalized (|amps|^2 = {norm_sq!r}); "
                    "pass subnormalized=True for measurement branches"
                )

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))


@dataclass(frozen=True, eq=False)
class Unitary:
    """A dense unitary on one or more qubits, verified at construction."""

    entries: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        mat = _as_complex_array(self.entries, "unitary")
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"unitary must be square, got shape {mat.shape}")
        dim = mat.shape[0]
        if dim < 2 or (dim & (dim - 1)) != 0:
            raise ValueError(f"unitary dimension must be a power of two >= 2, got {dim}")
        err = np.max(np.abs(mat.conj().T @ mat - np.eye(dim)))
        if err >= UNITARITY_TOL:
            raise ValueError(f"matrix is not unitary (max |U^dag U - I| = {err:.3e})")
        object.__setattr__(self, "entries", mat)
        object.__setattr__(self, "dim", dim)

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1


def family_state(theta: float, sign: str, copies: int = 1) -> StateVector:
    """The two-state family member cos(theta)|+> +/- sin(theta)|->.

    With ``copies=k`` returns its k-fold tensor power.  ``sign`` selects the
    branch ("plus" or "minus").
    """
    if sign not in (PLUS, MINUS):
        raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")
    if copies < 1:
        raise ValueError("copies must be >= 1")
    s = 1.0 if sign == PLUS else -1.0
    single = np.array([np.cos(theta), s * np.sin(theta)], dtype=np.complex128)
    amps = single
    for _ in range(copies - 1):
        amps = np.kron(amps, single)
    return StateVector(copies, amps)


def basis_state(n_qubits: int, index: int) -> StateVector:
    amps = np.zeros(2 ** n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(n_qubits, amps)


def kron(a, b):
    """Kronecker product of two StateVectors or two Unitaries.

    The left operand indexes the more significant bits of the result.
    """
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(
            a.n_qubits + b.n_qubits,
            np.kron(a.amps, b.amps),
            subnormalized=a.subnormalized or b.subnormalized,
        )
    if isinstance(a, Unitary) and isinstance(b, Unitary):
        return Unitary(np.kron(a.entries, b.entries))
    raise TypeError(
        "kron operands must both be StateVector or both be Unitary, got "
        f"{type(a).__name__} and {type(b).__name__}"
    )


def _apply_matrix(amps: np.ndarray, gate: np.ndarray, qubits: Iterable[int], n: int) -> np.ndarray:
    """Apply ``gate`` to the listed qubits of a 2**n amplitude array.

    The first listed qubit is the most significant bit of the gate's local
    basis.
    """
    qubits = list(qubits)
    k = len(qubits)
    psi = amps.reshape((2,) * n)
    op = gate.reshape((2,) * (2 * k))
    out = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), qubits))
    out = np.moveaxis(out, list(range(k)), qubits)
    return np.ascontiguousarray(out.reshape(-1))


def apply_gate(state: StateVector, gate: Unitary, qubits) -> StateVector:
    """Apply ``gate`` to the named qubits of ``state``, identity elsewhere.

    ``qubits`` is an ordered list of distinct indices; the first listed qubit
    is the more significant bit of the gate's local basis.  The norm is
    preserved (the gate is verified unitary at construction).
    """
    qubits = list(qubits)
    k = len(qubits)
    if gate.dim != 2 ** k:
        raise ValueError(
            f"gate of dimension {gate.dim} cannot act on {k} qubit(s)"
        )
    if len(set(qubits)) != k:
        raise ValueError(f"qubit indices must be distinct, got {qubits}")
    for q in qubits:
        if not (0 <= q < state.n_qubits):
            raise ValueError(
                f"qubit index {q} out of range for {state.n_qubits}-qubit state"
            )
    out = _apply_matrix(state.amps, gate.entries, qubits, state.n_qubits)
    return StateVector(state.n_qubits, out, subnormalized=state.subnormalized)


def embedded_matrix(gate: Unitary, qubits, n_qubits: int) -> np.ndarray:
    """The full 2**n x 2**n matrix of ``gate`` acting on the listed qubits."""
    qubits = list(qubits)
    dim = 2 ** n_qubits
    cols = np.empty((dim, dim), dtype=np.complex128)
    eye = np.eye(dim, dtype=np.complex128)
    for j in range(dim):
        cols[:, j] = _apply_matrix(eye[:, j], gate.entries, qubits, n_qubits)
    return cols


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(
            f"size mismatch: {a.n_qubits} vs {b.n_qubits} qubits"
        )
    return complex(np.vdot(a.amps, b.amps))


def global_fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2 for two normalized states."""
    if a.subnormalized or b.subnormalized:
        raise ValueError("global_fidelity requires normalized states")
    val = abs(inner(a, b)) ** 2
    return float(min(val, 1.0))


def _branch_mask(n_qubits: int, qubit: int, bit: int) -> np.ndarray:
    idx = np.arange(2 ** n_qubits)
    return ((idx >> (n_qubits - 1 - qubit)) & 1) == bit


def branch_probability(state: StateVector, qubit: int, outcome: str) -> float:
    if outcome not in (PLUS, MINUS):
        raise ValueError(f"outcome must be 'plus' or 'minus', got {outcome!r}")
    if not (0 <= qubit < state.n_qubits):
        raise ValueError(f"qubit index {qubit} out of range")
    bit = 0 if outcome == PLUS else 1
    mask = _branch_mask(state.n_qubits, qubit, bit)
    return float(np.sum(np.abs(state.amps[mask]) ** 2))


def project_qubit(state: StateVector, qubit: int, outcome: str):
    """Project one qubit onto ``outcome`` ("plus"/"minus").

    Returns ``(probability, post_state)`` with the post-state renormalized.
    Raises ImpossibleBranchError when the branch probability is below
    ``IMPOSSIBLE_BRANCH_TOL``.
    """
    prob = branch_probability(state, qubit, outcome)
    if prob < IMPOSSIBLE_BRANCH_TOL:
        raise ImpossibleBranchError(
            f"impossible branch: outcome {outcome!r} on qubit {qubit} has "
            f"probability {prob:.3e}"
        )
    bit = 0 if outcome == PLUS else 1
    keep = _branch_mask(state.n_qubits, qubit, bit)
    amps = state.amps.copy()
    amps[~keep] = 0.0
    amps /= np.sqrt(prob)
    return prob, StateVector(state.n_qubits, amps)


def discard_qubit(state: StateVector, qubit: int) -> StateVector:
    """Drop a qubit that is in a definite |+> or |-> product state.

    Raises ValueError if the qubit is entangled with (or in superposition
    relative to) the rest of the register.
    """
    p_plus = branch_probability(state, qubit, PLUS)
    p_minus = branch_probability(state, qubit, MINUS)
    total = p_plus + p_minus
    if p_plus >= total - 1e-12 * max(total, 1.0):
        bit = 0
    elif p_minus >= total - 1e-12 * max(total, 1.0):
        bit = 1
    else:
        raise ValueError(
            f"qubit {qubit} is not in a definite basis state "
            f"(p_plus={p_plus!r}, p_minus={p_minus!r}); cannot discard"
        )
    keep = _branch_mask(state.n_qubits, qubit, bit)
    amps = state.amps[keep]
    return StateVector(state.n_qubits - 1, amps, subnormalized=state.subnormalized)
