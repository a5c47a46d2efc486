"""Optimal cloning of two non-orthogonal qubit states.

The package computes closed-form fidelity/probability bounds for M -> N
cloning of a two-state family, builds the gates and networks that attain
them, simulates those networks by exact projection, and decomposes every
two-qubit gate into CNOTs plus single-qubit rotations.

Conventions (binding everywhere): the family is
cos(theta)|+> +/- sin(theta)|->, with |+> mapped to bit 0 and |-> to bit 1;
qubit 0 is the most significant bit of a basis index; CNOTs are active when
the control is |+>; the heralding ancilla is the last qubit; measurement
outcomes are the strings "plus" and "minus".
"""

from .bounds import (
    CloneCoefficients,
    CloningProblem,
    OptimalAngles,
    TradeoffPoint,
    angle_for_copies,
    brute_force_fidelity,
    clone_coefficients,
    compose_angle,
    d_cloner_global_fidelity,
    d_cloner_local_fidelity,
    exact_clone_probability,
    fidelity_at_angles,
    fidelity_bound,
    helstrom_bound,
    hybrid_fidelity_bound,
    hybrid_limit,
    idp_probability,
    optimal_phis,
    overlap_after_copies,
    separated_angle,
    separation_bound,
)
from .gates import (
    CircuitDecomposition,
    GatePlacement,
    clone_gate,
    cnot,
    decompose_separation,
    decompose_transfer,
    sector_angles,
    separation_gamma,
    separation_gate,
    separation_rotation,
    transfer_gate,
)
from .linalg import (
    MINUS,
    PLUS,
    ImpossibleBranchError,
    StateVector,
    Unitary,
    apply_gate,
    basis_state,
    discard_qubit,
    embedded_matrix,
    family_state,
    global_fidelity,
    inner,
    kron,
    project_qubit,
)
from .networks import (
    ClonerReport,
    Measurement,
    NetworkSpec,
    SimulationResult,
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

__version__ = "0.1.0"

__all__ = [
    "CloneCoefficients",
    "CloningProblem",
    "OptimalAngles",
    "TradeoffPoint",
    "angle_for_copies",
    "brute_force_fidelity",
    "clone_coefficients",
    "compose_angle",
    "d_cloner_global_fidelity",
    "d_cloner_local_fidelity",
    "exact_clone_probability",
    "fidelity_at_angles",
    "fidelity_bound",
    "helstrom_bound",
    "hybrid_fidelity_bound",
    "hybrid_limit",
    "idp_probability",
    "optimal_phis",
    "overlap_after_copies",
    "separated_angle",
    "separation_bound",
    "CircuitDecomposition",
    "GatePlacement",
    "clone_gate",
    "cnot",
    "decompose_separation",
    "decompose_transfer",
    "sector_angles",
    "separation_gamma",
    "separation_gate",
    "separation_rotation",
    "transfer_gate",
    "MINUS",
    "PLUS",
    "ImpossibleBranchError",
    "StateVector",
    "Unitary",
    "apply_gate",
    "basis_state",
    "discard_qubit",
    "embedded_matrix",
    "family_state",
    "global_fidelity",
    "inner",
    "kron",
    "project_qubit",
    "ClonerReport",
    "Measurement",
    "NetworkSpec",
    "SimulationResult",
    "approx_network",
    "compression_sequence",
    "decompression_sequence",
    "evaluate_cloner",
    "exact_network",
    "expand_decompositions",
    "hybrid_network",
    "prepare_input",
    "run_network",
    "__version__",
]
