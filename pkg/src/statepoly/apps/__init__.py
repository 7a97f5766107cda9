"""Application drivers: uncertainty relations, quantum-code bounds, Werner witnesses."""
from .codes import (CodeBound, DelsarteResult, Enumerators, code_theta_check,
                    confusability_graph, delsarte_constraints, delsarte_feasible,
                    delsarte_problem, enumerators_oracle, graph_state,
                    knill_laflamme_distance, krawtchouk, krawtchouk_matrix, macwilliams,
                    macwilliams_matrix, ring_code_projector, stabilizer_elements,
                    stabilizer_witness)
from .graphs import (Graph, SolverFailure, connected_graphs, independence_number,
                     lovasz_theta, theta_problem)
from .pauli import PauliOperator, all_paulis, pauli_mul, symplectic_matrix
from .uncertainty import (odd_hole_bound, odd_hole_constraint, odd_holes,
                          quasi_clifford_spec, uncertainty_bound, uncertainty_objective,
                          uncertainty_relaxation, weighted_basis)
from .werner import (Permutation, perm_to_trace_poly, werner_bound, werner_polynomial,
                     werner_relaxation, werner_spec)

__all__ = [
    "CodeBound", "DelsarteResult", "Enumerators", "Graph", "PauliOperator", "Permutation",
    "SolverFailure", "all_paulis", "code_theta_check", "confusability_graph",
    "connected_graphs", "delsarte_constraints", "delsarte_feasible", "delsarte_problem",
    "enumerators_oracle", "graph_state", "independence_number", "knill_laflamme_distance",
    "krawtchouk", "krawtchouk_matrix", "lovasz_theta", "macwilliams", "macwilliams_matrix",
    "odd_hole_bound", "odd_hole_constraint", "odd_holes", "pauli_mul", "perm_to_trace_poly",
    "quasi_clifford_spec", "ring_code_projector", "stabilizer_elements",
    "stabilizer_witness", "symplectic_matrix", "theta_problem", "uncertainty_bound",
    "uncertainty_objective", "uncertainty_relaxation", "weighted_basis", "werner_bound",
    "werner_polynomial", "werner_relaxation", "werner_spec",
]
