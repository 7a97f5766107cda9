"""Moment relaxations of state polynomial optimization problems."""
from .basis import DEFAULT_MAX_SIZE, Basis, CapacityError, canonical_words, generate_basis
from .moments import (LinearForm, MomentKey, MomentTable, Pencil, build_pencil,
                      localizing_basis, moment_index)
from .relaxation import (CONSTRAINT_KINDS, Constraint, DegreeError, RelaxationProblem,
                         RelaxationResult, assemble_relaxation)

__all__ = [
    "Basis", "CONSTRAINT_KINDS", "CapacityError", "Constraint", "DEFAULT_MAX_SIZE",
    "DegreeError", "LinearForm", "MomentKey", "MomentTable", "Pencil",
    "RelaxationProblem", "RelaxationResult", "assemble_relaxation", "build_pencil",
    "canonical_words", "generate_basis", "localizing_basis", "moment_index",
]
