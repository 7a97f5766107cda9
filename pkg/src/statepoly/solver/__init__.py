"""Conic optimization: interior-point solver, SDPA export and verification."""
from .cone import STATUSES, Block, ConeProblem, Solution
from .ipm import MAX_BLOCK, MAX_ENTRIES, ProblemTooLarge, check_size, solve
from .sdpa import export_sdpa, read_sdpa, read_vector, sdpa_text, write_vector
from .verify import verify_solution

__all__ = ["Block", "ConeProblem", "MAX_BLOCK", "MAX_ENTRIES", "ProblemTooLarge",
           "STATUSES", "Solution", "check_size", "export_sdpa", "read_sdpa",
           "read_vector", "sdpa_text", "solve", "verify_solution", "write_vector"]
