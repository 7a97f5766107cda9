"""Symbolic algebra of noncommutative state, trace and moment polynomials."""
from .model import ModelRelationWarning, StateModel, evaluate
from .parse import PolynomialSyntaxError, UnknownVariableError, format_polynomial, parse_polynomial
from .polynomial import (UNIT, StateMonomial, StatePolynomial, adjoint, make_monomial,
                         multiply, varsigma_map)
from .spec import AlgebraError, AlgebraSpec, SignedWord, canonicalize_word

__all__ = [
    "AlgebraError", "AlgebraSpec", "ModelRelationWarning", "PolynomialSyntaxError",
    "SignedWord", "StateModel", "StateMonomial", "StatePolynomial", "UNIT",
    "UnknownVariableError", "adjoint", "canonicalize_word", "evaluate",
    "format_polynomial", "make_monomial", "multiply", "parse_polynomial",
    "varsigma_map",
]
