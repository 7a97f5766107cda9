"""Finite-dimensional state models and evaluation of state polynomials."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .polynomial import StatePolynomial
from .spec import AlgebraSpec

HERMITIAN_TOL = 1e-12
RELATION_TOL = 1e-9


class ModelRelationWarning(UserWarning):
    """The model violates a structural relation of the algebra spec."""


@dataclass(frozen=True, eq=False)
class StateModel:
    """Hermitian matrices together with a state.

    ``state`` is either a unit vector (vector state ``<X u, u>``) or a density
    matrix (``tr(rho X)``).
    """

    matrices: tuple
    state: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        mats = tuple(np.asarray(m, dtype=complex) for m in self.matrices)
        if not mats:
            raise ValueError("a model needs at least one matrix")
        k = mats[0].shape[0]
        for m in mats:
            if m.shape != (k, k):
                raise ValueError("model matrices must all be k x k")
            if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL * max(1.0, np.abs(m).max()):
                raise ValueError("model matrices must be hermitian")
        state = np.asarray(self.state, dtype=complex)
        if state.shape == (k,):
            if abs(np.linalg.norm(state) - 1.0) > HERMITIAN_TOL * 10:
                raise ValueError("state vector must have unit norm")
        elif state.shape == (k, k):
            if np.max(np.abs(state - state.conj().T)) > HERMITIAN_TOL * 10:
                raise ValueError("density matrix must be hermitian")
            if abs(np.trace(state).real - 1.0) > HERMITIAN_TOL * 10:
                raise ValueError("density matrix must have unit trace")
            if np.linalg.eigvalsh(state)[0] < -1e-10:
                raise ValueError("density matrix must be positive semidefinite")
        else:
            raise ValueError("state must be a length-k vector or a k x k matrix")
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "state", state)

    @classmethod
    def normalized_trace(cls, matrices) -> "StateModel":
        k = np.asarray(matrices[0]).shape[0]
        return cls(tuple(matrices), np.eye(k) / k)

    @property
    def dimension(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def density(self) -> np.ndarray:
        if self.state.ndim == 1:
            return np.outer(self.state, self.state.conj())
        return self.state

    def word_matrix(self, word) -> np.ndarray:
        word = tuple(word)
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        if not word:
            out = np.eye(self.dimension, dtype=complex)
        else:
            out = self.word_matrix(word[:-1]) @ self.matrices[word[-1]]
        self._cache[word] = out
        return out

    def expectation(self, mat: np.ndarray) -> complex:
        if self.state.ndim == 1:
            return complex(self.state.conj() @ mat @ self.state)
        return complex(np.trace(self.state @ mat))

    def violations(self, spec: AlgebraSpec, tol: float = RELATION_TOL) -> list[str]:
        """Structural relations of ``spec`` that this model breaks."""
        if len(self.matrices) != spec.n_vars:
            return [f"model has {len(self.matrices)} matrices, spec has {spec.n_vars} variables"]
        out = []
        mats = self.matrices
        scale = max(1.0, max(np.abs(m).max() for m in mats))
        eye = np.eye(self.dimension)
        for a, rule in enumerate(spec.square_rules):
            sq = mats[a] @ mats[a]
            if rule == "idempotent" and np.abs(sq - mats[a]).max() > tol * scale:
                out.append(f"{spec.var_names[a]} is not idempotent")
            if rule == "involutory" and np.abs(sq - eye).max() > tol * scale:
                out.append(f"{spec.var_names[a]} is not involutory")
        for a in range(spec.n_vars):
            for b in range(a + 1, spec.n_vars):
                rel = spec.pair_relations[a][b]
                if rel == "free":
                    continue
                sgn = 1 if rel == "commute" else -1
                defect = mats[a] @ mats[b] - sgn * (mats[b] @ mats[a])
                if np.abs(defect).max() > tol * scale * scale:
                    out.append(f"{rel}({spec.var_names[a]}, {spec.var_names[b]}) fails")
        if spec.regime == "trace":
            rho = self.density
            if any(np.abs(rho @ m - m @ rho).max() > tol * scale for m in mats):
                out.append("state is not tracial on the generated algebra")
        return out


def evaluate(p: StatePolynomial, model: StateModel, check: bool = True):
    """State evaluation of ``p`` at ``model``.

    Returns a complex number for scalar polynomials and a complex matrix
    otherwise.  A :class:`ModelRelationWarning` is issued when the model breaks
    a relation the spec assumes, since canonical forms are then not
    guaranteed to evaluate like the words they replaced.
    """
    spec = p.spec
    if len(model.matrices) != spec.n_vars:
        raise ValueError(
            f"dimension mismatch: model has {len(model.matrices)} matrices, "
            f"polynomial has {spec.n_vars} variables")
    if check:
        problems = model.violations(spec)
        if problems:
            warnings.warn("; ".join(problems), ModelRelationWarning, stacklevel=2)
    sigma_cache = {}

    def lam(word):
        v = sigma_cache.get(word)
        if v is None:
            v = model.expectation(model.word_matrix(word))
            sigma_cache[word] = v
        return v

    scalar = p.is_scalar
    total = 0j if scalar else np.zeros((model.dimension,) * 2, dtype=complex)
    for mono, coeff in p.items():
        factor = coeff
        for w in mono.sigma:
            factor *= lam(w)
        if scalar:
            total += factor
        else:
            total = total + factor * model.word_matrix(mono.outer)
    return total
