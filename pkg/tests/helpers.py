"""Shared test utilities: random models and the comparative example."""
from __future__ import annotations

import numpy as np

from statepoly.algebra import AlgebraSpec, StateModel, parse_polynomial

COMPARATIVE = "1/2*s(x*y*x*y) + 1/2*s(y*x*y*x) - s(x*y*x)*s(y)"


def comparative_spec(regime: str = "state") -> AlgebraSpec:
    return AlgebraSpec.build("x y", projections="x y", regime=regime)


def comparative(regime: str = "state"):
    spec = comparative_spec(regime)
    return spec, parse_polynomial(COMPARATIVE, spec)


def state_minimizer() -> StateModel:
    """2x2 projections and vector state with value -1/16."""
    x = np.diag([1.0, 0.0])
    y = 0.5 * np.ones((2, 2))
    v = 0.5 * np.array([np.sqrt(2 - np.sqrt(2)), -np.sqrt(2 + np.sqrt(2))])
    return StateModel((x, y), v)


def trace_minimizer() -> StateModel:
    """3x3 projections under the normalized trace with value -1/27."""
    x = np.diag([1.0, 0.0, 0.0])
    r2 = np.sqrt(2.0)
    y = np.array([[1, r2, 0], [r2, 2, 0], [0, 0, 3]]) / 3
    return StateModel.normalized_trace((x, y))


def random_unitary(dim: int, rng, real: bool = False) -> np.ndarray:
    z = rng.standard_normal((dim, dim))
    if not real:
        z = z + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_projection(dim: int, rng, rank: int | None = None, real: bool = False):
    if rank is None:
        rank = int(rng.integers(0, dim + 1))
    u = random_unitary(dim, rng, real)[:, :rank]
    return u @ u.conj().T


def random_vector_state(dim: int, rng, real: bool = False) -> np.ndarray:
    v = rng.standard_normal(dim)
    if not real:
        v = v + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rng, real: bool = False) -> np.ndarray:
    z = rng.standard_normal((dim, dim))
    if not real:
        z = z + 1j * rng.standard_normal((dim, dim))
    rho = z @ z.conj().T
    return rho / np.trace(rho).real


def random_hermitian(dim: int, rng, real: bool = False) -> np.ndarray:
    z = rng.standard_normal((dim, dim))
    if not real:
        z = z + 1j * rng.standard_normal((dim, dim))
    return (z + z.conj().T) / 2


def random_projection_model(regime: str, rng, real: bool = True, max_dim: int = 4):
    """Two projections and a state admissible for ``regime``."""
    dim = int(rng.integers(1, max_dim + 1))
    if regime == "moment":
        x = np.diag(rng.integers(0, 2, dim).astype(float))
        y = np.diag(rng.integers(0, 2, dim).astype(float))
        u = random_unitary(dim, rng, real)
        x, y = u @ x @ u.conj().T, u @ y @ u.conj().T
    else:
        x = random_projection(dim, rng, real=real)
        y = random_projection(dim, rng, real=real)
    if regime == "trace":
        return StateModel.normalized_trace((x, y))
    if rng.random() < 0.5:
        return StateModel((x, y), random_vector_state(dim, rng, real))
    return StateModel((x, y), random_density(dim, rng, real))
