"""Weight enumerators and SDP/LP bounds on self-dual quantum codes.

A code of length ``n`` and distance ``delta`` with ``K = 1`` is described
by a projector of rank one on ``n`` qubits.  The checks here are necessary
conditions for existence: the Lovasz theta bound on the confusability graph
and the Delsarte linear program.
"""
from __future__ import annotations

import math
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from ..solver import ConeProblem, ProblemTooLarge, check_size, export_sdpa, solve
from .graphs import Graph, SolverFailure, theta_problem
from .pauli import PauliOperator, all_paulis, symplectic_matrix

MAX_ORACLE_QUBITS = 5
MAX_GRAPH_QUBITS = 4


# -- Krawtchouk and MacWilliams ----------------------------------------------

def krawtchouk(n: int, j: int, i: int) -> int:
    """Quaternary Krawtchouk polynomial ``K_j(i)`` for length ``n``, exactly."""
    if not (0 <= i <= n and 0 <= j <= n):
        raise ValueError(f"need 0 <= i, j <= n, got n={n}, j={j}, i={i}")
    return sum((-1) ** a * 3 ** (j - a) * math.comb(i, a) * math.comb(n - i, j - a)
               for a in range(min(i, j) + 1))


def krawtchouk_matrix(n: int) -> list:
    """Rows ``j``, columns ``i``."""
    return [[krawtchouk(n, j, i) for i in range(n + 1)] for j in range(n + 1)]


@dataclass(frozen=True)
class Enumerators:
    """Weight enumerators ``A_0..A_n`` (and optionally ``B_0..B_n``)."""

    A: tuple
    B: tuple | None = None
    K: int | None = None
    delta: int | None = None

    @property
    def n(self) -> int:
        return len(self.A) - 1

    def distance(self, tol: float = 1e-9) -> int:
        """Smallest ``j > 0`` with ``K B_j != A_j``, else ``n + 1``."""
        if self.B is None or self.K is None:
            raise ValueError("distance needs both enumerators and the code dimension")
        for j in range(1, self.n + 1):
            if abs(self.K * self.B[j] - self.A[j]) > tol * max(1.0, abs(self.A[j])):
                return j
        return self.n + 1

    def is_pure(self, delta: int, tol: float = 1e-9) -> bool:
        return all(abs(self.A[j]) <= tol for j in range(1, min(delta, self.n + 1)))


def _poly_mul(p: list, q: list) -> list:
    out = [0] * (len(p) + len(q) - 1)
    for a, pa in enumerate(p):
        for b, qb in enumerate(q):
            out[a + b] += pa * qb
    return out


def _poly_pow(p: list, k: int) -> list:
    out = [1]
    for _ in range(k):
        out = _poly_mul(out, p)
    return out


def macwilliams_matrix(n: int) -> list:
    """Exact matrix ``M`` with ``B = M A`` for the substitution
    ``B(x, y) = A((x + 3y)/2, (x - y)/2)``.

    Polynomials in ``(x, y)`` of degree ``n`` are stored by their ``y``
    exponent.
    """
    plus = [Fraction(1, 2), Fraction(3, 2)]      # (x + 3y)/2
    minus = [Fraction(1, 2), Fraction(-1, 2)]    # (x - y)/2
    cols = []
    for i in range(n + 1):
        cols.append(_poly_mul(_poly_pow(plus, n - i), _poly_pow(minus, i)))
    return [[cols[i][j] for i in range(n + 1)] for j in range(n + 1)]


def macwilliams(e) -> Enumerators:
    """Enumerators with ``B`` computed from ``A`` by the MacWilliams transform.

    Integer and rational input stays exact; floats stay floats.
    """
    if not isinstance(e, Enumerators):
        e = Enumerators(tuple(e))
    mat = macwilliams_matrix(e.n)
    B = tuple(sum(row[i] * e.A[i] for i in range(e.n + 1)) for row in mat)
    return Enumerators(e.A, B, e.K, e.delta)


# -- brute-force oracle ------------------------------------------------------

def _qubits(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def _check_projector(pi: np.ndarray, tol: float) -> int:
    pi = np.asarray(pi)
    if pi.ndim != 2 or pi.shape[0] != pi.shape[1]:
        raise ValueError("projector must be a square matrix")
    n = _qubits(pi.shape[0])
    if n > MAX_ORACLE_QUBITS:
        raise ValueError(f"brute-force enumerators are limited to {MAX_ORACLE_QUBITS} qubits")
    if np.abs(pi - pi.conj().T).max() > tol:
        raise ValueError("projector is not hermitian")
    if np.abs(pi @ pi - pi).max() > tol:
        raise ValueError("matrix is not idempotent")
    if abs(np.trace(pi)) < 0.5:
        raise ValueError("the zero projector is not a code")
    return n


def enumerators_oracle(pi, tol: float = 1e-9) -> Enumerators:
    """Enumerators of a projector straight from their definitions.

    ``A_j = sum tr(E Pi) tr(E^dag Pi)`` and ``B_j = sum tr(E Pi E^dag Pi)``
    over Pauli strings ``E`` of weight ``j``.
    """
    pi = np.asarray(pi, dtype=complex)
    n = _check_projector(pi, tol)
    A = [0.0] * (n + 1)
    B = [0.0] * (n + 1)
    for p in all_paulis(n):
        e = p.matrix()
        t = np.trace(e @ pi)
        A[p.weight] += float((t * np.conj(t)).real)
        B[p.weight] += float(np.trace(e @ pi @ e.conj().T @ pi).real)
    K = int(round(np.trace(pi).real))
    return Enumerators(tuple(A), tuple(B), K)


def knill_laflamme_distance(pi, tol: float = 1e-9) -> int:
    """Smallest weight of a Pauli ``E`` with ``Pi E Pi`` not proportional to ``Pi``.

    Returns ``n + 1`` if there is none.
    """
    pi = np.asarray(pi, dtype=complex)
    n = _check_projector(pi, tol)
    K = np.trace(pi).real
    best = n + 1
    for p in all_paulis(n):
        if p.weight == 0 or p.weight >= best:
            continue
        e = p.matrix()
        proj = pi @ e @ pi
        c = np.trace(proj) / K
        if np.abs(proj - c * pi).max() > tol:
            best = p.weight
    return best


def graph_state(g: Graph) -> np.ndarray:
    """State vector of the graph state on ``g``: amplitudes ``(-1)^{#edges in b}``."""
    n = g.n_vertices
    bits = (np.arange(1 << n)[:, None] >> np.arange(n - 1, -1, -1)) & 1
    parity = np.zeros(1 << n, dtype=int)
    for i, j in g.edges:
        parity ^= bits[:, i] & bits[:, j]
    return (1 - 2 * parity) / np.sqrt(1 << n)


def ring_code_projector(n: int) -> np.ndarray:
    """Projector onto the graph state of the ``n``-cycle."""
    psi = graph_state(Graph.cycle(n))
    return np.outer(psi, psi.conj())


def stabilizer_elements(pi, tol: float = 1e-9) -> list:
    """Non-identity Pauli strings ``E`` with ``|tr(E Pi)| = tr Pi``."""
    pi = np.asarray(pi, dtype=complex)
    n = _check_projector(pi, tol)
    K = np.trace(pi).real
    out = []
    for p in all_paulis(n)[1:]:
        if abs(abs(np.trace(p.matrix() @ pi)) - K) <= 1e-7:
            out.append(p)
    return out


# -- Delsarte LP -------------------------------------------------------------

def delsarte_constraints(n: int, delta: int, a, tol=0) -> list:
    """Violated Delsarte conditions for the point ``a`` (empty if feasible)."""
    if len(a) != n + 1:
        raise ValueError("need n + 1 coefficients")
    bad = []
    if abs(a[0] - 1) > tol:
        bad.append("a_0 = 1")
    for j in range(1, min(delta, n + 1)):
        if abs(a[j]) > tol:
            bad.append(f"a_{j} = 0")
    if abs(sum(a) - 2 ** n) > tol * (n + 1):
        bad.append(f"sum a = {2 ** n}")
    for j in range(n + 1):
        if a[j] < -tol:
            bad.append(f"a_{j} >= 0")
    for j, row in enumerate(krawtchouk_matrix(n)):
        if sum(k * x for k, x in zip(row, a)) < -tol * 4 ** n:
            bad.append(f"(K a)_{j} >= 0")
    return bad


def delsarte_problem(n: int, delta: int) -> ConeProblem:
    """Feasibility LP over ``a_0..a_n`` with a zero objective."""
    _check_params(n, delta)
    m = n + 1
    p = ConeProblem(m, np.zeros(m), var_labels=[f"a_{j}" for j in range(m)])
    rows, const = [], []
    rows.append(np.eye(m)[0])
    const.append(-1.0)
    for j in range(1, min(delta, m)):
        rows.append(np.eye(m)[j])
        const.append(0.0)
    rows.append(np.ones(m))
    const.append(-float(2 ** n))
    p.add_equalities(np.array(rows), const)
    entries = [(i, i, 1.0) for i in range(m)]
    for j, row in enumerate(krawtchouk_matrix(n)):
        entries += [(i, m + j, float(k)) for i, k in enumerate(row) if k]
    p.add_diagonal_block(np.zeros(2 * m), entries, label="delsarte")
    return p


@dataclass
class DelsarteResult:
    feasible: bool
    status: str
    point: tuple | None = None
    certificate: dict | None = None
    solution: object = field(default=None, repr=False)


def delsarte_feasible(n: int, delta: int, **solver_options) -> DelsarteResult:
    """Decide whether the Delsarte LP for a self-dual ``((n, 1, delta))`` code is feasible.

    Infeasibility rules the code out.  A feasible point is re-checked
    against the constraints; an infeasibility certificate carries the dual
    ray returned by the solver.
    """
    p = delsarte_problem(n, delta)
    sol = solve(p, **solver_options)
    if sol.status == "optimal":
        point = tuple(float(v) for v in sol.y)
        bad = delsarte_constraints(n, delta, point, tol=1e-6)
        if bad:
            raise SolverFailure(f"solver point violates {bad}", sol)
        return DelsarteResult(True, sol.status, point, None, sol)
    if sol.status == "primal_infeasible":
        cert = {"message": sol.message or "dual ray"}
        if sol.dual_blocks:
            cert["lp_multipliers"] = [float(v) for v in sol.dual_blocks[0]]
        if sol.eq_multipliers is not None:
            cert["eq_multipliers"] = [float(v) for v in sol.eq_multipliers]
        return DelsarteResult(False, sol.status, None, cert, sol)
    raise SolverFailure(f"Delsarte LP ended with status {sol.status}", sol)


def _check_params(n: int, delta: int):
    if n < 1:
        raise ValueError("code length must be positive")
    if not 1 <= delta <= n + 1:
        raise ValueError(f"distance must satisfy 1 <= delta <= n + 1, got {delta}")


# -- confusability graph and the theta check ---------------------------------

def confusability_graph(n: int, delta: int, max_qubits: int = MAX_GRAPH_QUBITS) -> Graph:
    """Graph on the non-identity Pauli strings of length ``n``.

    ``E ~ F`` if they anticommute or ``0 < wt(E F) < delta``; ``E`` carries
    a loop if ``0 < wt(E) < delta``.  Vertex labels are the Pauli strings.
    """
    if n < 1:
        raise ValueError("code length must be positive")
    if delta < 1:
        raise ValueError("distance must be positive")
    if n > max_qubits:
        raise ValueError(f"confusability graphs are limited to {max_qubits} qubits in-process")
    paulis = all_paulis(n)[1:]
    sym = symplectic_matrix(paulis).astype(np.int64)
    x, z = sym[:, :n], sym[:, n:]
    anti = (x @ z.T + z @ x.T) % 2 == 1
    weight = np.zeros((len(paulis),) * 2, dtype=np.int64)
    for k in range(n):
        weight += (x[:, k, None] ^ x[None, :, k]) | (z[:, k, None] ^ z[None, :, k])
    adj = anti | ((weight > 0) & (weight < delta))
    iu, ju = np.nonzero(np.triu(adj, 1))
    own = np.array([p.weight for p in paulis])
    loops = np.nonzero((own > 0) & (own < delta))[0]
    return Graph.from_edges(len(paulis), zip(iu.tolist(), ju.tolist()), loops.tolist(),
                            [p.letters for p in paulis])


@dataclass
class CodeBound:
    """Outcome of a code existence check."""

    params: tuple
    method: str
    status: str            # excluded | not_excluded | undetermined
    value: float | None = None
    certificate_path: str | None = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"params": list(self.params), "method": self.method, "value": self.value,
                "status": self.status, "certificate_path": self.certificate_path}


def stabilizer_witness(n: int, delta: int):
    """A known pure self-dual code projector of length ``n`` and distance ``delta``, or None."""
    candidates = [ring_code_projector(n)] if n >= 3 else []
    zero = np.zeros((1 << n, 1 << n))
    zero[0, 0] = 1.0
    candidates.append(zero)
    for pi in candidates:
        if n > MAX_ORACLE_QUBITS:
            return None
        enum = enumerators_oracle(pi)
        if enum.distance() >= delta and enum.is_pure(delta):
            return pi
    return None


def code_theta_check(n: int, delta: int, export_path=None, tol: float = 1e-6,
                     max_qubits: int = MAX_ORACLE_QUBITS, **solver_options) -> CodeBound:
    """Necessary condition ``2^n <= theta(G) + 1`` for a self-dual ``((n, 1, delta))`` code.

    ``G`` is the confusability graph with looped vertices removed.  When the
    theta SDP exceeds the in-process size guardrail, it is written to
    ``export_path`` in SDPA format.  A known code, if any, then certifies
    ``not_excluded`` through an independent set of size ``2^n - 1`` (its
    non-identity stabilizers), which bounds theta from below.
    """
    _check_params(n, delta)
    params = (n, 1, delta)
    g = confusability_graph(n, delta, max_qubits=max_qubits).pruned()
    target = 2 ** n
    if g.n_vertices == 0:
        return CodeBound(params, "lovasz_theta", "excluded" if target > 1 + tol else
                         "not_excluded", 0.0)
    prob = theta_problem(g)
    try:
        check_size(prob)
    except ProblemTooLarge:
        path = Path(export_path) if export_path else Path(tempfile.mkdtemp()) / \
            f"theta_{n}_1_{delta}.dat-s"
        export_sdpa(prob, path)
        pi = stabilizer_witness(n, delta)
        if pi is None:
            return CodeBound(params, "export", "undetermined", None, str(path),
                             {"vertices": g.n_vertices})
        labels = {lab: k for k, lab in enumerate(g.labels)}
        stab = [labels.get(p.letters) for p in stabilizer_elements(pi)]
        if None in stab or not g.is_independent(stab):
            return CodeBound(params, "export", "undetermined", None, str(path),
                             {"vertices": g.n_vertices})
        return CodeBound(params, "independent_set_witness", "not_excluded",
                         float(len(stab)), str(path),
                         {"vertices": g.n_vertices, "independent_set": sorted(
                             g.labels[k] for k in stab)})
    sol = solve(prob, **solver_options)
    if sol.status != "optimal":
        raise SolverFailure(f"theta solve ended with status {sol.status}", sol)
    theta = sol.objective
    status = "excluded" if target > theta + 1 + tol else "not_excluded"
    return CodeBound(params, "lovasz_theta", status, theta, None,
                     {"vertices": g.n_vertices, "iterations": sol.iterations})


__all__ = [
    "CodeBound", "DelsarteResult", "Enumerators", "PauliOperator", "code_theta_check",
    "confusability_graph", "delsarte_constraints", "delsarte_feasible", "delsarte_problem",
    "enumerators_oracle", "graph_state", "knill_laflamme_distance", "krawtchouk",
    "krawtchouk_matrix", "macwilliams", "macwilliams_matrix", "ring_code_projector",
    "stabilizer_elements", "stabilizer_witness",
]
