"""Simple graphs and the Lovasz theta SDP."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..solver import ConeProblem, Solution, solve


class SolverFailure(RuntimeError):
    """The conic solver did not return an optimal solution."""

    def __init__(self, message: str, solution: Solution | None = None):
        super().__init__(message)
        self.solution = solution


@dataclass(frozen=True)
class Graph:
    """Undirected graph on ``0..n_vertices-1`` with optional loops.

    ``edges`` holds sorted pairs ``(i, j)`` with ``i < j``.  ``labels`` is an
    optional name per vertex (Pauli strings for confusability graphs).
    """

    n_vertices: int
    edges: frozenset = frozenset()
    loops: frozenset = frozenset()
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n_vertices < 0:
            raise ValueError("vertex count must be non-negative")
        clean = set()
        for e in self.edges:
            i, j = sorted(int(v) for v in e)
            if i == j:
                raise ValueError(f"self-edge ({i}, {i}); use loops instead")
            if not 0 <= i < j < self.n_vertices:
                raise ValueError(f"edge ({i}, {j}) out of range")
            clean.add((i, j))
        loops = frozenset(int(v) for v in self.loops)
        if any(not 0 <= v < self.n_vertices for v in loops):
            raise ValueError("loop vertex out of range")
        if self.labels is not None and len(self.labels) != self.n_vertices:
            raise ValueError("one label per vertex is required")
        object.__setattr__(self, "edges", frozenset(clean))
        object.__setattr__(self, "loops", loops)

    # constructors ------------------------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges, loops=(), labels=None) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges), frozenset(loops),
                   tuple(labels) if labels is not None else None)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, itertools.combinations(range(n), 2))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n)

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise ValueError("a cycle needs at least 3 vertices")
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def parse(cls, text: str) -> "Graph":
        """Edge-list text: vertex count, then one ``i j`` pair per line.

        ``#`` starts a comment.  ``i i`` declares a loop.
        """
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise ValueError("empty graph description")
        try:
            n = int(lines[0])
            pairs = [tuple(int(t) for t in ln.split()) for ln in lines[1:]]
        except ValueError as exc:
            raise ValueError(f"malformed edge list: {exc}") from None
        edges, loops = [], []
        for pair in pairs:
            if len(pair) != 2:
                raise ValueError(f"expected two vertices per line, got {pair}")
            if pair[0] == pair[1]:
                loops.append(pair[0])
            else:
                edges.append(pair)
        return cls.from_edges(n, edges, loops)

    def to_text(self) -> str:
        rows = [str(self.n_vertices)]
        rows += [f"{v} {v}" for v in sorted(self.loops)]
        rows += [f"{i} {j}" for i, j in sorted(self.edges)]
        return "\n".join(rows) + "\n"

    # queries -----------------------------------------------------------------
    def adjacent(self, i: int, j: int) -> bool:
        if i == j:
            return i in self.loops
        return (min(i, j), max(i, j)) in self.edges

    def neighbours(self, v: int) -> set:
        return {j for i, j in self.edges if i == v} | {i for i, j in self.edges if j == v}

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n_vertices, self.n_vertices), dtype=bool)
        for i, j in self.edges:
            a[i, j] = a[j, i] = True
        return a

    def non_edges(self) -> list:
        return [(i, j) for i, j in itertools.combinations(range(self.n_vertices), 2)
                if (i, j) not in self.edges]

    def induced(self, vertices) -> "Graph":
        """Subgraph on ``vertices`` (relabelled ``0..k-1`` in the given order)."""
        vertices = list(vertices)
        pos = {v: k for k, v in enumerate(vertices)}
        if len(pos) != len(vertices):
            raise ValueError("repeated vertex")
        edges = [(pos[i], pos[j]) for i, j in self.edges if i in pos and j in pos]
        loops = [pos[v] for v in self.loops if v in pos]
        labels = None if self.labels is None else [self.labels[v] for v in vertices]
        return Graph.from_edges(len(vertices), edges, loops, labels)

    def pruned(self) -> "Graph":
        """Drop looped vertices; a loop forces the vertex weight to zero."""
        return self.induced([v for v in range(self.n_vertices) if v not in self.loops])

    def is_connected(self) -> bool:
        if self.n_vertices == 0:
            return True
        seen, stack = {0}, [0]
        while stack:
            v = stack.pop()
            for w in self.neighbours(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n_vertices

    def is_independent(self, vertices) -> bool:
        vs = list(vertices)
        if any(v in self.loops for v in vs):
            return False
        return not any(self.adjacent(a, b) for a, b in itertools.combinations(vs, 2))


def independence_number(g: Graph) -> int:
    """Brute-force size of a largest independent set (small graphs only)."""
    if g.n_vertices > 24:
        raise ValueError("brute-force independence number is limited to 24 vertices")
    adj = [0] * g.n_vertices
    for i, j in g.edges:
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    free = [v for v in range(g.n_vertices) if v not in g.loops]
    best = 0

    def grow(cands: list, size: int, blocked: int):
        nonlocal best
        best = max(best, size)
        for k, v in enumerate(cands):
            if size + len(cands) - k <= best:
                return
            if not blocked >> v & 1:
                grow(cands[k + 1:], size + 1, blocked | adj[v])

    grow(free, 0, 0)
    return best


def connected_graphs(n: int) -> list:
    """One representative per isomorphism class of connected graphs on ``n`` vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    perms = list(itertools.permutations(range(n)))
    seen = set()
    out = []
    for mask in range(1 << len(pairs)):
        edges = [p for k, p in enumerate(pairs) if mask >> k & 1]
        canon = min(tuple(sorted(tuple(sorted((pi[a], pi[b]))) for a, b in edges))
                    for pi in perms)
        if canon in seen:
            continue
        seen.add(canon)
        g = Graph.from_edges(n, canon)
        if g.is_connected():
            out.append(g)
    return out


def theta_problem(g: Graph) -> ConeProblem:
    """Cone form of the Lovasz theta SDP on the loop-free graph ``g``.

    The PSD block is ``[[1, x^T], [x, X]]`` with ``x_i = X_ii`` and
    ``X_ij = 0`` on edges; the objective maximizes ``tr X``.  Variables are
    the diagonal entries followed by the non-edge entries.
    """
    if g.loops:
        raise ValueError("theta needs a loop-free graph; call pruned() first")
    n = g.n_vertices
    off = g.non_edges()
    m = n + len(off)
    objective = np.concatenate([np.ones(n), np.zeros(len(off))])
    labels = [f"X[{i},{i}]" for i in range(n)] + [f"X[{i},{j}]" for i, j in off]
    p = ConeProblem(m, objective, 0.0, "max", var_labels=labels)
    const = np.zeros((n + 1, n + 1))
    const[0, 0] = 1.0
    entries = []
    for i in range(n):
        entries.append((i, 0, i + 1, 1.0))
        entries.append((i, i + 1, i + 1, 1.0))
    for k, (i, j) in enumerate(off):
        entries.append((n + k, i + 1, j + 1, 1.0))
    p.add_psd_block(const, entries, label="theta")
    return p


def lovasz_theta(g: Graph, **solver_options) -> float:
    """Lovasz theta number of a loop-free graph.

    Raises
    ------
    SolverFailure
        If the solver does not reach an optimal solution.
    """
    if g.n_vertices == 0:
        return 0.0
    sol = solve(theta_problem(g), **solver_options)
    if sol.status != "optimal":
        raise SolverFailure(f"theta solve ended with status {sol.status}", sol)
    return sol.objective


__all__ = ["Graph", "SolverFailure", "connected_graphs", "independence_number",
           "lovasz_theta", "theta_problem"]
