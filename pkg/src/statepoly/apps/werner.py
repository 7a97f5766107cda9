"""Trace-polynomial bounds for linear combinations of permutations.

A permutation acting on ``n`` tensor factors pairs with ``X_1 (x) ... (x) X_n``
to give a product of traces, one per cycle.  Minimizing a real combination
of such products over projections yields a lower bound that is independent
of the local dimension.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..algebra import AlgebraSpec, StatePolynomial
from ..hierarchy import assemble_relaxation
from .graphs import SolverFailure

MAX_WERNER_PARTIES = 4


@dataclass(frozen=True)
class Permutation:
    """Permutation of ``1..degree`` stored as disjoint cycles.

    Cycles are normalized to start at their smallest element and sorted;
    fixed points are omitted.
    """

    degree: int
    cycles: tuple = ()

    def __post_init__(self):
        seen = set()
        clean = []
        for cyc in self.cycles:
            cyc = tuple(int(v) for v in cyc)
            if not cyc:
                raise ValueError("empty cycle")
            for v in cyc:
                if not 1 <= v <= self.degree:
                    raise ValueError(f"element {v} outside 1..{self.degree}")
                if v in seen:
                    raise ValueError(f"element {v} appears in two cycles")
                seen.add(v)
            if len(cyc) > 1:
                k = cyc.index(min(cyc))
                clean.append(cyc[k:] + cyc[:k])
        object.__setattr__(self, "cycles", tuple(sorted(clean)))

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(degree)

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> "Permutation":
        """Cycle notation such as ``"(1 2)(3 4)"`` or ``"()"``; commas allowed."""
        body = text.strip()
        if body in ("", "id"):
            body = "()"
        if not re.fullmatch(r"(\(\s*(\d+([\s,]+\d+)*)?\s*\)\s*)+", body):
            raise ValueError(f"malformed cycle notation {text!r}")
        cycles = [tuple(int(t) for t in re.split(r"[,\s]+", grp.strip()) if t)
                  for grp in re.findall(r"\(([^()]*)\)", body)]
        cycles = [c for c in cycles if c]
        top = max((max(c) for c in cycles), default=0)
        if degree is None:
            degree = top
        return cls(degree, tuple(cycles))

    def __call__(self, v: int) -> int:
        for cyc in self.cycles:
            if v in cyc:
                return cyc[(cyc.index(v) + 1) % len(cyc)]
        return v

    def inverse(self) -> "Permutation":
        return Permutation(self.degree, tuple(tuple(reversed(c)) for c in self.cycles))

    def full_cycles(self) -> list:
        """All cycles including fixed points, ordered by smallest element."""
        fixed = [(v,) for v in range(1, self.degree + 1)
                 if not any(v in c for c in self.cycles)]
        return sorted(list(self.cycles) + fixed)

    def __str__(self):
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles) or "()"


def werner_spec(degree: int) -> AlgebraSpec:
    names = [f"x{i}" for i in range(1, degree + 1)]
    return AlgebraSpec.build(names, projections=names, regime="trace")


def perm_to_trace_poly(sigma: Permutation, spec: AlgebraSpec | None = None) -> StatePolynomial:
    """Product over cycles ``(a_1 ... a_r)`` of ``tr(x_{a_1} ... x_{a_r})``."""
    if spec is None:
        spec = werner_spec(sigma.degree)
    if spec.n_vars < sigma.degree:
        raise ValueError("spec has fewer variables than the permutation degree")
    out = StatePolynomial.constant(spec, 1.0)
    for cyc in sigma.full_cycles():
        out = out * StatePolynomial.sigma(spec, tuple(v - 1 for v in cyc))
    return out


def _terms(w) -> list:
    if isinstance(w, Permutation):
        return [(1.0, w)]
    if isinstance(w, dict):
        return [(float(c), p) for p, c in w.items()]
    return [(float(c), p) for c, p in w]


def werner_polynomial(w) -> StatePolynomial:
    """Hermitian trace polynomial of a real combination of permutations.

    ``w`` is a :class:`Permutation`, a ``{Permutation: coeff}`` mapping or
    a sequence of ``(coeff, Permutation)`` pairs of equal degree.  A cycle
    and its inverse give conjugate traces, so the result is the average of
    the combination with its inverse, i.e. the real part of its value.
    """
    terms = _terms(w)
    if not terms:
        raise ValueError("empty combination")
    degrees = {p.degree for _, p in terms}
    if len(degrees) != 1:
        raise ValueError("all permutations must have the same degree")
    spec = werner_spec(degrees.pop())
    out = StatePolynomial.zero(spec)
    for c, p in terms:
        out = out + perm_to_trace_poly(p, spec).scale(c)
    return (out + out.adjoint()).scale(0.5)


def werner_relaxation(w, level: int):
    f = werner_polynomial(w)
    if f.spec.n_vars > MAX_WERNER_PARTIES:
        raise ValueError(f"at most {MAX_WERNER_PARTIES} tensor factors are supported")
    return assemble_relaxation(f.spec, [], f, level, task="min")


def werner_bound(w, level: int, **solver_options) -> float:
    """Lower bound on the trace polynomial of ``w`` over all projections.

    A non-negative value marks ``w`` as a dimension-free witness candidate.
    """
    res = werner_relaxation(w, level).solve(**solver_options)
    if res.status != "optimal":
        raise SolverFailure(f"Werner relaxation ended with status {res.status}", res.solution)
    return res.bound


__all__ = ["MAX_WERNER_PARTIES", "Permutation", "perm_to_trace_poly", "werner_bound",
           "werner_polynomial", "werner_relaxation", "werner_spec"]
