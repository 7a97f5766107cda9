"""Additive uncertainty relations for anticommuting observables.

Observables ``a0 .. a{n-1}`` square to the identity and pairwise either
commute or anticommute, the anticommuting pairs being the edges of a graph.
The quantity of interest is the largest value of ``sum_i <a_i>^2`` over all
states, bounded from above by state-regime moment relaxations.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from ..algebra import AlgebraSpec, StatePolynomial, make_monomial
from ..algebra.polynomial import UNIT, _mono_product
from ..hierarchy import Constraint, assemble_relaxation
from ..hierarchy.basis import DEFAULT_MAX_SIZE, CapacityError
from .graphs import Graph, SolverFailure


def observable_name(i: int) -> str:
    return f"a{i}"


def quasi_clifford_spec(g: Graph) -> AlgebraSpec:
    """Involutory generators, anticommuting on edges and commuting otherwise."""
    if g.loops:
        raise ValueError("anticommutation graphs have no loops")
    if g.n_vertices == 0:
        raise ValueError("at least one observable is required")
    names = [observable_name(i) for i in range(g.n_vertices)]
    anti = [(names[i], names[j]) for i, j in sorted(g.edges)]
    comm = [(names[i], names[j]) for i, j in g.non_edges()]
    return AlgebraSpec.build(names, involutions=names, commute=comm, anticommute=anti,
                             regime="state")


def weighted_basis(spec: AlgebraSpec, level: int, max_size: int = DEFAULT_MAX_SIZE) -> list:
    """Products of at most ``level`` factors ``<a_i> a_i``.

    Signs are dropped since they do not change the span; the unit comes
    first and the rest follow the monomial order.
    """
    factors = []
    for i in range(spec.n_vars):
        sign, mono = make_monomial(spec, [(i,)], (i,))
        factors.append(mono)
    layer = {UNIT}
    found = {UNIT}
    for _ in range(level):
        nxt = set()
        for mono in layer:
            for f in factors:
                sign, prod = _mono_product(spec, mono, f)
                if sign and prod not in found:
                    nxt.add(prod)
        found |= nxt
        layer = nxt
        if len(found) > max_size:
            raise CapacityError(f"weighted basis exceeds {max_size} elements")
    rest = sorted(found - {UNIT}, key=lambda m: m.sort_key())
    return [UNIT] + rest


def uncertainty_objective(spec: AlgebraSpec, vertices=None) -> StatePolynomial:
    """``sum_i <a_i>^2`` over ``vertices`` (default: all observables)."""
    if vertices is None:
        vertices = range(spec.n_vars)
    total = StatePolynomial.zero(spec)
    for i in vertices:
        s = StatePolynomial.sigma(spec, (i,))
        total = total + s * s
    return total


def odd_hole_bound(g: Graph, hole) -> int:
    """``floor(|H| / 2)`` for a vertex set ``H`` inducing an odd cycle.

    Raises
    ------
    ValueError
        If ``hole`` does not induce a cycle of odd length at least 3.
    """
    hole = list(hole)
    k = len(hole)
    if len(set(hole)) != k or k < 3 or k % 2 == 0:
        raise ValueError("an odd hole has an odd number (>= 3) of distinct vertices")
    sub = g.induced(hole)
    degrees = [len(sub.neighbours(v)) for v in range(k)]
    if len(sub.edges) != k or any(d != 2 for d in degrees) or not sub.is_connected():
        raise ValueError(f"vertices {hole} do not induce a cycle")
    return k // 2


def odd_hole_constraint(spec: AlgebraSpec, g: Graph, hole) -> Constraint:
    """Scalar cut ``floor(|H|/2) - sum_{i in H} <a_i>^2 >= 0``."""
    bound = odd_hole_bound(g, hole)
    poly = StatePolynomial.constant(spec, bound) - uncertainty_objective(spec, hole)
    return Constraint(poly, "psd", basis=(UNIT,))


def odd_holes(g: Graph, max_size: int | None = None) -> list:
    """All vertex sets inducing odd cycles, as sorted tuples."""
    top = g.n_vertices if max_size is None else min(max_size, g.n_vertices)
    out = []
    for k in range(3, top + 1, 2):
        for subset in itertools.combinations(range(g.n_vertices), k):
            try:
                odd_hole_bound(g, subset)
            except ValueError:
                continue
            out.append(subset)
    return out


def uncertainty_relaxation(g: Graph, level: int, holes=(), max_size: int = DEFAULT_MAX_SIZE):
    """Level-``level`` state relaxation maximizing ``sum_i <a_i>^2``."""
    if level < 1:
        raise ValueError("level must be at least 1")
    spec = quasi_clifford_spec(g)
    basis = weighted_basis(spec, level, max_size=max_size)
    cons = [odd_hole_constraint(spec, g, h) for h in holes]
    return assemble_relaxation(spec, cons, uncertainty_objective(spec), level,
                               task="max", basis=basis, max_size=max_size)


def uncertainty_bound(g: Graph, level: int, holes=(), **solver_options) -> float:
    """Upper bound on ``max sum_i <a_i>^2`` for the anticommutation graph ``g``.

    Parameters
    ----------
    g : Graph
        Vertices are observables; edges mark anticommuting pairs.
    level : int
        Number of ``<a_i> a_i`` factors per Hankel index.  Level 1 gives the
        Lovasz theta number.
    holes : iterable of vertex sets
        Odd holes whose cuts are added to the relaxation.

    Raises
    ------
    SolverFailure
        If the solver does not reach an optimal solution.
    """
    prob = uncertainty_relaxation(g, level, holes)
    res = prob.solve(**solver_options)
    if res.status != "optimal":
        raise SolverFailure(f"uncertainty relaxation ended with status {res.status}",
                            res.solution)
    return res.bound


def uncertainty_lower_bound(g: Graph) -> Fraction:
    """The independence number, attained by commuting sign assignments."""
    from .graphs import independence_number
    return Fraction(independence_number(g))


__all__ = [
    "odd_hole_bound", "odd_hole_constraint", "odd_holes", "observable_name",
    "quasi_clifford_spec", "uncertainty_bound", "uncertainty_lower_bound",
    "uncertainty_objective", "uncertainty_relaxation", "weighted_basis",
]
