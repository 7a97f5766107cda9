"""Assembly of the level-d moment relaxation."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from ..algebra import AlgebraSpec, StateMonomial, StatePolynomial, evaluate, varsigma_map
from ..solver.cone import ConeProblem
from .basis import DEFAULT_MAX_SIZE, Basis, generate_basis
from .moments import LinearForm, MomentTable, Pencil, _pencil_from_terms, pencil_terms

CONSTRAINT_KINDS = ("psd", "eq_localizing", "eq_square")
DUMP_SCHEMA_VERSION = 1


class DegreeError(ValueError):
    """Objective or constraint degree exceeds what the level supports."""


@dataclass(frozen=True)
class Constraint:
    """``poly >= 0`` (psd) or ``poly = 0`` (eq_localizing / eq_square).

    ``basis`` optionally fixes the localizing index set, overriding the
    default degree truncation.
    """

    poly: StatePolynomial
    kind: str = "psd"
    basis: tuple | None = None

    def __post_init__(self):
        if self.kind not in CONSTRAINT_KINDS:
            raise ValueError(f"unknown constraint kind {self.kind!r}")


def _as_constraint(item) -> Constraint:
    if isinstance(item, Constraint):
        return item
    if isinstance(item, StatePolynomial):
        return Constraint(item)
    poly, kind = item
    return Constraint(poly, kind)


def resolve_symmetrization(spec: AlgebraSpec, polys: Iterable[StatePolynomial]) -> bool:
    """Reversal symmetry is sound when all data is real and self-adjoint."""
    if spec.real_symmetrize is not None:
        return bool(spec.real_symmetrize)
    for p in polys:
        if not p.is_real or not p.is_self_adjoint(tol=1e-12):
            return False
    return True


@dataclass
class RelaxationResult:
    bound: float
    status: str
    solution: object = field(repr=False)
    problem: "RelaxationProblem" = field(repr=False)

    @property
    def moments(self) -> dict:
        """Solved moment values keyed by monomial text."""
        y = self.solution.y
        t = self.problem.table
        return {k.monomial.text(t.spec): t.form(k.monomial).value(y) for k in t.keys}


@dataclass
class RelaxationProblem:
    spec: AlgebraSpec
    level: int
    task: str
    table: MomentTable
    objective: LinearForm
    pencils: list
    equalities: list
    objective_poly: StatePolynomial = field(repr=False, default=None)
    basis: Basis = field(repr=False, default=None)

    @property
    def n_vars(self) -> int:
        return self.table.n_vars

    def to_cone(self) -> ConeProblem:
        """Realified conic problem over the moment variables."""
        m = self.n_vars
        c = np.zeros(m)
        for k, v in self.objective.coeffs.items():
            c[k] = v.real
        p = ConeProblem(m, c, self.objective.const.real, self.task,
                        var_labels=list(self.table.labels))
        for pencil in self.pencils:
            _add_pencil(p, pencil)
        if self.equalities:
            rows, cols, vals, const = [], [], [], []
            r = 0
            for form in self.equalities:
                for part in (form.real(), form.imag()):
                    if part.is_zero(1e-15):
                        continue
                    for k, v in part.coeffs.items():
                        rows.append(r)
                        cols.append(k)
                        vals.append(v.real)
                    const.append(part.const.real)
                    r += 1
            if r:
                p.add_equalities(sp.csr_matrix((vals, (rows, cols)), shape=(r, m)), const)
        return p

    def solve(self, **options) -> RelaxationResult:
        from ..solver import solve as cone_solve
        sol = cone_solve(self.to_cone(), **options)
        return RelaxationResult(sol.objective, sol.status, sol, self)

    def moment_vector(self, model) -> np.ndarray:
        """Variable values induced by evaluating every moment at ``model``."""
        y = np.zeros(self.n_vars)
        spec = self.spec
        for key in self.table.keys:
            mono = key.monomial
            poly = StatePolynomial(spec, {mono: 1.0})
            val = evaluate(poly, model, check=False)
            if spec.real_symmetrize:
                val = val.real
            if key.kind == "self_adjoint":
                y[key.variables[0]] = val.real
            elif key.kind == "anti_self_adjoint":
                y[key.variables[0]] = val.imag
            elif key.monomial.sort_key() <= key.partner.sort_key():
                y[key.variables[0]] = val.real
                y[key.variables[1]] = val.imag
        return y

    def check_hermitian(self, tol: float = 1e-12) -> bool:
        return all(pc.is_hermitian(tol) for pc in self.pencils)

    def to_json(self) -> dict:
        """Debug dump: variable table and pencils as sparse triplets."""
        def form_json(f: LinearForm):
            return {"const": [f.const.real, f.const.imag],
                    "coeffs": [[k, v.real, v.imag] for k, v in sorted(f.coeffs.items())]}

        return {
            "schema_version": DUMP_SCHEMA_VERSION,
            "regime": self.spec.regime,
            "variables": list(self.spec.var_names),
            "level": self.level,
            "task": self.task,
            "real_symmetrize": bool(self.spec.real_symmetrize),
            "moment_variables": [
                {"index": k, "label": lab} for k, lab in enumerate(self.table.labels)],
            "objective": form_json(self.objective),
            "pencils": [
                {"label": pc.label, "size": pc.size,
                 "entries": [[r, c, form_json(f)] for (r, c), f in sorted(pc.entries.items())
                             if r <= c]}
                for pc in self.pencils],
            "equalities": [form_json(f) for f in self.equalities],
        }

    def dump_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)


def _add_pencil(p: ConeProblem, pencil: Pencil) -> None:
    n = pencil.size
    if pencil.is_real:
        const = np.zeros((n, n))
        entries = []
        for (r, c), f in pencil.entries.items():
            if r > c:
                continue
            const[r, c] = const[c, r] = f.const.real
            entries.extend((k, r, c, v.real) for k, v in f.coeffs.items())
        p.add_psd_block(const, entries, label=pencil.label)
        return
    # hermitian M = R + iI is PSD iff [[R, -I], [I, R]] is
    const = np.zeros((2 * n, 2 * n))
    entries = []
    for (r, c), f in pencil.entries.items():
        re, im = f.real(), f.imag()
        for (i, j), part, sgn in (((r, c), re, 1), ((n + r, n + c), re, 1),
                                  ((n + r, c), im, 1), ((r, n + c), im, -1)):
            if i > j:
                continue
            const[i, j] = const[j, i] = sgn * part.const.real
            entries.extend((k, i, j, sgn * v.real) for k, v in part.coeffs.items())
    p.add_psd_block(const, entries, label=pencil.label)


def assemble_relaxation(spec: AlgebraSpec, constraints: Sequence, f: StatePolynomial,
                        d: int, task: str = "min", archimedean: float | bool | None = None,
                        basis: Sequence[StateMonomial] | None = None,
                        max_size: int = DEFAULT_MAX_SIZE) -> RelaxationProblem:
    """Level-``d`` moment relaxation of optimizing ``f`` subject to ``constraints``.

    Parameters
    ----------
    spec : AlgebraSpec
    constraints : sequence
        Items are :class:`Constraint`, ``(poly, kind)`` pairs or bare
        polynomials (``psd``).
    f : StatePolynomial
        Self-adjoint objective.  Outer words are placed under the state.
    d : int
        Level; the Hankel matrix is indexed by monomials of degree <= d.
        Level 0 is the trivial relaxation: only ``L(1) = 1`` is known, so
        the bound is the constant term of ``f`` and non-constant
        constraints are skipped.
    task : {"min", "max"}
    archimedean : bool or float, optional
        Append the ball constraint ``N - sum x_i^2``; ``True`` uses
        ``N = n``, a number sets ``N``.
    basis : sequence of StateMonomial, optional
        Custom Hankel index set (must contain the unit).

    Returns
    -------
    RelaxationProblem

    Raises
    ------
    DegreeError
        If ``f`` or a constraint needs a higher level.
    ValueError
        On non-self-adjoint data or an empty basis.
    """
    if task not in ("min", "max"):
        raise ValueError(f"task must be 'min' or 'max', got {task!r}")
    if d < 0:
        raise ValueError("level must be non-negative")
    cons = [_as_constraint(c) for c in constraints]
    polys = [f] + [c.poly for c in cons]
    for p in polys:
        if p.spec.var_names != spec.var_names:
            raise ValueError("polynomial and spec have different variables")
    sym = resolve_symmetrization(spec, polys)
    spec = spec.with_options(real_symmetrize=sym)
    if archimedean:
        radius = float(spec.n_vars if archimedean is True else archimedean)
        ball = StatePolynomial.constant(spec, radius)
        for name in spec.var_names:
            x = StatePolynomial.variable(spec, name)
            ball = ball - x * x
        cons.append(Constraint(ball, "psd"))
    f = f.recast(spec)
    if not f.is_self_adjoint(tol=1e-12):
        raise ValueError(f"objective {f.to_text()} is not self-adjoint")
    objective_poly = varsigma_map(f)

    if basis is None:
        hankel_basis = generate_basis(spec, d, max_size=max_size)
        max_deg = 2 * d
    else:
        hankel_basis = Basis([m for m in basis])
        if not len(hankel_basis):
            raise ValueError("empty basis")
        max_deg = 2 * hankel_basis.max_degree
    trivial = basis is None and d == 0
    if trivial:
        # only L(1) = 1 is pinned at level 0; every other moment is free
        objective_poly = StatePolynomial.constant(spec, objective_poly.constant_term())
    if objective_poly.degree > max_deg:
        raise DegreeError(
            f"objective has degree {objective_poly.degree} > {max_deg}; raise the level")

    upper_sets = [("1", hankel_basis, pencil_terms(spec, hankel_basis, StatePolynomial.constant(spec, 1.0)))]
    eq_sets = []
    square_polys = []
    for con in cons:
        c = con.poly.recast(spec)
        if c.is_zero:
            continue
        if con.kind == "eq_square":
            sq = varsigma_map(c.adjoint() * c)
            if trivial and sq.degree > 0:
                continue
            if sq.degree > max_deg:
                raise DegreeError(f"squared constraint {c.to_text()} exceeds degree {max_deg}")
            square_polys.append(sq)
            continue
        if not c.is_self_adjoint(tol=1e-12):
            raise ValueError(f"constraint {c.to_text()} is not self-adjoint")
        if con.basis is not None:
            loc = Basis(list(con.basis))
        else:
            dc = (c.degree + 1) // 2
            if trivial and dc > 0:
                continue
            if dc > d:
                raise DegreeError(
                    f"constraint {c.to_text()} of degree {c.degree} needs level >= {dc}")
            loc = generate_basis(spec, d - dc, max_size=max_size)
        terms = pencil_terms(spec, loc, c)
        if con.kind == "psd":
            upper_sets.append((c.to_text(), loc, terms))
        else:
            eq_sets.append(terms)

    monos = set(objective_poly.terms)
    for _, _, terms in upper_sets:
        for t in terms.values():
            monos.update(t)
    for terms in eq_sets:
        for t in terms.values():
            monos.update(t)
    for sq in square_polys:
        monos.update(sq.terms)
    table = MomentTable(spec)
    for mono in sorted(monos, key=StateMonomial.sort_key):
        table.register(mono)

    pencils = [_pencil_from_terms(table, terms, len(b), label, list(b))
               for label, b, terms in upper_sets]
    equalities = []
    for terms in eq_sets:
        for key in sorted(terms):
            form = table.form_of(terms[key])
            if not form.is_zero():
                equalities.append(form)
    for sq in square_polys:
        form = table.form_of(sq.terms)
        if not form.is_zero():
            equalities.append(form)
    objective = table.form_of(objective_poly.terms)
    return RelaxationProblem(spec, d, task, table, objective, pencils, equalities,
                             objective_poly, hankel_basis)
