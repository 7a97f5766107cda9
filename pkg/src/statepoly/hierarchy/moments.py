"""Moment variables, linear forms and symbolic pencils.

A linear functional on scalar state monomials is parametrised by real
variables.  A monomial equal to its own adjoint gets one real variable; a
monomial equal to minus its adjoint gets one variable times ``i``; any other
monomial shares a (real, imaginary) pair with its adjoint partner.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra import StateMonomial, StatePolynomial, make_monomial
from ..algebra.polynomial import UNIT, _adjoint_monomial, _mono_product
from .basis import DEFAULT_MAX_SIZE, Basis, CapacityError, generate_basis

SELF_ADJOINT = "self_adjoint"
ANTI_SELF_ADJOINT = "anti_self_adjoint"
PAIRED = "paired"


class LinearForm:
    """``const + sum(coeffs[k] * y[k])`` with complex data over real ``y``."""

    __slots__ = ("const", "coeffs")

    def __init__(self, const=0j, coeffs=None):
        self.const = complex(const)
        self.coeffs = {k: complex(v) for k, v in (coeffs or {}).items() if v != 0}

    def __add__(self, other: "LinearForm") -> "LinearForm":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0j) + v
        return LinearForm(self.const + other.const, out)

    def scale(self, factor) -> "LinearForm":
        factor = complex(factor)
        return LinearForm(self.const * factor,
                          {k: v * factor for k, v in self.coeffs.items()})

    def conj(self) -> "LinearForm":
        return LinearForm(self.const.conjugate(),
                          {k: v.conjugate() for k, v in self.coeffs.items()})

    def real(self) -> "LinearForm":
        return LinearForm(self.const.real, {k: v.real for k, v in self.coeffs.items()})

    def imag(self) -> "LinearForm":
        return LinearForm(self.const.imag, {k: v.imag for k, v in self.coeffs.items()})

    @property
    def is_real(self) -> bool:
        return self.const.imag == 0 and all(v.imag == 0 for v in self.coeffs.values())

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def is_zero(self, tol: float = 0.0) -> bool:
        return abs(self.const) <= tol and all(abs(v) <= tol for v in self.coeffs.values())

    def value(self, y) -> complex:
        return self.const + sum(v * y[k] for k, v in self.coeffs.items())

    def remap(self, mapping) -> "LinearForm":
        return LinearForm(self.const, {mapping[k]: v for k, v in self.coeffs.items()})

    def close_to(self, other: "LinearForm", tol: float = 1e-12) -> bool:
        diff = self + other.scale(-1)
        return diff.is_zero(tol)

    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.const == other.const and self.coeffs == other.coeffs

    def __repr__(self):
        return f"LinearForm({self.const!r}, {self.coeffs!r})"


@dataclass(frozen=True)
class MomentKey:
    """Slot of a scalar monomial in the variable table.

    ``variables`` holds one index (self-adjoint or anti-self-adjoint) or a
    (real, imaginary) pair.  ``partner`` is the canonical adjoint and
    ``partner_sign`` the sign relating ``adjoint(monomial)`` to it.
    """

    monomial: StateMonomial
    kind: str
    variables: tuple
    partner: StateMonomial
    partner_sign: int


class MomentTable:
    """Assigns real variables to canonical scalar state monomials."""

    def __init__(self, spec):
        self.spec = spec
        self.keys: list[MomentKey] = []
        self._forms: dict = {UNIT: LinearForm(1.0)}
        self.n_vars = 0
        self.labels: list[str] = []

    def __contains__(self, mono) -> bool:
        return mono in self._forms

    def __len__(self):
        return len(self.keys)

    def _new_var(self, label: str) -> int:
        self.labels.append(label)
        self.n_vars += 1
        return self.n_vars - 1

    def register(self, mono: StateMonomial) -> None:
        if mono in self._forms:
            return
        if not mono.is_scalar:
            raise ValueError("moment variables belong to scalar monomials only")
        sign, adj = _adjoint_monomial(self.spec, mono)
        text = mono.text(self.spec)
        if sign == 0:
            self._forms[mono] = LinearForm()
            return
        if adj == mono:
            v = self._new_var(text)
            kind = SELF_ADJOINT if sign == 1 else ANTI_SELF_ADJOINT
            self._forms[mono] = LinearForm(0, {v: 1.0 if sign == 1 else 1j})
            self.keys.append(MomentKey(mono, kind, (v,), mono, sign))
            return
        re = self._new_var(f"Re {text}")
        im = self._new_var(f"Im {text}")
        form = LinearForm(0, {re: 1.0, im: 1j})
        self._forms[mono] = form
        # L(m*) = conj(L(m)) and m* = sign * adj
        self._forms[adj] = form.conj().scale(sign)
        self.keys.append(MomentKey(mono, PAIRED, (re, im), adj, sign))
        self.keys.append(MomentKey(adj, PAIRED, (re, im), mono, sign))

    def form(self, mono: StateMonomial) -> LinearForm:
        """Linear form of ``L(mono)``; the monomial must be registered."""
        return self._forms[mono]

    def form_of(self, terms: dict) -> LinearForm:
        """Linear form of ``L`` applied to ``sum(coef * mono)``."""
        const = 0j
        coeffs: dict = {}
        for mono, c in terms.items():
            f = self._forms[mono]
            const += c * f.const
            for k, v in f.coeffs.items():
                coeffs[k] = coeffs.get(k, 0j) + c * v
        return LinearForm(const, coeffs)

    def slot(self, mono: StateMonomial):
        for key in self.keys:
            if key.monomial == mono:
                return key
        return None

    def values(self, y) -> dict:
        return {key.monomial: self._forms[key.monomial].value(y) for key in self.keys}


def moment_index(spec, d: int, max_size: int = DEFAULT_MAX_SIZE) -> MomentTable:
    """Table over every canonical scalar monomial of degree at most ``2d``."""
    basis = generate_basis(spec, 2 * d, max_size=max_size * 4)
    table = MomentTable(spec)
    for mono in basis:
        if mono.is_scalar:
            table.register(mono)
    return table


@dataclass
class Pencil:
    """Symbolic hermitian matrix of linear forms.

    ``entries`` is a full (both triangles) map ``(row, col) -> LinearForm``;
    absent entries are zero.
    """

    size: int
    entries: dict
    label: str = "1"
    basis: list = field(default_factory=list, repr=False)

    def entry(self, r: int, c: int) -> LinearForm:
        return self.entries.get((r, c), LinearForm())

    @property
    def is_real(self) -> bool:
        return all(f.is_real for f in self.entries.values())

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        for (r, c), f in self.entries.items():
            if not f.close_to(self.entry(c, r).conj(), tol):
                return False
        return True

    def value(self, y):
        import numpy as np
        out = np.zeros((self.size, self.size), dtype=complex)
        for (r, c), f in self.entries.items():
            out[r, c] = f.value(y)
        return out

    @property
    def variables(self) -> set:
        out = set()
        for f in self.entries.values():
            out.update(f.coeffs)
        return out


def _entry_terms(spec, u_adj, v: StateMonomial, c_terms) -> dict:
    """Scalar terms of varsigma(u* c v) given u* as ``(sign, monomial)``."""
    su, mu = u_adj
    out: dict = {}
    for mc, coeff in c_terms:
        s1, left = _mono_product(spec, mu, mc)
        if not s1:
            continue
        s2, prod = _mono_product(spec, left, v)
        if not s2:
            continue
        if prod.outer:
            s3, prod = make_monomial(spec, prod.sigma + (prod.outer,), ())
            if not s3:
                continue
        else:
            s3 = 1
        out[prod] = out.get(prod, 0j) + su * s1 * s2 * s3 * coeff
    return {m: c for m, c in out.items() if c != 0}


def pencil_terms(spec, basis, c: StatePolynomial) -> dict:
    """Upper-triangle entries of the pencil as monomial-coefficient maps."""
    c_terms = list(c.items())
    monos = list(basis)
    adjs = [_adjoint_monomial(spec, u) for u in monos]
    out = {}
    for r, u_adj in enumerate(adjs):
        for col in range(r, len(monos)):
            terms = _entry_terms(spec, u_adj, monos[col], c_terms)
            if terms:
                out[(r, col)] = terms
    return out


def localizing_basis(basis: Basis, level: int, c: StatePolynomial) -> Basis:
    """Basis truncated to degree ``level - ceil(deg c / 2)``."""
    return basis.truncate(level - (c.degree + 1) // 2)


def build_pencil(spec, basis, c: StatePolynomial | None = None,
                 table: MomentTable | None = None, label: str | None = None) -> Pencil:
    """Pencil with entries ``L(s(u* c v))`` for ``u, v`` in ``basis``.

    Parameters
    ----------
    spec : AlgebraSpec
    basis : Basis or sequence of StateMonomial
    c : StatePolynomial, optional
        Self-adjoint localizing polynomial; defaults to 1 (Hankel matrix).
    table : MomentTable, optional
        Table to register monomials in; a fresh one is created otherwise and
        is reachable as ``pencil.table``.

    Raises
    ------
    ValueError
        If ``c`` is not self-adjoint.
    """
    if c is None:
        c = StatePolynomial.constant(spec, 1.0)
    if c.spec != spec:
        c = c.recast(spec)
    if not c.is_self_adjoint(tol=1e-12):
        raise ValueError(f"localizing polynomial {c.to_text()} is not self-adjoint")
    if table is None:
        table = MomentTable(spec)
    upper = pencil_terms(spec, basis, c)
    for mono in sorted({m for t in upper.values() for m in t}, key=StateMonomial.sort_key):
        table.register(mono)
    pencil = _pencil_from_terms(table, upper, len(basis), label or c.to_text(), list(basis))
    pencil.table = table
    return pencil


def _pencil_from_terms(table, upper, size, label, basis) -> Pencil:
    entries = {}
    for (r, col), terms in upper.items():
        f = table.form_of(terms)
        if f.is_zero():
            continue
        entries[(r, col)] = f
        if r != col:
            entries[(col, r)] = f.conj()
    return Pencil(size, entries, label, basis)


__all__ = [
    "ANTI_SELF_ADJOINT", "CapacityError", "LinearForm", "MomentKey", "MomentTable",
    "PAIRED", "Pencil", "SELF_ADJOINT", "build_pencil", "localizing_basis",
    "moment_index", "pencil_terms",
]
