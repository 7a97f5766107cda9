"""Noncommutative state polynomials.

A :class:`StateMonomial` is a product of state symbols applied to words times
an outer word.  A :class:`StatePolynomial` maps canonical monomials to complex
coefficients.  All objects are immutable; arithmetic returns new polynomials.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass
from typing import Iterable, Mapping

from .spec import AlgebraError, AlgebraSpec, canonicalize_word


@dataclass(frozen=True)
class StateMonomial:
    """``s(w_1) ... s(w_k) * outer``.

    ``sigma`` is a sorted tuple of canonical, non-unit words (a multiset) and
    ``outer`` a canonical word.  Instances are only meaningful relative to the
    spec they were canonicalized under.
    """

    sigma: tuple = ()
    outer: tuple = ()

    @property
    def degree(self) -> int:
        return sum(len(w) for w in self.sigma) + len(self.outer)

    @property
    def is_scalar(self) -> bool:
        return not self.outer

    @property
    def is_unit(self) -> bool:
        return not self.sigma and not self.outer

    def sort_key(self):
        return (self.degree, len(self.outer), self.outer,
                tuple((len(w), w) for w in self.sigma))

    def text(self, spec: AlgebraSpec) -> str:
        parts = [f"s({spec.word_text(w)})" for w in self.sigma]
        if self.outer:
            parts.append(spec.word_text(self.outer))
        return "*".join(parts) if parts else "1"


UNIT = StateMonomial()


def _sigma_key(w):
    return (len(w), w)


def _sorted_sigma(words) -> tuple:
    return tuple(sorted(words, key=_sigma_key))


def make_monomial(spec: AlgebraSpec, sigma_words: Iterable = (),
                  outer: Iterable = ()) -> tuple[int, StateMonomial]:
    """Canonicalize a raw product; return ``(sign, monomial)``.

    ``sign`` is 0 when the product vanishes.
    """
    sign = 1
    atoms = []
    for w in sigma_words:
        sw = canonicalize_word(spec, w, "under_sigma")
        if sw.sign == 0:
            return 0, UNIT
        sign *= sw.sign
        if sw.word:
            atoms.append(sw.word)
    so = canonicalize_word(spec, outer, "plain")
    if so.sign == 0:
        return 0, UNIT
    return sign * so.sign, StateMonomial(_sorted_sigma(atoms), so.word)


def _clean(value):
    value = complex(value)
    if value.imag == 0.0:
        return complex(value.real, 0.0)
    return value


class StatePolynomial:
    """Finite complex linear combination of state monomials.

    Construct through :meth:`constant`, :meth:`variable`, :meth:`sigma`,
    :func:`parse_polynomial` or arithmetic.  Coefficients are stored as
    Python complex numbers; zero coefficients are never stored.
    """

    __slots__ = ("spec", "_terms", "_hash")

    def __init__(self, spec: AlgebraSpec, terms: Mapping | None = None):
        self.spec = spec
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = _clean(coeff)
                if coeff != 0:
                    clean[mono] = coeff
        self._terms = clean
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def _from_clean(cls, spec, terms):
        obj = cls.__new__(cls)
        obj.spec = spec
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, spec: AlgebraSpec, value=1.0) -> "StatePolynomial":
        return cls(spec, {UNIT: value})

    @classmethod
    def zero(cls, spec: AlgebraSpec) -> "StatePolynomial":
        return cls(spec)

    @classmethod
    def from_monomial(cls, spec, sigma_words=(), outer=(), coeff=1.0):
        """Canonicalize ``coeff * s(w_1)...s(w_k) * outer``."""
        sign, mono = make_monomial(spec, sigma_words, outer)
        if sign == 0:
            return cls(spec)
        return cls(spec, {mono: sign * coeff})

    @classmethod
    def variable(cls, spec: AlgebraSpec, name) -> "StatePolynomial":
        idx = spec.index(name) if isinstance(name, str) else name
        return cls.from_monomial(spec, (), (idx,))

    @classmethod
    def sigma(cls, spec: AlgebraSpec, word) -> "StatePolynomial":
        """State symbol applied to a word (names or indices)."""
        if isinstance(word, str):
            word = [spec.index(t) for t in word.replace("*", " ").split()]
        return cls.from_monomial(spec, (tuple(word),), ())

    # container protocol --------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def coefficient(self, mono: StateMonomial) -> complex:
        return self._terms.get(mono, 0j)

    @property
    def degree(self) -> int:
        return max((m.degree for m in self._terms), default=0)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_scalar(self) -> bool:
        return all(m.is_scalar for m in self._terms)

    @property
    def is_real(self) -> bool:
        return all(c.imag == 0 for c in self._terms.values())

    def constant_term(self) -> complex:
        return self._terms.get(UNIT, 0j)

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    # arithmetic ----------------------------------------------------------
    def _coerce(self, other) -> "StatePolynomial":
        if isinstance(other, StatePolynomial):
            if other.spec != self.spec:
                raise AlgebraError("polynomials belong to different specs")
            return other
        if isinstance(other, numbers.Number):
            return StatePolynomial.constant(self.spec, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for m, c in other._terms.items():
            v = terms.get(m, 0j) + c
            if v == 0:
                terms.pop(m, None)
            else:
                terms[m] = v
        return StatePolynomial._from_clean(self.spec, terms)

    __radd__ = __add__

    def __neg__(self):
        return StatePolynomial._from_clean(
            self.spec, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(1 / other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = StatePolynomial.constant(self.spec, 1.0)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, factor) -> "StatePolynomial":
        factor = complex(factor)
        if factor == 0:
            return StatePolynomial(self.spec)
        return StatePolynomial(
            self.spec, {m: c * factor for m, c in self._terms.items()})

    def adjoint(self) -> "StatePolynomial":
        return adjoint(self)

    def varsigma(self) -> "StatePolynomial":
        return varsigma_map(self)

    def is_self_adjoint(self, tol: float = 0.0) -> bool:
        diff = self - adjoint(self)
        return all(abs(c) <= tol for c in diff._terms.values())

    def real_part(self) -> "StatePolynomial":
        return (self + adjoint(self)) * 0.5

    def recast(self, spec: AlgebraSpec) -> "StatePolynomial":
        """Re-canonicalize every monomial under another spec."""
        out = {}
        for m, c in self._terms.items():
            sign, mono = make_monomial(spec, m.sigma, m.outer)
            if sign:
                out[mono] = out.get(mono, 0j) + sign * c
        return StatePolynomial(spec, out)

    def evaluate(self, model):
        from .model import evaluate
        return evaluate(self, model)

    # comparison ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, numbers.Number):
            other = StatePolynomial.constant(self.spec, other)
        if not isinstance(other, StatePolynomial):
            return NotImplemented
        return self.spec == other.spec and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.spec, frozenset(self._terms.items())))
        return self._hash

    def almost_equal(self, other, tol=1e-12) -> bool:
        diff = self - other
        return all(abs(c) <= tol for c in diff._terms.values())

    def to_text(self) -> str:
        from .parse import format_polynomial
        return format_polynomial(self)

    def __repr__(self):
        return f"StatePolynomial({self.to_text()!r})"

    __str__ = to_text


def _mono_product(spec, m1: StateMonomial, m2: StateMonomial):
    so = canonicalize_word(spec, m1.outer + m2.outer, "plain")
    if so.sign == 0:
        return 0, UNIT
    if not m1.sigma:
        sigma = m2.sigma
    elif not m2.sigma:
        sigma = m1.sigma
    else:
        sigma = _sorted_sigma(m1.sigma + m2.sigma)
    return so.sign, StateMonomial(sigma, so.word)


def multiply(p: StatePolynomial, q: StatePolynomial) -> StatePolynomial:
    """Distributive product; state factors commute, outer words concatenate."""
    if p.spec != q.spec:
        raise AlgebraError("polynomials belong to different specs")
    spec = p.spec
    out = {}
    for m1, c1 in p._terms.items():
        for m2, c2 in q._terms.items():
            sign, mono = _mono_product(spec, m1, m2)
            if sign:
                out[mono] = out.get(mono, 0j) + sign * c1 * c2
    return StatePolynomial(spec, out)


def _adjoint_monomial(spec, m: StateMonomial):
    sign, mono = make_monomial(
        spec, (tuple(reversed(w)) for w in m.sigma), tuple(reversed(m.outer)))
    return sign, mono


def adjoint(p: StatePolynomial) -> StatePolynomial:
    """Involution: conjugate coefficients and reverse every word.

    Generators are hermitian, so the adjoint of a word is its reversal, and
    the state symbol satisfies s(w)* = s(w*).
    """
    spec = p.spec
    out = {}
    for m, c in p._terms.items():
        sign, mono = _adjoint_monomial(spec, m)
        if sign:
            out[mono] = out.get(mono, 0j) + sign * c.conjugate()
    return StatePolynomial(spec, out)


def varsigma_map(p: StatePolynomial) -> StatePolynomial:
    """Apply the state symbol to the outer word of every monomial."""
    spec = p.spec
    out = {}
    for m, c in p._terms.items():
        if not m.outer:
            out[m] = out.get(m, 0j) + c
            continue
        sign, mono = make_monomial(spec, m.sigma + (m.outer,), ())
        if sign:
            out[mono] = out.get(mono, 0j) + sign * c
    return StatePolynomial(spec, out)
