"""Text form of state polynomials.

Grammar: terms separated by ``+``/``-``; factors separated by ``*`` or
whitespace; ``s( ... )`` wraps a word under the state symbol; numbers are
decimals or rationals ``p/q``; ``i`` is the imaginary unit.  A factor may
carry a non-negative integer power ``^k``.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .polynomial import StatePolynomial
from .spec import AlgebraError, AlgebraSpec

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


class PolynomialSyntaxError(ValueError):
    """Raised with the 0-based character offset of the offending token."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariableError(AlgebraError):
    def __init__(self, name: str, position: int):
        super().__init__(f"unknown variable {name!r} at position {position}")
        self.name = name
        self.position = position


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind == "ws":
            if tokens and tokens[-1][0] != "ws":
                tokens.append(("ws", " ", pos))
        else:
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    while tokens and tokens[-1][0] == "ws":
        tokens.pop()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, spec: AlgebraSpec):
        self.spec = spec
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self, skip_ws=True):
        k = self.k
        if skip_ws:
            while self.tokens[k][0] == "ws":
                k += 1
        return self.tokens[k]

    def take(self, skip_ws=True):
        if skip_ws:
            while self.tokens[self.k][0] == "ws":
                self.k += 1
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise PolynomialSyntaxError(
                f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def parse(self) -> StatePolynomial:
        spec = self.spec
        tok = self.peek()
        if tok[0] == "end":
            raise PolynomialSyntaxError("empty polynomial", tok[2])
        total = StatePolynomial.zero(spec)
        sign = 1
        if tok[1] in "+-" and tok[0] == "op":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        while True:
            total = total + self.term() * sign
            tok = self.peek()
            if tok[0] == "end":
                return total
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                sign = -1 if tok[1] == "-" else 1
                continue
            raise PolynomialSyntaxError(f"unexpected {tok[1]!r}", tok[2])

    def _ends_term(self, tok):
        return tok[0] == "end" or (tok[0] == "op" and tok[1] in "+-)")

    def term(self) -> StatePolynomial:
        result = self.power(self.factor)
        while True:
            tok = self.peek()
            if self._ends_term(tok):
                return result
            if tok[0] == "op" and tok[1] == "*":
                self.take()
            elif tok[0] == "op":
                raise PolynomialSyntaxError(f"unexpected {tok[1]!r}", tok[2])
            result = result * self.power(self.factor)

    def power(self, parse_factor):
        base = parse_factor()
        tok = self.peek(skip_ws=False)
        if tok[0] == "op" and tok[1] == "^":
            self.take(skip_ws=False)
            exp = self.take(skip_ws=False)
            if exp[0] != "num" or not exp[1].isdigit():
                raise PolynomialSyntaxError("exponent must be a non-negative integer", exp[2])
            base = base ** int(exp[1])
        return base

    def number(self, tok) -> Fraction:
        value = Fraction(tok[1])
        nxt = self.peek(skip_ws=False)
        if nxt[0] == "op" and nxt[1] == "/":
            self.take(skip_ws=False)
            den = self.take(skip_ws=False)
            if den[0] != "num":
                raise PolynomialSyntaxError("expected denominator", den[2])
            d = Fraction(den[1])
            if d == 0:
                raise PolynomialSyntaxError("division by zero", den[2])
            value = value / d
        return value

    def factor(self) -> StatePolynomial:
        spec = self.spec
        tok = self.take()
        kind, text, pos = tok
        if kind == "num":
            return StatePolynomial.constant(spec, float(self.number(tok)))
        if kind == "name":
            if text == "s" and self.peek(skip_ws=False)[1] == "(":
                self.take(skip_ws=False)
                word = self.word()
                self.expect(")")
                return StatePolynomial.from_monomial(spec, (word,), ())
            if text == "i":
                return StatePolynomial.constant(spec, 1j)
            if text not in spec.var_names:
                raise UnknownVariableError(text, pos)
            return StatePolynomial.variable(spec, text)
        raise PolynomialSyntaxError(
            f"expected a factor, found {text or 'end of input'!r}", pos)

    def word(self) -> tuple:
        letters = []
        while True:
            tok = self.take()
            if tok[0] != "name":
                raise PolynomialSyntaxError(
                    f"expected a variable inside s(...), found {tok[1] or 'end of input'!r}",
                    tok[2])
            if tok[1] not in self.spec.var_names:
                raise UnknownVariableError(tok[1], tok[2])
            letter = self.spec.index(tok[1])
            count = 1
            nxt = self.peek(skip_ws=False)
            if nxt[0] == "op" and nxt[1] == "^":
                self.take(skip_ws=False)
                exp = self.take(skip_ws=False)
                if exp[0] != "num" or not exp[1].isdigit():
                    raise PolynomialSyntaxError(
                        "exponent must be a non-negative integer", exp[2])
                count = int(exp[1])
            letters.extend([letter] * count)
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == ")":
                if not letters:
                    raise PolynomialSyntaxError("empty word inside s(...)", nxt[2])
                return tuple(letters)
            if nxt[0] == "op" and nxt[1] == "*":
                self.take()


def parse_polynomial(text: str, spec: AlgebraSpec) -> StatePolynomial:
    """Parse ``text`` into a canonical :class:`StatePolynomial`.

    >>> spec = AlgebraSpec.build("x y")
    >>> parse_polynomial("s(x*y) - s(x)*s(y)", spec).to_text()
    '-s(x)*s(y) + s(x*y)'
    """
    return _Parser(text, spec).parse()


def _num(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def format_polynomial(p: StatePolynomial) -> str:
    """Inverse of :func:`parse_polynomial` up to canonical form."""
    pieces = []
    for mono, coeff in p.sorted_items():
        body = mono.text(p.spec)
        for value, unit in ((coeff.real, ""), (coeff.imag, "i")):
            if value == 0:
                continue
            sign = "-" if value < 0 else "+"
            mag = abs(value)
            factors = []
            if mag != 1 or (not unit and body == "1"):
                factors.append(_num(mag))
            if unit:
                factors.append(unit)
            if body != "1" or not factors:
                factors.append(body)
            pieces.append((sign, "*".join(factors)))
    if not pieces:
        return "0"
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out
