"""Algebra specifications and word rewriting.

Words are tuples of variable indices.  The empty tuple is the unit.  An
:class:`AlgebraSpec` fixes the relations between generators (square rules and
pairwise commutation) and the regime, which decides what happens to words
sitting under the state symbol: nothing (state), cyclic equivalence (trace), or
full commutativity (moment).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

SQUARE_RULES = ("free", "idempotent", "involutory")
PAIR_RELATIONS = ("free", "commute", "anticommute")
REGIMES = ("state", "trace", "moment")

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_RESERVED = {"i", "s"}

Word = tuple


class AlgebraError(ValueError):
    """Malformed algebra specification or word."""


class SignedWord(NamedTuple):
    """Result of rewriting: ``sign * word``.

    ``sign`` is ``+1`` or ``-1``; it is ``0`` when the word vanishes in the
    quotient (e.g. a state word identified with its own negative).
    """

    sign: int
    word: Word


@dataclass(frozen=True)
class AlgebraSpec:
    """Generators, their relations, and the evaluation regime.

    Parameters
    ----------
    var_names : tuple of str
        Names of the hermitian generators.
    square_rules : tuple of str
        Per variable, one of ``free``, ``idempotent`` (x^2 = x) or
        ``involutory`` (x^2 = 1).
    pair_relations : tuple of tuple of str
        Symmetric table; entry ``[a][b]`` is ``free``, ``commute`` or
        ``anticommute``.  The diagonal is ignored.
    regime : str
        ``state``, ``trace`` or ``moment``.  The moment regime promotes every
        ``free`` pair to ``commute`` and rejects ``anticommute``.
    real_symmetrize : bool or None
        Identify a state word with its reversal.  ``None`` means "decide
        later" and behaves like ``False`` during rewriting.
    """

    var_names: tuple
    square_rules: tuple
    pair_relations: tuple
    regime: str = "state"
    real_symmetrize: bool | None = None

    def __post_init__(self):
        n = len(self.var_names)
        if n == 0:
            raise AlgebraError("at least one variable is required")
        names = tuple(self.var_names)
        for name in names:
            if not _NAME_RE.match(name):
                raise AlgebraError(f"invalid variable name {name!r}")
            if name in _RESERVED:
                raise AlgebraError(f"variable name {name!r} is reserved")
        if len(set(names)) != n:
            raise AlgebraError("duplicate variable names")
        if len(self.square_rules) != n:
            raise AlgebraError("one square rule per variable is required")
        for rule in self.square_rules:
            if rule not in SQUARE_RULES:
                raise AlgebraError(f"unknown square rule {rule!r}")
        if self.regime not in REGIMES:
            raise AlgebraError(f"unknown regime {self.regime!r}")
        table = [list(row) for row in self.pair_relations]
        if len(table) != n or any(len(row) != n for row in table):
            raise AlgebraError("pair relation table must be n x n")
        for a in range(n):
            table[a][a] = "free"
            for b in range(n):
                rel = table[a][b]
                if rel not in PAIR_RELATIONS:
                    raise AlgebraError(f"unknown pair relation {rel!r}")
                if a != b and table[b][a] != rel:
                    raise AlgebraError(
                        f"pair relation table is not symmetric at ({a}, {b})")
        if self.regime == "moment":
            for a in range(n):
                for b in range(n):
                    if a == b:
                        continue
                    if table[a][b] == "anticommute":
                        raise AlgebraError(
                            "moment regime requires commuting variables, got "
                            f"anticommute({names[a]}, {names[b]})")
                    table[a][b] = "commute"
        object.__setattr__(self, "var_names", names)
        object.__setattr__(self, "square_rules", tuple(self.square_rules))
        object.__setattr__(self, "pair_relations",
                           tuple(tuple(row) for row in table))

    @classmethod
    def build(cls, names: Sequence[str] | str, *, projections=(), involutions=(),
              commute=(), anticommute=(), regime="state",
              real_symmetrize=None) -> "AlgebraSpec":
        """Convenience constructor from name lists.

        ``commute`` and ``anticommute`` take pairs of names; the string
        ``"all"`` for ``commute`` makes every pair commute.
        """
        if isinstance(names, str):
            names = names.split()
        names = tuple(names)
        index = {name: k for k, name in enumerate(names)}

        def lookup(name):
            try:
                return index[name]
            except KeyError:
                raise AlgebraError(f"unknown variable {name!r}") from None

        if isinstance(projections, str):
            projections = projections.split()
        if isinstance(involutions, str):
            involutions = involutions.split()
        rules = ["free"] * len(names)
        for name in projections:
            rules[lookup(name)] = "idempotent"
        for name in involutions:
            rules[lookup(name)] = "involutory"
        table = [["free"] * len(names) for _ in names]
        if commute == "all":
            commute = [(a, b) for a in names for b in names if a < b]
        for rel, pairs in (("commute", commute), ("anticommute", anticommute)):
            for a, b in pairs:
                ia, ib = lookup(a), lookup(b)
                if ia == ib:
                    raise AlgebraError(f"pair relation on a single variable {a!r}")
                table[ia][ib] = table[ib][ia] = rel
        return cls(names, tuple(rules), tuple(map(tuple, table)), regime,
                   real_symmetrize)

    @property
    def n_vars(self) -> int:
        return len(self.var_names)

    def with_options(self, **changes) -> "AlgebraSpec":
        fields = dict(var_names=self.var_names, square_rules=self.square_rules,
                      pair_relations=self.pair_relations, regime=self.regime,
                      real_symmetrize=self.real_symmetrize)
        fields.update(changes)
        return AlgebraSpec(**fields)

    def index(self, name: str) -> int:
        try:
            return self.var_names.index(name)
        except ValueError:
            raise AlgebraError(f"unknown variable {name!r}") from None

    def word_text(self, word: Iterable[int]) -> str:
        return "*".join(self.var_names[a] for a in word)

    def check_word(self, word: Iterable[int]) -> Word:
        word = tuple(word)
        for a in word:
            if not (isinstance(a, int) and 0 <= a < self.n_vars):
                raise AlgebraError(
                    f"letter {a!r} out of range for {self.n_vars} variables")
        return word


def _swap_sign(spec: AlgebraSpec, a: int, b: int) -> int:
    """Sign picked up by swapping adjacent letters a, b; 0 if they don't swap."""
    if a == b:
        return 0
    rel = spec.pair_relations[a][b]
    if rel == "commute":
        return 1
    if rel == "anticommute":
        return -1
    return 0


def _square_pass(spec: AlgebraSpec, w: list) -> int | None:
    """Apply one square reduction in place; return its sign or None."""
    for i, a in enumerate(w):
        rule = spec.square_rules[a]
        if rule == "free":
            continue
        sign = 1
        for j in range(i + 1, len(w)):
            b = w[j]
            if b == a:
                if rule == "idempotent":
                    del w[j]
                else:
                    del w[j]
                    del w[i]
                return sign
            s = _swap_sign(spec, a, b)
            if s == 0:
                break
            sign *= s
    return None


def _lex_normal(spec: AlgebraSpec, w: list) -> tuple[int, Word]:
    """Lexicographically least arrangement reachable by signed swaps."""
    sign = 1
    out = []
    while w:
        best = None
        best_sign = 1
        for k, b in enumerate(w):
            if best is not None and b >= w[best]:
                continue
            s = 1
            for a in w[:k]:
                t = _swap_sign(spec, a, b)
                if t == 0:
                    s = 0
                    break
                s *= t
            if s:
                best, best_sign = k, s
        sign *= best_sign
        out.append(w.pop(best))
    return sign, tuple(out)


@lru_cache(maxsize=None)
def _plain(spec: AlgebraSpec, word: Word) -> SignedWord:
    w = list(word)
    sign = 1
    while True:
        s = _square_pass(spec, w)
        if s is None:
            break
        sign *= s
    s, normal = _lex_normal(spec, w)
    return SignedWord(sign * s, normal)


def _neighbours(spec: AlgebraSpec, word: Word, symmetrize: bool):
    """Words equal to ``word`` under the state symbol, one move away."""
    if spec.regime == "trace":
        for k, b in enumerate(word):
            s = 1
            for a in word[:k]:
                t = _swap_sign(spec, a, b)
                if t == 0:
                    s = 0
                    break
                s *= t
            if s:
                rest = word[:k] + word[k + 1:] + (b,)
                sw = _plain(spec, rest)
                yield s * sw.sign, sw.word
    if symmetrize:
        sw = _plain(spec, tuple(reversed(word)))
        yield sw.sign, sw.word


def _key(word: Word):
    return (len(word), word)


@lru_cache(maxsize=None)
def _under_sigma(spec: AlgebraSpec, word: Word) -> SignedWord:
    start = _plain(spec, word)
    symmetrize = bool(spec.real_symmetrize)
    if spec.regime == "state" and not symmetrize:
        return start
    signs = {start.word: {start.sign}}
    frontier = [start.word]
    while frontier:
        nxt = []
        for w in frontier:
            for sign in tuple(signs[w]):
                for s, v in _neighbours(spec, w, symmetrize):
                    seen = signs.setdefault(v, set())
                    if sign * s not in seen:
                        seen.add(sign * s)
                        nxt.append(v)
        frontier = nxt
    if any(len(s) > 1 for s in signs.values()):
        return SignedWord(0, ())
    best = min(signs, key=_key)
    (sign,) = signs[best]
    return SignedWord(sign, best)


def canonicalize_word(spec: AlgebraSpec, word: Iterable[int],
                      context: str = "plain") -> SignedWord:
    """Rewrite ``word`` to its (length, lex)-least representative.

    Parameters
    ----------
    spec : AlgebraSpec
    word : iterable of int
        Letters as variable indices.
    context : {"plain", "under_sigma"}
        ``under_sigma`` additionally quotients by cyclic rotation (trace
        regime) and by reversal (when ``spec.real_symmetrize`` is set).

    Returns
    -------
    SignedWord
        ``sign`` is 0 when the word is identified with its own negative.
    """
    word = spec.check_word(word)
    if context == "plain":
        return _plain(spec, word)
    if context == "under_sigma":
        return _under_sigma(spec, word)
    raise AlgebraError(f"unknown context {context!r}")
