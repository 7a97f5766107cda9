"""Line-oriented problem files (``.spo``).

One directive per line; ``#`` starts a comment.  Example::

    variables x y
    projection x y
    regime state
    objective 1/2*s(x*y*x*y) + 1/2*s(y*x*y*x) - s(x*y*x)*s(y)
    task min
    level 5

Directives
----------
``variables NAME...``
    Declares the variables, in order.  Required, and must come first.
``projection NAME...`` / ``involution NAME...`` / ``free NAME...``
    Square rule of each listed variable (default ``free``).
``commute A B`` / ``anticommute A B``
    Pair relations.  ``commute all`` makes every pair commute.
``regime state|trace|moment``
``objective POLY``
``task min|max``
``level N``
``constraint POLY >= 0`` or ``constraint POLY = 0``
``archimedean N|auto|off``
``real_symmetrize auto|true|false``
``tol X``, ``tol_gap X``, ``tol_feas X``, ``max_iter N``
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from ..algebra import (AlgebraError, AlgebraSpec, PolynomialSyntaxError, StatePolynomial,
                       UnknownVariableError, parse_polynomial)
from ..hierarchy import Constraint

REGIMES = ("state", "trace", "moment")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_RESERVED = {"s", "i"}


class ProblemError(Exception):
    """Problem-file error with a 1-based line and column."""

    exit_code = 2
    kind = "syntax error"

    def __init__(self, message: str, line: int = 0, column: int = 0, path: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.path = path
        super().__init__(self.describe())

    def describe(self) -> str:
        where = self.path or "<problem>"
        if self.line:
            where += f":{self.line}:{self.column}"
        return f"{where}: {self.kind}: {self.message}"


class ProblemSyntaxError(ProblemError):
    exit_code = 2
    kind = "syntax error"


class ProblemSemanticError(ProblemError):
    exit_code = 3
    kind = "semantic error"


@dataclass
class Located:
    """A directive argument together with where it appeared."""

    text: str
    line: int
    column: int


@dataclass
class ConstraintEntry:
    poly: Located
    kind: str            # "psd" or "eq_localizing"


@dataclass
class ProblemFile:
    path: str
    variables: list
    rules: dict = field(default_factory=dict)
    commute: list = field(default_factory=list)
    anticommute: list = field(default_factory=list)
    commute_all: bool = False
    regime: str = "state"
    objective: Located | None = None
    task: str = "min"
    level: int | None = None
    constraints: list = field(default_factory=list)
    archimedean: float | bool | None = None
    real_symmetrize: bool | None = None
    solver_options: dict = field(default_factory=dict)

    # semantic layer ------------------------------------------------------------
    def algebra_spec(self, regime: str | None = None) -> AlgebraSpec:
        regime = regime or self.regime
        projections = [v for v, r in self.rules.items() if r[0] == "projection"]
        involutions = [v for v, r in self.rules.items() if r[0] == "involution"]
        commute = "all" if self.commute_all else [(a.text, b.text) for a, b in self.commute]
        anti = [(a.text, b.text) for a, b in self.anticommute]
        try:
            return AlgebraSpec.build(self.variables, projections=projections,
                                     involutions=involutions, commute=commute,
                                     anticommute=anti, regime=regime,
                                     real_symmetrize=self.real_symmetrize)
        except AlgebraError as exc:
            loc = self.anticommute[0][0] if self.anticommute else None
            raise self._semantic(str(exc), loc) from None

    def parse_poly(self, item: Located, spec: AlgebraSpec) -> StatePolynomial:
        try:
            return parse_polynomial(item.text, spec)
        except UnknownVariableError as exc:
            raise self._semantic(f"unknown variable {exc.name!r}",
                                 Located(item.text, item.line, item.column + exc.position))
        except PolynomialSyntaxError as exc:
            raise ProblemSyntaxError(str(exc).rsplit(" at position", 1)[0], item.line,
                                     item.column + exc.position, self.path) from None
        except (AlgebraError, ValueError) as exc:
            raise self._semantic(str(exc), item) from None

    def build(self, regime: str | None = None):
        """``(spec, constraints, objective)`` ready for :func:`assemble_relaxation`."""
        spec = self.algebra_spec(regime)
        objective = self.parse_poly(self.objective, spec)
        constraints = [Constraint(self.parse_poly(c.poly, spec), c.kind)
                       for c in self.constraints]
        return spec, constraints, objective

    def minimal_level(self, objective: StatePolynomial, constraints) -> int:
        """Smallest level that supports the objective and every constraint."""
        need = math.ceil(objective.degree / 2)
        for c in constraints:
            need = max(need, math.ceil(c.poly.degree / 2))
        return need

    def _semantic(self, message: str, loc: Located | None) -> ProblemSemanticError:
        if loc is None:
            return ProblemSemanticError(message, path=self.path)
        return ProblemSemanticError(message, loc.line, loc.column, self.path)


# syntax layer -----------------------------------------------------------------
def _words(body: str, offset: int):
    """Whitespace-separated tokens of ``body`` with 1-based columns."""
    return [(m.group(), offset + m.start() + 1) for m in re.finditer(r"\S+", body)]


def _rest(raw: str, keyword_end: int) -> tuple:
    """Text after the keyword and its 1-based column."""
    body = raw[keyword_end:]
    stripped = body.lstrip()
    col = keyword_end + (len(body) - len(stripped)) + 1
    return stripped.rstrip(), col


class _Reader:
    def __init__(self, text: str, path: str):
        self.text = text
        self.path = path
        self.problem: ProblemFile | None = None
        self.seen: dict = {}

    def error(self, message, line, column) -> ProblemSyntaxError:
        return ProblemSyntaxError(message, line, column, self.path)

    def semantic(self, message, line, column) -> ProblemSemanticError:
        return ProblemSemanticError(message, line, column, self.path)

    def read(self) -> ProblemFile:
        any_directive = False
        for lineno, raw in enumerate(self.text.splitlines(), start=1):
            raw = raw.split("#", 1)[0].rstrip()
            if not raw.strip():
                continue
            any_directive = True
            m = re.match(r"\s*(\S+)", raw)
            keyword, kcol = m.group(1), m.start(1) + 1
            rest, rcol = _rest(raw, m.end(1))
            handler = getattr(self, "on_" + keyword, None)
            if handler is None or keyword.startswith("_"):
                raise self.error(f"unknown directive {keyword!r}", lineno, kcol)
            if self.problem is None and keyword != "variables":
                raise self.error("the first directive must be 'variables'", lineno, kcol)
            single = keyword not in ("projection", "involution", "free", "commute",
                                     "anticommute", "constraint")
            if single and keyword in self.seen:
                raise self.error(f"directive {keyword!r} repeated (first on line "
                                 f"{self.seen[keyword]})", lineno, kcol)
            self.seen.setdefault(keyword, lineno)
            if not rest:
                raise self.error(f"directive {keyword!r} needs an argument", lineno,
                                 len(raw) + 1)
            handler(rest, lineno, rcol)
        if not any_directive:
            raise self.error("empty problem file", 1, 1)
        if self.problem.objective is None:
            raise self.error("missing 'objective' directive", 0, 0)
        return self.problem

    # directives -----------------------------------------------------------------
    def on_variables(self, rest, line, col):
        names = []
        for word, c in _words(rest, col - 1):
            if not _NAME.match(word):
                raise self.error(f"invalid variable name {word!r}", line, c)
            if word in _RESERVED:
                raise self.semantic(f"variable name {word!r} is reserved", line, c)
            if word in names:
                raise self.semantic(f"variable {word!r} declared twice", line, c)
            names.append(word)
        self.problem = ProblemFile(self.path, names)

    def _rule(self, rule, rest, line, col):
        for word, c in _words(rest, col - 1):
            self._known(word, line, c)
            prev = self.problem.rules.get(word)
            if prev is not None and prev[0] != rule:
                raise self.semantic(f"variable {word!r} already declared {prev[0]} on "
                                    f"line {prev[1]}", line, c)
            self.problem.rules[word] = (rule, line)

    def on_projection(self, rest, line, col):
        self._rule("projection", rest, line, col)

    def on_involution(self, rest, line, col):
        self._rule("involution", rest, line, col)

    def on_free(self, rest, line, col):
        self._rule("free", rest, line, col)

    def _known(self, word, line, col):
        if word not in self.problem.variables:
            raise self.semantic(f"unknown variable {word!r}", line, col)

    def _pair(self, rest, line, col):
        words = _words(rest, col - 1)
        if len(words) != 2:
            raise self.error("expected exactly two variable names", line, col)
        for word, c in words:
            self._known(word, line, c)
        (a, ca), (b, cb) = words
        if a == b:
            raise self.semantic("a pair relation needs two different variables", line, cb)
        return Located(a, line, ca), Located(b, line, cb)

    def on_commute(self, rest, line, col):
        if rest == "all":
            self.problem.commute_all = True
            return
        self.problem.commute.append(self._pair(rest, line, col))

    def on_anticommute(self, rest, line, col):
        self.problem.anticommute.append(self._pair(rest, line, col))

    def on_regime(self, rest, line, col):
        if rest not in REGIMES:
            raise self.error(f"regime must be one of {', '.join(REGIMES)}", line, col)
        self.problem.regime = rest

    def on_objective(self, rest, line, col):
        self.problem.objective = Located(rest, line, col)

    def on_task(self, rest, line, col):
        if rest not in ("min", "max"):
            raise self.error("task must be 'min' or 'max'", line, col)
        self.problem.task = rest

    def _int(self, rest, line, col, minimum=0) -> int:
        if not re.fullmatch(r"\d+", rest) or int(rest) < minimum:
            raise self.error(f"expected an integer >= {minimum}", line, col)
        return int(rest)

    def _float(self, rest, line, col) -> float:
        try:
            value = float(rest)
        except ValueError:
            raise self.error(f"expected a number, got {rest!r}", line, col) from None
        if not math.isfinite(value) or value <= 0:
            raise self.error("expected a positive number", line, col)
        return value

    def on_level(self, rest, line, col):
        self.problem.level = self._int(rest, line, col)

    def on_constraint(self, rest, line, col):
        m = re.fullmatch(r"(.*?)\s*(>=|=)\s*0", rest)
        if m is None or not m.group(1).strip():
            raise self.error("expected 'constraint POLY >= 0' or 'constraint POLY = 0'",
                             line, col)
        kind = "psd" if m.group(2) == ">=" else "eq_localizing"
        self.problem.constraints.append(ConstraintEntry(Located(m.group(1), line, col), kind))

    def on_archimedean(self, rest, line, col):
        if rest == "auto":
            self.problem.archimedean = True
        elif rest == "off":
            self.problem.archimedean = None
        else:
            self.problem.archimedean = self._float(rest, line, col)

    def on_real_symmetrize(self, rest, line, col):
        table = {"auto": None, "true": True, "false": False}
        if rest not in table:
            raise self.error("real_symmetrize must be auto, true or false", line, col)
        self.problem.real_symmetrize = table[rest]

    def on_tol(self, rest, line, col):
        value = self._float(rest, line, col)
        self.problem.solver_options.update(tol_gap=value, tol_feas=value)

    def on_tol_gap(self, rest, line, col):
        self.problem.solver_options["tol_gap"] = self._float(rest, line, col)

    def on_tol_feas(self, rest, line, col):
        self.problem.solver_options["tol_feas"] = self._float(rest, line, col)

    def on_max_iter(self, rest, line, col):
        self.problem.solver_options["max_iter"] = self._int(rest, line, col, minimum=1)


def parse_problem_text(text: str, path: str = "<problem>") -> ProblemFile:
    """Parse problem text and check every name and polynomial.

    Raises
    ------
    ProblemSyntaxError
        Malformed directives, bad polynomial text or an empty file.
    ProblemSemanticError
        Unknown variables, inconsistent relations or a relation the regime
        does not allow (such as ``anticommute`` in the moment regime).
    """
    problem = _Reader(text, path).read()
    problem.build()
    return problem


def parse_problem_file(path) -> ProblemFile:
    path = Path(path)
    return parse_problem_text(path.read_text(), str(path))


__all__ = ["ConstraintEntry", "Located", "ProblemError", "ProblemFile",
           "ProblemSemanticError", "ProblemSyntaxError", "REGIMES", "parse_problem_file",
           "parse_problem_text"]
