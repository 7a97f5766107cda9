"""Index sets for moment matrices."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra import AlgebraSpec, StateMonomial, canonicalize_word
from ..algebra.polynomial import UNIT

DEFAULT_MAX_SIZE = 20000


class CapacityError(RuntimeError):
    """A combinatorial object would exceed the configured size cap."""


def canonical_words(spec: AlgebraSpec, max_len: int, context: str = "plain",
                    max_size: int = DEFAULT_MAX_SIZE) -> list[list[tuple]]:
    """Canonical nonzero words grouped by length ``0..max_len``.

    Normal forms are prefix closed, so words of length k are found by
    extending those of length k - 1 by one letter.
    """
    plain = [[()]]
    count = 1
    for k in range(1, max_len + 1):
        found = set()
        for w in plain[-1]:
            for a in range(spec.n_vars):
                sw = canonicalize_word(spec, w + (a,), "plain")
                if sw.sign and len(sw.word) == k:
                    found.add(sw.word)
        count += len(found)
        if count > max_size:
            raise CapacityError(
                f"more than {max_size} canonical words of length <= {max_len}")
        plain.append(sorted(found))
    if context == "plain":
        return plain
    out = [[()]]
    for k in range(1, max_len + 1):
        found = set()
        for w in plain[k]:
            sw = canonicalize_word(spec, w, "under_sigma")
            if sw.sign and len(sw.word) == k:
                found.add(sw.word)
        out.append(sorted(found))
    return out


def _multisets(atoms, budget, start=0):
    """Nondecreasing index sequences over ``atoms`` with total length <= budget."""
    yield ()
    for k in range(start, len(atoms)):
        size = len(atoms[k])
        if size > budget:
            continue
        for rest in _multisets(atoms, budget - size, k):
            yield (atoms[k],) + rest


@dataclass
class Basis:
    """Ordered list of state monomials with reverse lookup."""

    monomials: list
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {m: k for k, m in enumerate(self.monomials)}

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def __getitem__(self, k):
        return self.monomials[k]

    def __contains__(self, m):
        return m in self.index

    def truncate(self, degree: int) -> "Basis":
        return Basis([m for m in self.monomials if m.degree <= degree])

    @property
    def max_degree(self) -> int:
        return max(m.degree for m in self.monomials)


def generate_basis(spec: AlgebraSpec, d: int,
                   max_size: int = DEFAULT_MAX_SIZE) -> Basis:
    """All canonical state monomials of total degree at most ``d``.

    Sorted by (degree, lex) with the unit first.
    """
    if d < 0:
        raise ValueError("level must be non-negative")
    outer = canonical_words(spec, d, "plain", max_size)
    atoms_by_len = canonical_words(spec, d, "under_sigma", max_size)
    atoms = [w for group in atoms_by_len[1:] for w in group]
    monos = []
    for length in range(d + 1):
        sigma_parts = list(_multisets(atoms, d - length))
        for w in outer[length]:
            for sigma in sigma_parts:
                monos.append(StateMonomial(tuple(sigma), w))
                if len(monos) > max_size:
                    raise CapacityError(
                        f"basis of level {d} exceeds {max_size} monomials")
    monos.sort(key=StateMonomial.sort_key)
    assert monos[0] == UNIT
    return Basis(monos)
