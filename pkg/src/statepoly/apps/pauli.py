"""Pauli operators in binary symplectic form with phases mod 4."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _LETTERS.items()}
_PHASE_TEXT = {0: "", 1: "i", 2: "-", 3: "-i"}
_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _letter_phase(x1, z1, x2, z2) -> int:
    """Exponent ``g`` with ``P1 P2 = i^g P3`` for single-qubit letters."""
    if (x1, z1) == (0, 0) or (x2, z2) == (0, 0) or (x1, z1) == (x2, z2):
        return 0
    order = ["X", "Y", "Z"]
    a = order.index(_LETTERS[(x1, z1)])
    b = order.index(_LETTERS[(x2, z2)])
    return 1 if (b - a) % 3 == 1 else 3


@dataclass(frozen=True)
class PauliOperator:
    """``i^phase`` times a tensor product of I, X, Y, Z.

    Qubit ``k`` carries X if ``x_bits[k]`` alone is set, Z if ``z_bits[k]``
    alone is set and Y if both are.
    """

    n: int
    phase: int
    x_bits: tuple
    z_bits: tuple

    def __post_init__(self):
        x = tuple(int(b) & 1 for b in self.x_bits)
        z = tuple(int(b) & 1 for b in self.z_bits)
        if len(x) != self.n or len(z) != self.n:
            raise ValueError("bit vectors must have length n")
        object.__setattr__(self, "x_bits", x)
        object.__setattr__(self, "z_bits", z)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @classmethod
    def from_label(cls, label: str) -> "PauliOperator":
        """Parse strings such as ``"XIZ"``, ``"-iYY"`` or ``"iZ"``."""
        phase = 0
        body = label.strip()
        if body.startswith("-"):
            phase += 2
            body = body[1:]
        if body.startswith("i"):
            phase += 1
            body = body[1:]
        if not body or any(ch not in "IXYZ" for ch in body):
            raise ValueError(f"invalid Pauli label {label!r}")
        bits = [_BITS[ch] for ch in body]
        return cls(len(bits), phase, tuple(b[0] for b in bits), tuple(b[1] for b in bits))

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, 0, (0,) * n, (0,) * n)

    @property
    def letters(self) -> str:
        return "".join(_LETTERS[(x, z)] for x, z in zip(self.x_bits, self.z_bits))

    @property
    def label(self) -> str:
        return _PHASE_TEXT[self.phase] + self.letters

    def __str__(self):
        return self.label

    @property
    def weight(self) -> int:
        return sum(1 for x, z in zip(self.x_bits, self.z_bits) if x or z)

    @property
    def is_identity(self) -> bool:
        return self.phase == 0 and self.weight == 0

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    def symplectic_form(self, other: "PauliOperator") -> int:
        """``x.z' + z.x' mod 2``; zero exactly when the operators commute."""
        _check_same_size(self, other)
        return sum(a & d ^ b & c for a, b, c, d in
                   zip(self.x_bits, self.z_bits, other.x_bits, other.z_bits)) % 2

    def commutes(self, other: "PauliOperator") -> bool:
        return self.symplectic_form(other) == 0

    def unsigned(self) -> "PauliOperator":
        return PauliOperator(self.n, 0, self.x_bits, self.z_bits)

    def adjoint(self) -> "PauliOperator":
        return PauliOperator(self.n, -self.phase, self.x_bits, self.z_bits)

    def matrix(self) -> np.ndarray:
        mats = [_MATRICES[ch] for ch in self.letters]
        out = reduce(np.kron, mats) if mats else np.eye(1, dtype=complex)
        return (1j ** self.phase) * out

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return pauli_mul(self, other)

    @property
    def index(self) -> int:
        """Position in :func:`all_paulis` order (phase ignored)."""
        order = "IXYZ"
        out = 0
        for ch in self.letters:
            out = out * 4 + order.index(ch)
        return out


def _check_same_size(a: PauliOperator, b: PauliOperator):
    if a.n != b.n:
        raise ValueError(f"Pauli operators act on {a.n} and {b.n} qubits")


def pauli_mul(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Product ``a b`` with the phase tracked mod 4 (``X Y = i Z``)."""
    _check_same_size(a, b)
    phase = a.phase + b.phase
    for x1, z1, x2, z2 in zip(a.x_bits, a.z_bits, b.x_bits, b.z_bits):
        phase += _letter_phase(x1, z1, x2, z2)
    x = tuple(p ^ q for p, q in zip(a.x_bits, b.x_bits))
    z = tuple(p ^ q for p, q in zip(a.z_bits, b.z_bits))
    return PauliOperator(a.n, phase, x, z)


def all_paulis(n: int) -> list:
    """The ``4^n`` hermitian Pauli strings, identity first, base-4 order over IXYZ."""
    return [PauliOperator.from_label("".join(t)) for t in itertools.product("IXYZ", repeat=n)]


def symplectic_matrix(paulis) -> np.ndarray:
    """``(len, 2n)`` 0/1 array of ``[x | z]`` rows."""
    return np.array([list(p.x_bits) + list(p.z_bits) for p in paulis], dtype=np.uint8)


__all__ = ["PauliOperator", "all_paulis", "pauli_mul", "symplectic_matrix"]
