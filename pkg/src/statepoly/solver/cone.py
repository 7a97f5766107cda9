"""Conic problem container.

A :class:`ConeProblem` over real variables ``y`` reads::

    minimize (or maximize)  c @ y + constant
    subject to              A0_b + sum_k y_k A_kb  >= 0   for every block b
                            E @ y + e = 0

Blocks are symmetric PSD blocks or diagonal (LP) blocks.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

STATUSES = ("optimal", "primal_infeasible", "dual_infeasible", "max_iter",
            "numerical_failure")


@dataclass
class Block:
    """One cone block of the affine map.

    ``coeffs`` has one column per variable.  For PSD blocks the rows index
    the full ``size x size`` matrix in row-major order; for diagonal blocks
    they index the diagonal.
    """

    size: int
    const: np.ndarray
    coeffs: sp.csc_matrix
    diagonal: bool = False
    label: str = ""

    def value(self, y) -> np.ndarray:
        flat = self.const.ravel() + self.coeffs @ np.asarray(y, dtype=float)
        if self.diagonal:
            return flat
        return flat.reshape(self.size, self.size)

    def min_eig(self, y) -> float:
        v = self.value(y)
        if self.diagonal:
            return float(v.min()) if v.size else 0.0
        return float(np.linalg.eigvalsh((v + v.T) / 2)[0])

    @property
    def upper_entries(self) -> int:
        return self.size if self.diagonal else self.size * (self.size + 1) // 2


@dataclass
class ConeProblem:
    n_vars: int
    objective: np.ndarray
    constant: float = 0.0
    task: str = "min"
    blocks: list = field(default_factory=list)
    eq_matrix: sp.csr_matrix | None = None
    eq_const: np.ndarray | None = None
    var_labels: list | None = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float).reshape(-1)
        if self.objective.shape != (self.n_vars,):
            raise ValueError("objective length must equal the number of variables")
        if self.task not in ("min", "max"):
            raise ValueError(f"task must be 'min' or 'max', got {self.task!r}")
        if self.eq_matrix is None:
            self.eq_matrix = sp.csr_matrix((0, self.n_vars))
            self.eq_const = np.zeros(0)

    # construction --------------------------------------------------------
    def add_psd_block(self, const, entries=(), label: str = "") -> Block:
        """Append a PSD block.

        Parameters
        ----------
        const : (n, n) array_like
            Symmetric constant matrix.
        entries : iterable of (var, i, j, value)
            Upper-triangle coefficients; ``(i, j)`` and ``(j, i)`` both
            receive ``value``.
        """
        const = np.array(const, dtype=float)
        n = const.shape[0]
        if const.shape != (n, n):
            raise ValueError("constant of a PSD block must be square")
        if np.abs(const - const.T).max(initial=0.0) > 1e-12:
            raise ValueError("constant of a PSD block must be symmetric")
        rows, cols, vals = [], [], []
        for k, i, j, v in entries:
            if not (0 <= k < self.n_vars and 0 <= i < n and 0 <= j < n):
                raise ValueError(f"entry ({k}, {i}, {j}) out of range")
            if v == 0:
                continue
            rows.append(i * n + j)
            cols.append(k)
            vals.append(float(v))
            if i != j:
                rows.append(j * n + i)
                cols.append(k)
                vals.append(float(v))
        coeffs = sp.csc_matrix((vals, (rows, cols)), shape=(n * n, self.n_vars))
        coeffs.sum_duplicates()
        block = Block(n, const, coeffs, False, label)
        self.blocks.append(block)
        return block

    def add_diagonal_block(self, const, entries=(), label: str = "") -> Block:
        """Append an LP block ``const + sum y_k a_k >= 0`` elementwise.

        ``entries`` holds ``(var, i, value)`` triples.
        """
        const = np.array(const, dtype=float).reshape(-1)
        n = const.size
        rows, cols, vals = [], [], []
        for k, i, v in entries:
            if not (0 <= k < self.n_vars and 0 <= i < n):
                raise ValueError(f"entry ({k}, {i}) out of range")
            rows.append(i)
            cols.append(k)
            vals.append(float(v))
        coeffs = sp.csc_matrix((vals, (rows, cols)), shape=(n, self.n_vars))
        coeffs.sum_duplicates()
        block = Block(n, const, coeffs, True, label)
        self.blocks.append(block)
        return block

    def add_equalities(self, matrix, const) -> None:
        """Append rows ``matrix @ y + const = 0``."""
        matrix = sp.csr_matrix(matrix, dtype=float)
        const = np.asarray(const, dtype=float).reshape(-1)
        if matrix.shape[1] != self.n_vars or matrix.shape[0] != const.size:
            raise ValueError("equality dimensions are inconsistent")
        self.eq_matrix = sp.vstack([self.eq_matrix, matrix], format="csr")
        self.eq_const = np.concatenate([self.eq_const, const])

    # queries -------------------------------------------------------------
    @property
    def n_eq(self) -> int:
        return self.eq_matrix.shape[0]

    def value(self, y) -> float:
        return float(self.objective @ np.asarray(y, dtype=float) + self.constant)

    def scaled(self, factor: float) -> "ConeProblem":
        """Copy with the objective (and constant) multiplied by ``factor``."""
        out = ConeProblem(self.n_vars, self.objective * factor, self.constant * factor,
                          self.task, list(self.blocks), self.eq_matrix.copy(),
                          self.eq_const.copy(), self.var_labels)
        return out


@dataclass
class Solution:
    y: np.ndarray
    status: str
    objective: float
    dual_objective: float = float("nan")
    residuals: dict = field(default_factory=dict)
    iterations: int = 0
    dual_blocks: list = field(default_factory=list, repr=False)
    eq_multipliers: np.ndarray | None = field(default=None, repr=False)
    message: str = ""

    def to_bytes(self) -> bytes:
        """Canonical byte string, used to compare runs."""
        parts = [self.status.encode(), np.float64(self.objective).tobytes(),
                 np.asarray(self.y, dtype=np.float64).tobytes()]
        for key in sorted(self.residuals):
            parts.append(key.encode() + np.float64(self.residuals[key]).tobytes())
        return b"|".join(parts)
