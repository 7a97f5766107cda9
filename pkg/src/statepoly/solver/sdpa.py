"""SDPA sparse (``.dat-s``) export and import.

The exported problem is SDPA's primal form::

    minimize  c @ y   s.t.  sum_k y_k F_k - F_0 >= 0

so ``F_0 = -A0`` and ``F_k = A_k`` for every block.  Equalities become a
diagonal block holding each row twice with opposite signs.  A maximization
is written with a negated objective; the original task and the objective
constant are kept in the leading comment line.
"""
from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .cone import ConeProblem

_HEADER_RE = re.compile(r"objective_constant=(\S+)\s+task=(min|max)")


def _fmt(x: float) -> str:
    x = float(x)
    if x == 0:
        return "0"
    return "%.17g" % x


def sdpa_text(p: ConeProblem) -> str:
    """The ``.dat-s`` file content as a string."""
    if p.n_vars == 0:
        raise ValueError("cannot export a problem without variables")
    sign = 1.0 if p.task == "min" else -1.0
    lines = [f'" objective_constant={_fmt(p.constant)} task={p.task}',
             str(p.n_vars)]
    sizes = []
    entries = []   # (matno, blkno, i, j, value)
    blk_no = 0
    for blk in p.blocks:
        blk_no += 1
        n = blk.size
        coeffs = blk.coeffs.tocoo()
        if blk.diagonal:
            sizes.append(-n)
            for i in range(n):
                if blk.const[i] != 0:
                    entries.append((0, blk_no, i + 1, i + 1, -blk.const[i]))
            for r, k, v in zip(coeffs.row, coeffs.col, coeffs.data):
                if v != 0:
                    entries.append((k + 1, blk_no, r + 1, r + 1, v))
        else:
            sizes.append(n)
            iu, ju = np.nonzero(np.triu(blk.const))
            for i, j in zip(iu, ju):
                entries.append((0, blk_no, i + 1, j + 1, -blk.const[i, j]))
            for r, k, v in zip(coeffs.row, coeffs.col, coeffs.data):
                i, j = divmod(int(r), n)
                if i <= j and v != 0:
                    entries.append((k + 1, blk_no, i + 1, j + 1, v))
    if p.n_eq:
        blk_no += 1
        rows = p.eq_matrix.tocoo()
        sizes.append(-2 * p.n_eq)
        for r in range(p.n_eq):
            e = p.eq_const[r]
            if e != 0:
                entries.append((0, blk_no, 2 * r + 1, 2 * r + 1, -e))
                entries.append((0, blk_no, 2 * r + 2, 2 * r + 2, e))
        for r, k, v in zip(rows.row, rows.col, rows.data):
            if v != 0:
                entries.append((k + 1, blk_no, 2 * r + 1, 2 * r + 1, v))
                entries.append((k + 1, blk_no, 2 * r + 2, 2 * r + 2, -v))
    lines.append(str(len(sizes)))
    lines.append(" ".join(str(s) for s in sizes))
    lines.append(" ".join(_fmt(sign * c) for c in p.objective))
    entries.sort(key=lambda e: e[:4])
    lines.extend(f"{m} {b} {i} {j} {_fmt(v)}" for m, b, i, j, v in entries)
    return "\n".join(lines) + "\n"


def export_sdpa(p: ConeProblem, path) -> Path:
    """Write ``p`` to ``path`` in SDPA sparse format.

    Output is deterministic: entries are sorted and numbers use 17
    significant digits.
    """
    path = Path(path)
    text = sdpa_text(p)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
    return path


def _numbers(line: str):
    return [float(t) for t in re.split(r"[\s,{}()]+", line.strip()) if t]


def read_sdpa(path) -> ConeProblem:
    """Parse an SDPA sparse file into a :class:`ConeProblem`.

    The task and objective constant are restored from the comment header
    when it was written by :func:`export_sdpa`; otherwise the problem is a
    minimization with zero constant.  Equality blocks come back as
    diagonal blocks.
    """
    constant, task = 0.0, "min"
    data = []
    with open(path, encoding="ascii") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line[0] in "*\"":
                m = _HEADER_RE.search(line)
                if m:
                    constant, task = float(m.group(1)), m.group(2)
                continue
            data.append(line)
    m = int(_numbers(data[0])[0])
    n_blocks = int(_numbers(data[1])[0])
    sizes = [int(s) for s in _numbers(data[2])[:n_blocks]]
    c = np.array(_numbers(data[3])[:m])
    sign = 1.0 if task == "min" else -1.0
    p = ConeProblem(m, sign * c, constant, task)
    per_block = [[] for _ in sizes]
    for line in data[4:]:
        mat, blk, i, j, v = _numbers(line)
        per_block[int(blk) - 1].append((int(mat), int(i) - 1, int(j) - 1, v))
    for size, ents in zip(sizes, per_block):
        n = abs(size)
        if size < 0:
            const = np.zeros(n)
            lin = []
            for mat, i, j, v in ents:
                if mat == 0:
                    const[i] = -v
                else:
                    lin.append((mat - 1, i, v))
            p.add_diagonal_block(const, lin)
        else:
            const = np.zeros((n, n))
            lin = []
            for mat, i, j, v in ents:
                i, j = min(i, j), max(i, j)
                if mat == 0:
                    const[i, j] = const[j, i] = -v
                else:
                    lin.append((mat - 1, i, j, v))
            p.add_psd_block(const, lin)
    return p


def read_vector(path) -> np.ndarray:
    """Whitespace-separated numbers, e.g. an external solver's ``y``."""
    with open(path) as fh:
        return np.array([float(t) for t in fh.read().split()])


def write_vector(y, path) -> None:
    with open(path, "w") as fh:
        fh.write("\n".join(_fmt(v) for v in np.asarray(y, dtype=float)) + "\n")


__all__ = ["export_sdpa", "read_sdpa", "read_vector", "sdpa_text", "write_vector"]
