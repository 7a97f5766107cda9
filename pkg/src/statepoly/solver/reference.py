"""Cross-check solves with an external modelling package (cvxpy).

cvxpy is an optional dependency; it is imported lazily.
"""
from __future__ import annotations

import numpy as np

from .cone import ConeProblem

PREFERRED = ("CLARABEL", "SCS")


class ReferenceUnavailable(RuntimeError):
    pass


def _cvxpy():
    try:
        import cvxpy
    except ImportError as exc:  # pragma: no cover - depends on environment
        raise ReferenceUnavailable("cvxpy is not installed") from exc
    return cvxpy


def reference_solve(p: ConeProblem, solver: str | None = None, **kwargs):
    """Solve ``p`` with cvxpy; return ``(objective, y, status)``."""
    cp = _cvxpy()
    y = cp.Variable(p.n_vars)
    cons = []
    for blk in p.blocks:
        expr = blk.coeffs @ y + blk.const.ravel()
        if blk.diagonal:
            cons.append(expr >= 0)
        else:
            mat = cp.reshape(expr, (blk.size, blk.size), order="C")
            cons.append((mat + mat.T) / 2 >> 0)
    if p.n_eq:
        cons.append(p.eq_matrix @ y + p.eq_const == 0)
    obj = p.objective @ y + p.constant
    goal = cp.Minimize(obj) if p.task == "min" else cp.Maximize(obj)
    prob = cp.Problem(goal, cons)
    if solver is None:
        installed = cp.installed_solvers()
        solver = next((s for s in PREFERRED if s in installed), None)
    prob.solve(solver=solver, **kwargs)
    value = np.nan if prob.value is None else float(prob.value)
    yv = None if y.value is None else np.asarray(y.value, dtype=float)
    return value, yv, prob.status
