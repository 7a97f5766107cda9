"""Solver-independent residual checks."""
from __future__ import annotations

import numpy as np

from .cone import ConeProblem


def verify_solution(p: ConeProblem, s) -> dict:
    """Recompute feasibility and objective of a candidate ``y``.

    Parameters
    ----------
    p : ConeProblem
    s : Solution or array_like
        Anything with a ``y`` attribute, or the vector itself.

    Returns
    -------
    dict
        ``min_eigs`` (per block), ``min_eig``, ``eq_residual`` (max abs),
        ``objective`` and, when ``s`` carries a dual objective, ``gap``.
    """
    y = np.asarray(getattr(s, "y", s), dtype=float)
    if y.shape != (p.n_vars,):
        raise ValueError(f"expected {p.n_vars} values, got {y.shape}")
    eigs = [b.min_eig(y) for b in p.blocks]
    if p.n_eq:
        eq = float(np.abs(p.eq_matrix @ y + p.eq_const).max())
    else:
        eq = 0.0
    report = {
        "min_eigs": eigs,
        "min_eig": min(eigs) if eigs else 0.0,
        "eq_residual": eq,
        "objective": p.value(y),
    }
    dual = getattr(s, "dual_objective", None)
    if dual is not None and np.isfinite(dual):
        report["gap"] = abs(report["objective"] - dual)
    return report
