"""Bound one polynomial under three notions of "state".

The objective is ``1/2 <xyxy> + 1/2 <yxyx> - <xyx><y>`` over pairs of
projections.  Under general states its minimum is -1/16, under tracial
states -1/27, and for commuting variables 0.  This script prints the
relaxation value per level and evaluates the explicit minimizers.

Run with ``python3 demos/comparative_regimes.py [max_level]``.
"""
import sys
import time

import numpy as np

from statepoly.algebra import AlgebraSpec, StateModel, evaluate, parse_polynomial
from statepoly.hierarchy import assemble_relaxation

OBJECTIVE = "1/2*s(x*y*x*y) + 1/2*s(y*x*y*x) - s(x*y*x)*s(y)"
TARGETS = {"state": -1 / 16, "trace": -1 / 27, "moment": 0.0}
TOP_LEVEL = {"state": 5, "trace": 4, "moment": 3}


def minimizers():
    x = np.diag([1.0, 0.0])
    y = 0.5 * np.ones((2, 2))
    v = 0.5 * np.array([np.sqrt(2 - np.sqrt(2)), -np.sqrt(2 + np.sqrt(2))])
    r2 = np.sqrt(2.0)
    y3 = np.array([[1, r2, 0], [r2, 2, 0], [0, 0, 3]]) / 3
    return {"state": StateModel((x, y), v),
            "trace": StateModel.normalized_trace((np.diag([1.0, 0, 0]), y3))}


def main(max_level=None):
    models = minimizers()
    for regime, target in TARGETS.items():
        spec = AlgebraSpec.build("x y", projections="x y", regime=regime)
        f = parse_polynomial(OBJECTIVE, spec)
        print(f"{regime} regime (optimum {target:+.6f})")
        if regime in models:
            print(f"  value at explicit minimizer: {evaluate(f, models[regime]).real:+.12f}")
        top = TOP_LEVEL[regime] if max_level is None else min(max_level, TOP_LEVEL[regime])
        for level in range(2, top + 1):
            start = time.perf_counter()
            relax = assemble_relaxation(spec, [], f, level)
            res = relax.solve()
            sizes = [pc.size for pc in relax.pencils]
            print(f"  level {level}: {res.bound:+.10f}  [{res.status}, {relax.n_vars} moments, "
                  f"Hankel {sizes[0]}, {time.perf_counter() - start:.1f} s]")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else None)
