"""Existence checks for self-dual quantum codes ((n, 1, delta)).

Shows the Krawtchouk kernel, the MacWilliams transform on the five-qubit
ring code, the Delsarte linear program and the Lovasz theta test on the
confusability graph.  Pass ``--full`` to also run the 189-vertex theta SDP
that rules out ((4,1,3)) (a few minutes on one core).
"""
import sys
import time

import numpy as np

from statepoly.apps import (code_theta_check, confusability_graph, delsarte_feasible,
                            enumerators_oracle, krawtchouk_matrix, macwilliams,
                            ring_code_projector)


def main(full=False):
    print("Krawtchouk kernel, n = 3:")
    for row in krawtchouk_matrix(3):
        print("  ", row)

    enum = enumerators_oracle(ring_code_projector(5))
    print("\nfive-qubit ring code")
    print("  A =", np.round(enum.A, 9).tolist())
    print("  B =", np.round(enum.B, 9).tolist())
    print("  MacWilliams(A) =", np.round(np.array(macwilliams(enum.A).B, dtype=float), 9).tolist())

    print("\nDelsarte LP")
    for n, delta in [(1, 1), (1, 2), (4, 3), (5, 3)]:
        res = delsarte_feasible(n, delta)
        point = np.round(res.point, 6).tolist() if res.point else None
        print(f"  (({n},1,{delta})): {'feasible' if res.feasible else 'infeasible'} {point or ''}")

    print("\nconfusability graphs")
    for n, delta in [(1, 1), (2, 2), (3, 2), (4, 3)]:
        g = confusability_graph(n, delta)
        print(f"  (({n},1,{delta})): {g.n_vertices} vertices, {len(g.loops)} looped, "
              f"{g.pruned().n_vertices} after pruning")

    print("\ntheta test 2^n <= theta + 1")
    cases = [(1, 1), (3, 2), (5, 3)] + ([(4, 3)] if full else [])
    for n, delta in cases:
        start = time.perf_counter()
        res = code_theta_check(n, delta)
        value = "n/a" if res.value is None else f"{res.value:.6f}"
        print(f"  (({n},1,{delta})): {res.status} via {res.method}, value {value} "
              f"({time.perf_counter() - start:.1f} s)")


if __name__ == "__main__":
    main("--full" in sys.argv[1:])
