"""Lower bounds for permutation combinations over product projections.

A real combination ``w`` of permutations of n tensor factors becomes a
trace polynomial in n projections; a non-negative relaxation value marks
``w`` as a dimension-free witness candidate.
"""
from statepoly.apps import Permutation, werner_bound, werner_polynomial

P = Permutation.parse

COMBINATIONS = {
    "(1 2)": [(1.0, P("(1 2)"))],
    "-(1 2)": [(-1.0, P("(1 2)"))],
    "() - (1 2)": [(1.0, P("()", 2)), (-1.0, P("(1 2)"))],
    "() - (1 2 3)": [(1.0, P("()", 3)), (-1.0, P("(1 2 3)"))],
    "(1 2) + (1 3) + (2 3) - (1 2 3)": [(1.0, P("(1 2)", 3)), (1.0, P("(1 3)")),
                                        (1.0, P("(2 3)")), (-1.0, P("(1 2 3)"))],
}


def main():
    for label, w in COMBINATIONS.items():
        poly = werner_polynomial(w)
        first = (w[0][1].degree + 1) // 2
        bounds = "   ".join(f"level {d}: {werner_bound(w, d):+.6f}" for d in (first, first + 1))
        print(f"{label:34s} -> {poly}")
        print(f"{'':34s}    {bounds}")


if __name__ == "__main__":
    main()
