"""Uncertainty relations for observables with prescribed anticommutation.

Vertices are +-1 valued observables and edges mark anticommuting pairs.  The
largest possible ``sum_i <A_i>^2`` lies between the independence number and
the Lovasz theta number of the graph; the hierarchy narrows the gap.
"""
from statepoly.apps import (Graph, independence_number, lovasz_theta, odd_holes,
                            uncertainty_bound)

GRAPHS = {
    "triangle": Graph.complete(3),
    "path P4": Graph.path(4),
    "pentagon": Graph.cycle(5),
    "hexagon": Graph.cycle(6),
    "pentagon + pendant": Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5)]),
}


def main():
    print(f"{'graph':20s} {'alpha':>6s} {'level 1':>9s} {'level 2':>9s} {'cuts':>9s} {'theta':>9s}")
    for name, g in GRAPHS.items():
        holes = odd_holes(g)
        row = [independence_number(g), uncertainty_bound(g, 1), uncertainty_bound(g, 2),
               uncertainty_bound(g, 1, holes=holes) if holes else float("nan"), lovasz_theta(g)]
        print(f"{name:20s} {row[0]:6d} " + " ".join(f"{v:9.5f}" for v in row[1:]))


if __name__ == "__main__":
    main()
