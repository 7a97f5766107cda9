"""Cross-check a relaxation with an external solver through SDPA files.

The level-3 trace relaxation is exported, solved by cvxpy when it is
installed, and both moment vectors are checked by ``verify_solution``,
which only recomputes eigenvalues and residuals.
"""
import tempfile
from pathlib import Path

from statepoly.algebra import AlgebraSpec, parse_polynomial
from statepoly.hierarchy import assemble_relaxation
from statepoly.solver import export_sdpa, read_sdpa, solve, verify_solution


def main():
    spec = AlgebraSpec.build("x y", projections="x y", regime="trace")
    f = parse_polynomial("1/2*s(x*y*x*y) + 1/2*s(y*x*y*x) - s(x*y*x)*s(y)", spec)
    cone = assemble_relaxation(spec, [], f, 3).to_cone()
    path = export_sdpa(cone, Path(tempfile.mkdtemp()) / "trace_level3.dat-s")
    print(f"exported {cone.n_vars} variables to {path}")

    ours = solve(cone)
    report = verify_solution(cone, ours)
    print(f"internal: {ours.objective:+.10f}  min eig {report['min_eig']:.1e}  "
          f"gap {report['gap']:.1e}")
    try:
        from statepoly.solver.reference import reference_solve
        value, y, status = reference_solve(read_sdpa(path))
    except ImportError:
        print("cvxpy is not installed; skipping the external solve")
        return
    report = verify_solution(cone, y)
    print(f"external: {value:+.10f}  min eig {report['min_eig']:.1e}  [{status}]")


if __name__ == "__main__":
    main()
