import runpy
import sys
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parents[1] / "demos"


@pytest.mark.parametrize("script, argv", [
    ("comparative_regimes.py", ["3"]),
    ("uncertainty_graphs.py", []),
    ("code_bounds.py", []),
    ("werner_witness.py", []),
    ("export_and_verify.py", []),
])
def test_demo_runs(script, argv, monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", [script] + argv)
    runpy.run_path(str(DEMOS / script), run_name="__main__")
    assert capsys.readouterr().out.strip()
