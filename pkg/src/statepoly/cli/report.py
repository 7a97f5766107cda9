"""Run reports and their text/JSON renderings."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

SCHEMA_ID = "statepoly.report/1"

EXIT_OK = 0
EXIT_SYNTAX = 2
EXIT_SEMANTIC = 3
EXIT_NEGATIVE = 4
EXIT_FAILURE = 5

_EXIT_BY_STATUS = {
    "optimal": EXIT_OK,
    "feasible": EXIT_OK,
    "not_excluded": EXIT_OK,
    "exported": EXIT_OK,
    "primal_infeasible": EXIT_NEGATIVE,
    "dual_infeasible": EXIT_NEGATIVE,
    "infeasible": EXIT_NEGATIVE,
    "excluded": EXIT_NEGATIVE,
}


def exit_code_for(status: str) -> int:
    """0 for an answer, 4 for a certified negative answer, 5 otherwise."""
    return _EXIT_BY_STATUS.get(status, EXIT_FAILURE)


def _plain(value):
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats to None."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


@dataclass
class Report:
    """Outcome of one CLI command.

    ``bound`` is set only when ``status`` is ``optimal``.
    """

    command: str
    status: str
    bound: float | None = None
    level: int | None = None
    task: str | None = None
    regime: str | None = None
    n_moment_vars: int | None = None
    pencil_sizes: list = field(default_factory=list)
    wall_time: float | None = None
    timestamp: str | None = None
    residuals: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)
    message: str = ""

    def __post_init__(self):
        if self.status != "optimal":
            self.bound = None

    @property
    def exit_code(self) -> int:
        return exit_code_for(self.status)

    @property
    def gap(self) -> float | None:
        for key in ("gap", "rel_gap"):
            if key in self.residuals:
                return self.residuals[key]
        return None

    def to_dict(self, timestamps: bool = True) -> dict:
        out = {
            "schema": SCHEMA_ID,
            "command": self.command,
            "status": self.status,
            "bound": self.bound,
            "level": self.level,
            "task": self.task,
            "regime": self.regime,
            "n_moment_vars": self.n_moment_vars,
            "pencil_sizes": list(self.pencil_sizes),
            "residuals": dict(self.residuals),
            "artifacts": dict(self.artifacts),
            "detail": dict(self.detail),
            "message": self.message,
        }
        if timestamps:
            out["wall_time"] = self.wall_time
            out["timestamp"] = self.timestamp
        return _plain(out)


def report_json(r: Report, timestamps: bool = True) -> str:
    """Deterministic JSON text (sorted keys, trailing newline)."""
    return json.dumps(r.to_dict(timestamps), sort_keys=True, indent=2) + "\n"


def _fmt(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def report_text(r: Report, timestamps: bool = True) -> str:
    rows = [("command", r.command), ("status", r.status), ("level", _fmt(r.level)),
            ("bound", _fmt(r.bound)), ("gap", _fmt(r.gap))]
    if r.task:
        rows.append(("task", r.task))
    if r.regime:
        rows.append(("regime", r.regime))
    if r.n_moment_vars is not None:
        rows.append(("moment variables", str(r.n_moment_vars)))
    if r.pencil_sizes:
        rows.append(("pencil sizes", " ".join(map(str, r.pencil_sizes))))
    for key in sorted(r.residuals):
        if key not in ("gap",):
            rows.append((key, _fmt(r.residuals[key])))
    for key in sorted(r.detail):
        rows.append((key, _fmt(r.detail[key])))
    for key in sorted(r.artifacts):
        rows.append((f"artifact {key}", str(r.artifacts[key])))
    if timestamps and r.wall_time is not None:
        rows.append(("wall time", f"{r.wall_time:.3f} s"))
    if r.message:
        rows.append(("message", r.message))
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in rows)


def emit_report(r: Report, fmt: str = "text", stream=None, path=None,
                timestamps: bool = True) -> str:
    """Render ``r`` as ``text`` or ``json``; write to ``stream`` and/or ``path``."""
    if fmt == "text":
        out = report_text(r, timestamps)
    elif fmt == "json":
        out = report_json(r, timestamps)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if stream is not None:
        stream.write(out)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(out)
    return out


def load_schema(name: str = "report") -> dict:
    """Bundled JSON schema (``report`` or ``relaxation``)."""
    text = resources.files("statepoly.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


__all__ = ["EXIT_FAILURE", "EXIT_NEGATIVE", "EXIT_OK", "EXIT_SEMANTIC", "EXIT_SYNTAX",
           "Report", "SCHEMA_ID", "emit_report", "exit_code_for", "load_schema",
           "report_json", "report_text"]
