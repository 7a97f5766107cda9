"""Command-line front end (``spo``)."""
from .main import build_parser, main, parse_combination, run
from .problem import (ProblemError, ProblemFile, ProblemSemanticError, ProblemSyntaxError,
                      parse_problem_file, parse_problem_text)
from .report import Report, emit_report, exit_code_for, load_schema, report_json, report_text

__all__ = ["ProblemError", "ProblemFile", "ProblemSemanticError", "ProblemSyntaxError",
           "Report", "build_parser", "emit_report", "exit_code_for", "load_schema", "main",
           "parse_combination", "parse_problem_file", "parse_problem_text", "report_json",
           "report_text", "run"]
