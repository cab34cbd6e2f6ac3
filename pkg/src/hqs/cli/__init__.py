"""Configuration-driven front end: single runs, figure scenarios, validation, ESD reports."""

from .config import SCHEMA_VERSION, OutputSpec, RunConfig, apply_overrides, load_config, parse_number
from .main import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION, main
from .runner import ResultTable, analytic_oracle, resolve_osc_measure, run
from .scenarios import SCENARIOS, run_scenario, scenario
from .validation import CaseResult, ValidationReport, validate_all

__all__ = [
    "EXIT_CONFIG",
    "EXIT_NUMERICAL",
    "EXIT_OK",
    "EXIT_VALIDATION",
    "SCENARIOS",
    "SCHEMA_VERSION",
    "CaseResult",
    "OutputSpec",
    "ResultTable",
    "RunConfig",
    "ValidationReport",
    "analytic_oracle",
    "apply_overrides",
    "load_config",
    "main",
    "parse_number",
    "resolve_osc_measure",
    "run",
    "run_scenario",
    "scenario",
    "validate_all",
]
