"""Response-envelope facade used by the CLI and by embedding callers."""

from .harness_api import HarnessResponse, compile_program_file, run_matrix, run_scenario, stake_for

__all__ = ["HarnessResponse", "compile_program_file", "run_matrix", "run_scenario", "stake_for"]
