"""Generators, a brute-force value counter, and the property suites."""
from .brute import brute_count_values, brute_values
from .generate import GenConfig, gen_program, gen_type, gen_well_typed_config, materialize
from .suites import SUITES, Report, check_theorem, run_suites

__all__ = [
    "brute_count_values", "brute_values",
    "GenConfig", "gen_program", "gen_type", "gen_well_typed_config", "materialize",
    "SUITES", "Report", "check_theorem", "run_suites",
]
