"""Lifting separation-logic implications with assertion variables to relational interpretations."""

from ._liftsl import (
    ParseError,
    ShapeError,
    chk,
    demo,
    exec_command,
    find_counter_env,
    lift,
    lift_counts,
    lift_file,
    normalize,
    pretty,
    run_scenario,
    scenario_names,
    scenario_text,
)

__all__ = [
    "ParseError",
    "ShapeError",
    "chk",
    "demo",
    "exec_command",
    "find_counter_env",
    "lift",
    "lift_counts",
    "lift_file",
    "normalize",
    "pretty",
    "run_scenario",
    "scenario_names",
    "scenario_text",
]
