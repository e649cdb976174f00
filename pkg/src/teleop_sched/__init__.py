"""Operator teleoperation scheduling for multi-robot teams."""
from .evaluator import BlockingReport, Timeline, evaluate, find_blocking, makespan
from .exact import ExactSolution, solve_exact, solve_exact_multi
from .greedy import (
    GreedyConfig,
    block_removal_step,
    comparison_greedy,
    greedy_insertion,
    greedy_insertion_step,
    iterative_greedy,
    naive_greedy,
)
from .lp import decode_solution, emit_lp
from .model import (
    Instance,
    InvalidSchedule,
    Schedule,
    Task,
    TaskRef,
    format_fixed,
    generate_instance,
    load_instance,
    save_instance,
)
from .reduction import ReductionParams, SatFormula, reduce, sat_brute_force, verify_reduction

__all__ = [
    "BlockingReport", "ExactSolution", "GreedyConfig", "Instance", "InvalidSchedule",
    "ReductionParams", "SatFormula", "Schedule", "Task", "TaskRef", "Timeline",
    "block_removal_step", "comparison_greedy", "decode_solution", "emit_lp", "evaluate",
    "find_blocking", "format_fixed", "generate_instance", "greedy_insertion",
    "greedy_insertion_step", "iterative_greedy", "load_instance", "makespan", "naive_greedy",
    "reduce", "sat_brute_force", "save_instance", "solve_exact", "solve_exact_multi",
    "verify_reduction",
]
