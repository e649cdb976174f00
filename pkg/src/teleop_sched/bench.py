"""Experiment harness: run solvers over seeded random instances and summarise."""
from __future__ import annotations

import csv
import io
import json
import logging
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

from .evaluator import makespan
from .exact import solve_exact, solve_exact_multi
from .greedy import (
    GreedyConfig,
    block_removal,
    comparison_greedy,
    greedy_insertion,
    iterative_greedy_trace,
    naive_greedy,
)
from .model import Instance, Schedule, format_fixed, generate_instance

log = logging.getLogger(__name__)

CSV_COLUMNS = ["seed", "solver", "K", "N", "makespan", "optimal_makespan", "ratio", "wall_ms", "steps"]
WITHIN = 1.05


@dataclass
class SolverResult:
    schedule: object
    makespan: int
    steps: int
    wall_ms: float
    proved_optimal: Optional[bool] = None


def _iterative(instance, config, time_limit):
    schedule, trace = iterative_greedy_trace(instance, config)
    return schedule, len(trace) - 1, None


def _seeded(base: Callable) -> Callable:
    # seed with a baseline schedule, then improve it with the Iterative Greedy loop
    def run(instance, config, time_limit):
        start = base(instance)
        schedule, trace = iterative_greedy_trace(instance, config, start)
        return schedule, len(start) + len(trace) - 1, None
    return run


def _plain(fn: Callable, takes_config: bool = False) -> Callable:
    def run(instance, config, time_limit):
        s = fn(instance, config) if takes_config else fn(instance)
        return s, len(s), None
    return run


def _exact(instance, config, time_limit):
    if instance.operators > 1:
        sol = solve_exact_multi(instance, time_limit)
    else:
        sol = solve_exact(instance, time_limit)
    return sol.schedule, sol.nodes_explored, sol.proved_optimal


def _no_teleop(instance, config, time_limit):
    empty = Schedule()
    return (empty if instance.operators == 1 else (empty,) * instance.operators), 0, None


def _single_operator(fn: Callable) -> Callable:
    def run(instance, config, time_limit):
        if instance.operators != 1:
            raise ValueError("greedy solvers handle a single operator only; use 'exact'")
        return fn(instance, config, time_limit)
    return run


SOLVERS = {
    "iterative-greedy": _single_operator(_iterative),
    "greedy-insertion": _single_operator(_plain(greedy_insertion, takes_config=True)),
    "block-removal": _single_operator(_plain(block_removal, takes_config=True)),
    "naive-greedy": _single_operator(_plain(naive_greedy)),
    "comparison-greedy": _single_operator(_plain(comparison_greedy)),
    "naive+iterative": _single_operator(_seeded(naive_greedy)),
    "comparison+iterative": _single_operator(_seeded(comparison_greedy)),
    "no-teleop": _no_teleop,
    "exact": _exact,
}


def run_solver(instance: Instance, name: str, config: GreedyConfig = GreedyConfig(),
               time_limit: float = 60.0) -> SolverResult:
    try:
        fn = SOLVERS[name]
    except KeyError:
        raise ValueError(f"unknown solver {name!r}; choose from {', '.join(SOLVERS)}") from None
    t0 = time.perf_counter()
    schedule, steps, optimal = fn(instance, config, time_limit)
    wall = (time.perf_counter() - t0) * 1000
    return SolverResult(schedule, makespan(instance, schedule), steps, wall, optimal)


@dataclass
class BenchmarkConfig:
    robots: int
    tasks_per_robot: int
    count: int = 100
    seed: int = 0
    solvers: tuple = ("iterative-greedy", "greedy-insertion", "comparison-greedy", "naive-greedy",
                      "naive+iterative", "comparison+iterative")
    with_exact: bool = False
    exact_max_tasks: int = 24
    time_limit: float = 60.0
    epsilon: object = "zero"
    jobs: int = 1

    def __post_init__(self):
        if self.robots < 1 or self.tasks_per_robot < 1 or self.count < 1:
            raise ValueError("robots, tasks_per_robot and count must be >= 1")
        for s in self.solvers:
            if s not in SOLVERS:
                raise ValueError(f"unknown solver {s!r}")


@dataclass
class BenchmarkRun:
    config: BenchmarkConfig
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    exact_skipped: bool = False

    def to_csv(self, with_wall: bool = True) -> str:
        cols = CSV_COLUMNS if with_wall else [c for c in CSV_COLUMNS if c != "wall_ms"]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in self.rows:
            w.writerow(r)
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"config": asdict(self.config), "rows": self.rows, "summary": self.summary},
                          indent=2, sort_keys=True, default=str)

    def summary_text(self) -> str:
        c = self.config
        lines = [f"K={c.robots} N={c.tasks_per_robot} instances={c.count} seeds={c.seed}..{c.seed + c.count - 1}"]
        ref = "optimal" if any(r["optimal_makespan"] != "" for r in self.rows) else "iterative-greedy"
        lines.append(f"ratio denominator: {ref}")
        for name, s in self.summary.items():
            line = f"  {name:22s} mean makespan {s['mean_makespan']:9.2f}  mean ratio {s['mean_ratio']:.4f}"
            if s.get("within_5pct") is not None:
                line += f"  within 5%: {s['within_5pct']:.2f}"
            lines.append(line)
        if "no-teleop" in self.summary and ref == "optimal":
            lines.append(f"  no-teleoperation excess over optimal: {100 * self.summary['no-teleop']['mean_ratio'] - 100:.2f}%")
        if self.exact_skipped:
            lines.append("  exact skipped (instance larger than --exact-max-tasks)")
        return "\n".join(lines)


def _run_seed(args) -> list:
    config, seed, solvers = args
    instance = generate_instance(config.robots, config.tasks_per_robot, seed)
    gcfg = GreedyConfig(epsilon_policy=config.epsilon)
    out = []
    for name in solvers:
        res = run_solver(instance, name, gcfg, config.time_limit)
        out.append((name, res.makespan, res.wall_ms, res.steps, res.proved_optimal))
    return out


def summarize(rows: list) -> dict:
    """Per-solver aggregates; recomputable from the rows alone."""
    by_solver: dict = {}
    for r in rows:
        by_solver.setdefault(r["solver"], []).append(r)
    out = {}
    for name, rs in by_solver.items():
        ratios = [float(r["ratio"]) for r in rs]
        entry = {
            "n": len(rs),
            "mean_makespan": statistics.mean(float(r["makespan"]) for r in rs),
            "mean_ratio": statistics.mean(ratios),
            "within_5pct": None,
        }
        if all(r["optimal_makespan"] != "" for r in rs):
            entry["within_5pct"] = sum(x <= WITHIN + 1e-12 for x in ratios) / len(ratios)
        out[name] = entry
    return out


def run_benchmark(config: BenchmarkConfig) -> BenchmarkRun:
    solvers = list(dict.fromkeys(config.solvers))
    if "iterative-greedy" not in solvers:
        solvers.insert(0, "iterative-greedy")
    run = BenchmarkRun(config)
    if config.with_exact:
        if config.robots * config.tasks_per_robot > config.exact_max_tasks:
            log.warning("skipping exact: %d tasks exceeds --exact-max-tasks %d",
                        config.robots * config.tasks_per_robot, config.exact_max_tasks)
            run.exact_skipped = True
        else:
            solvers += ["exact", "no-teleop"]
    seeds = list(range(config.seed, config.seed + config.count))
    jobs = [(config, s, tuple(solvers)) for s in seeds]
    if config.jobs > 1:
        with ProcessPoolExecutor(config.jobs) as pool:
            results = list(pool.map(_run_seed, jobs))  # map keeps seed order
    else:
        results = [_run_seed(j) for j in jobs]

    for seed, res in zip(seeds, results):
        by_name = {name: mk for name, mk, *_ in res}
        opt = by_name.get("exact")
        denom = opt if opt is not None else by_name["iterative-greedy"]
        for name, mk, wall, steps, proved in res:
            run.rows.append({
                "seed": seed,
                "solver": name,
                "K": config.robots,
                "N": config.tasks_per_robot,
                "makespan": format_fixed(mk),
                "optimal_makespan": "" if opt is None else format_fixed(opt),
                "ratio": f"{mk / denom:.6f}",
                "wall_ms": f"{wall:.3f}",
                "steps": steps,
            })
            if name == "exact" and proved is False:
                log.warning("seed %d: exact solver hit the time limit; optimum not proved", seed)
    run.summary = summarize(run.rows)
    return run
