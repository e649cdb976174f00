"""Command line: ``teleop-sched {generate,solve,bench,reduce}``.

Exit codes: 0 success, 1 usage or input error, 2 solver failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from . import bench
from .evaluator import evaluate
from .greedy import GreedyConfig
from .lp import emit_lp
from .model import (
    InstanceParseError,
    InstanceValidationError,
    format_fixed,
    generate_instance,
    load_instance,
    save_instance,
    to_fixed,
)
from .reduction import FormulaError, ReductionParams, parse_dimacs, reduce, verify_reduction


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _epsilon(text):
    if text in ("0", "zero"):
        return "zero"
    if text == "min-beta":
        return "min-beta"
    try:
        v = to_fixed(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected 0, min-beta or a non-negative number") from None
    if v < 0:
        raise argparse.ArgumentTypeError("epsilon must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="teleop-sched", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write random instances")
    g.add_argument("-K", "--robots", type=_positive, required=True)
    g.add_argument("-N", "--tasks", type=_positive, required=True)
    g.add_argument("--count", type=_positive, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--operators", type=_positive, default=1)
    g.add_argument("-o", "--out", default=".")

    s = sub.add_parser("solve", help="solve one instance file")
    s.add_argument("instance")
    s.add_argument("--solver", default="iterative-greedy")
    s.add_argument("--time-limit", type=float, default=60.0)
    s.add_argument("--epsilon", type=_epsilon, default="zero")
    s.add_argument("--operators", type=_positive)
    s.add_argument("--timeline", help="write the timeline CSV here")
    s.add_argument("--emit-lp", help="write the MILP in LP format here")
    s.add_argument("--format", choices=("text", "json"), default="text")

    b = sub.add_parser("bench", help="run solvers over seeded random instances")
    b.add_argument("-K", "--robots", type=_positive, required=True)
    b.add_argument("-N", "--tasks", type=_positive, required=True)
    b.add_argument("--count", type=_positive, default=100)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--solvers", default=",".join(bench.BenchmarkConfig.solvers),
                   help="comma separated solver names")
    b.add_argument("--with-exact", action="store_true")
    b.add_argument("--exact-max-tasks", type=_positive, default=24)
    b.add_argument("--time-limit", type=float, default=60.0)
    b.add_argument("--epsilon", type=_epsilon, default="zero")
    b.add_argument("--jobs", type=_positive, default=1)
    b.add_argument("--format", choices=("csv", "json"), default="csv")
    b.add_argument("-o", "--out", help="write per-instance rows here (default stdout)")

    r = sub.add_parser("reduce", help="reduce a 2p1n formula (DIMACS) to an instance")
    r.add_argument("formula")
    r.add_argument("--z", type=_positive, default=100)
    r.add_argument("--dz", type=_positive, default=1)
    r.add_argument("-o", "--out", help="write the instance here")
    r.add_argument("--verify", action="store_true")
    r.add_argument("--time-limit", type=float, default=60.0)
    return p


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise UsageError(str(e)) from None


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        raise UsageError(str(e)) from None


def cmd_generate(args) -> int:
    try:
        os.makedirs(args.out, exist_ok=True)
    except OSError as e:
        raise UsageError(f"cannot create {args.out}: {e}") from None
    for seed in range(args.seed, args.seed + args.count):
        inst = generate_instance(args.robots, args.tasks, seed).with_operators(args.operators)
        path = os.path.join(args.out, f"instance_K{args.robots}_N{args.tasks}_s{seed}.json")
        _write(path, save_instance(inst))
    print(f"wrote {args.count} instance(s) to {args.out}")
    return 0


def cmd_solve(args) -> int:
    try:
        inst = load_instance(_read(args.instance))
    except (InstanceParseError, InstanceValidationError) as e:
        raise UsageError(f"{args.instance}: {e}") from None
    if args.operators:
        inst = inst.with_operators(args.operators)
    if args.solver not in bench.SOLVERS:
        raise UsageError(f"unknown solver {args.solver!r}; choose from {', '.join(bench.SOLVERS)}")
    if args.emit_lp:
        _write(args.emit_lp, emit_lp(inst))
    try:
        res = bench.run_solver(inst, args.solver, GreedyConfig(epsilon_policy=args.epsilon), args.time_limit)
    except Exception as e:  # noqa: BLE001 - any solver fault maps to exit code 2
        print(f"solver {args.solver} failed: {e}", file=sys.stderr)
        return 2
    timeline = evaluate(inst, res.schedule)
    if args.timeline:
        _write(args.timeline, timeline.to_csv())

    per_op = (res.schedule,) if inst.operators == 1 else res.schedule
    if args.format == "json":
        print(json.dumps({
            "solver": args.solver,
            "makespan": format_fixed(res.makespan),
            "schedule": [[r.label() for r in s] for s in per_op],
            "wall_ms": round(res.wall_ms, 3),
            "steps": res.steps,
            "proved_optimal": res.proved_optimal,
        }, indent=2))
    else:
        for m, s in enumerate(per_op):
            prefix = "schedule" if len(per_op) == 1 else f"operator {m + 1}"
            print(f"{prefix}: {s.labels()}")
        print(f"makespan: {format_fixed(res.makespan)}")
        if res.proved_optimal is not None:
            print(f"optimal: {'proved' if res.proved_optimal else 'not proved (time limit hit; best incumbent)'}")
        print(f"wall time: {res.wall_ms:.1f} ms")
    return 0


def cmd_bench(args) -> int:
    solvers = tuple(s.strip() for s in args.solvers.split(",") if s.strip())
    try:
        cfg = bench.BenchmarkConfig(
            robots=args.robots, tasks_per_robot=args.tasks, count=args.count, seed=args.seed,
            solvers=solvers, with_exact=args.with_exact, exact_max_tasks=args.exact_max_tasks,
            time_limit=args.time_limit, epsilon=args.epsilon, jobs=args.jobs,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None
    try:
        run = bench.run_benchmark(cfg)
    except Exception as e:  # noqa: BLE001
        print(f"benchmark failed: {e}", file=sys.stderr)
        return 2
    text = run.to_csv() if args.format == "csv" else run.to_json()
    if args.out:
        _write(args.out, text)
        print(run.summary_text())
    else:
        sys.stdout.write(text)
        print(run.summary_text(), file=sys.stderr)
    return 0


def cmd_reduce(args) -> int:
    try:
        formula = parse_dimacs(_read(args.formula))
        params = ReductionParams(args.z, args.dz)
        inst, target = reduce(formula, params)
    except FormulaError as e:
        raise UsageError(f"{args.formula}: {e}") from None
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.out:
        _write(args.out, save_instance(inst))
    print(f"robots: {inst.num_robots}  tasks: {inst.num_tasks}  target: {format_fixed(target)}")
    if args.verify:
        t0 = time.perf_counter()
        try:
            rep = verify_reduction(formula, params, args.time_limit)
        except (TimeoutError, ValueError) as e:
            print(f"verification failed: {e}", file=sys.stderr)
            return 2
        print(rep.summary() + f" ({(time.perf_counter() - t0) * 1000:.0f} ms)")
        if not rep.consistent:
            return 2
    return 0


COMMANDS = {"generate": cmd_generate, "solve": cmd_solve, "bench": cmd_bench, "reduce": cmd_reduce}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"teleop-sched: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
