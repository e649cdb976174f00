"""Exact minimum-makespan schedules by depth-first branch and bound.

A search node is the state reached after committing a prefix of the operator
sequence: for every robot the next task it has not passed and the time it is
ready for it, and for every operator the time it becomes free.  Children
append one more teleoperated task (any robot's task at or after its pointer;
skipped tasks become autonomous) and every node is also scored as a leaf
("close the schedule here").

Pruning uses two admissible bounds and a dominance table:

* per robot, the best finish reachable if its remaining tasks all took
  ``min(alpha, beta)`` with any further teleoperation starting no earlier than
  the first free operator;
* operator load: to finish below the incumbent each robot must save a given
  amount, and the cheapest operator time buying that saving (fractional
  knapsack on saving/beta) must fit between the operators' free times and the
  incumbent;
* a node whose robots and operators are all no later than those of an already
  expanded node with the same pointers cannot do better and is dropped.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

from .evaluator import evaluate
from .model import Instance, Schedule, TaskRef


@dataclass
class ExactSolution:
    schedule: object  # Schedule, or tuple of Schedule (one per operator)
    makespan: int
    proved_optimal: bool
    nodes_explored: int
    assignments: dict = field(default_factory=dict)  # TaskRef -> operator index
    incumbents: list = field(default_factory=list)  # (nodes_explored, makespan) history


class _TimeUp(Exception):
    pass


class _Search:
    def __init__(self, instance: Instance, operators: int, time_limit: float):
        self.inst = instance
        self.M = operators
        self.K = instance.num_robots
        self.cum = instance.cum_alpha
        self.alphas = instance.alphas
        self.betas = instance.betas
        self.n = instance.lengths
        self.effective = [
            [j for j in range(len(a)) if b[j] < a[j]] for a, b in zip(self.alphas, self.betas)
        ]
        # suffix sums of min(alpha, beta)
        self.smin = []
        for a, b in zip(self.alphas, self.betas):
            acc = [0] * (len(a) + 1)
            for j in range(len(a) - 1, -1, -1):
                acc[j] = acc[j + 1] + min(a[j], b[j])
            self.smin.append(acc)
        # effective tasks by decreasing saving per unit of operator time
        self.by_ratio = [
            sorted(eff, key=lambda j, a=a, b=b: (-(a[j] - b[j]) / b[j], j))
            for eff, a, b in zip(self.effective, self.alphas, self.betas)
        ]
        self.deadline = time.monotonic() + time_limit
        self.nodes = 0
        self.best = instance.autonomous_makespan()
        self.best_path = ()
        self.path = []
        self.incumbents = [(0, self.best)]
        self.seen = {}

    # -- bounds -------------------------------------------------------------

    def robot_bound(self, k, p, r, fmin) -> int:
        cum, a = self.cum[k], self.alphas[k]
        best = r + cum[-1] - cum[p]
        b, smin = self.betas[k], self.smin[k]
        for j in self.effective[k]:
            if j < p:
                continue
            s = r + cum[j] - cum[p]
            if s < fmin:
                s = fmin
            v = s + b[j] + smin[j + 1]
            if v < best:
                best = v
        return best

    def lower_bound(self, ptr, ready, free) -> int:
        fmin = min(free)
        return max(self.robot_bound(k, ptr[k], ready[k], fmin) for k in range(self.K))

    def load_infeasible(self, ptr, ready, free, target) -> bool:
        """True if no completion can reach makespan <= target."""
        capacity = sum(target - f for f in free if f < target)
        need_time = 0.0
        for k in range(self.K):
            cum = self.cum[k]
            need = ready[k] + cum[-1] - cum[ptr[k]] - target
            if need <= 0:
                continue
            a, b = self.alphas[k], self.betas[k]
            for j in self.by_ratio[k]:
                if j < ptr[k]:
                    continue
                gain = a[j] - b[j]
                if gain >= need:
                    need_time += b[j] * need / gain
                    need = 0
                    break
                need -= gain
                need_time += b[j]
            if need > 0:
                return True
            if need_time > capacity + 1e-6:
                return True
        return False

    # -- search -------------------------------------------------------------

    def dominated(self, ptr, ready, free) -> bool:
        key = tuple(ptr)
        fs = tuple(sorted(free))
        entries = self.seen.get(key)
        if entries is None:
            self.seen[key] = [(tuple(ready), fs)]
            return False
        for r2, f2 in entries:
            if all(x <= y for x, y in zip(r2, ready)) and all(x <= y for x, y in zip(f2, fs)):
                return True
        entries[:] = [
            e for e in entries
            if not (all(x <= y for x, y in zip(ready, e[0])) and all(x <= y for x, y in zip(fs, e[1])))
        ]
        entries.append((tuple(ready), fs))
        return False

    def visit(self, ptr, ready, free):
        self.nodes += 1
        if not self.nodes & 255 and time.monotonic() > self.deadline:
            raise _TimeUp
        cum = self.cum
        close = max(ready[k] + cum[k][-1] - cum[k][ptr[k]] for k in range(self.K))
        if close < self.best:
            self.best = close
            self.best_path = tuple(self.path)
            self.incumbents.append((self.nodes, close))
        if self.lower_bound(ptr, ready, free) >= self.best:
            return
        if self.load_infeasible(ptr, ready, free, self.best - 1):
            return
        if self.dominated(ptr, ready, free):
            return

        children = []
        fmin = min(free)
        for k in range(self.K):
            p, r = ptr[k], ready[k]
            ck, bk = cum[k], self.betas[k]
            for j in self.effective[k]:
                if j < p:
                    continue
                arrive = r + ck[j] - ck[p]
                seen_free = set()
                for m in range(self.M):
                    f = free[m]
                    if f in seen_free:
                        continue  # operators free at the same time are interchangeable
                    seen_free.add(f)
                    s = arrive if arrive > f else f
                    fin = s + bk[j]
                    # cheap child bound: this robot's own best completion
                    lb = fin + self.smin[k][j + 1]
                    children.append((lb, s, k, j, m, fin))
        children.sort()
        for lb, s, k, j, m, fin in children:
            if lb >= self.best:
                break
            old_p, old_r, old_f = ptr[k], ready[k], free[m]
            ptr[k], ready[k], free[m] = j + 1, fin, fin
            self.path.append((k, j, m))
            self.visit(ptr, ready, free)
            self.path.pop()
            ptr[k], ready[k], free[m] = old_p, old_r, old_f

    def run(self) -> bool:
        try:
            self.visit([0] * self.K, [0] * self.K, [0] * self.M)
        except _TimeUp:
            return False
        return True


def _solve(instance: Instance, operators: int, time_limit: float) -> ExactSolution:
    if not time_limit > 0:
        raise ValueError("time_limit must be positive")
    search = _Search(instance, operators, time_limit)
    done = search.run()
    per_op = [[] for _ in range(operators)]
    assignments = {}
    for k, j, m in search.best_path:
        per_op[m].append(TaskRef(k, j))
        assignments[TaskRef(k, j)] = m
    schedules = tuple(Schedule(tuple(s)) for s in per_op)
    schedule = schedules[0] if operators == 1 else schedules
    mu = evaluate(instance, schedule).makespan
    assert mu == search.best, (mu, search.best)
    return ExactSolution(schedule, mu, done, search.nodes, assignments, search.incumbents)


def solve_exact(instance: Instance, time_limit: float = 60.0) -> ExactSolution:
    """Optimal single-operator schedule (or best found before ``time_limit`` seconds)."""
    return _solve(instance, 1, time_limit)


def solve_exact_multi(instance: Instance, time_limit: float = 60.0,
                      operators: Optional[int] = None) -> ExactSolution:
    """Optimal schedules for ``instance.operators`` (>= 2) interchangeable operators."""
    m = instance.operators if operators is None else operators
    if m < 2:
        raise ValueError("solve_exact_multi needs at least two operators")
    return _solve(instance, m, time_limit)


def node_lower_bound(instance: Instance, ptr, ready, free) -> int:
    """Pruning bound of a search state; exposed for admissibility tests."""
    return _Search(instance, len(free), math.inf).lower_bound(list(ptr), list(ready), list(free))
