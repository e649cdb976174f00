"""Greedy schedulers: Greedy Insertion, Block Removal and the Iterative Greedy
loop that alternates them, plus the Naive and Comparison baselines.

All of them grow the schedule one task at a time and never accept an
insertion that raises the team makespan.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .evaluator import entry_starts, find_blocking, robot_finishes
from .model import Instance, Schedule, TaskRef

EpsilonPolicy = Union[str, int]


@dataclass(frozen=True)
class GreedyConfig:
    """Knobs for the Iterative Greedy family.

    ``epsilon_policy`` is ``"zero"``, ``"min-beta"`` or a fixed idle-time
    threshold in hundredths.  ``tie_break`` orders equally good candidates;
    the default prefers the lowest robot index, then the lowest task index.
    ``max_iterations`` caps the number of successful improvement steps.
    """

    epsilon_policy: EpsilonPolicy = "zero"
    tie_break: tuple = ("robot", "task")
    max_iterations: Optional[int] = None

    def __post_init__(self):
        eps = self.epsilon_policy
        if isinstance(eps, str):
            if eps not in ("zero", "min-beta"):
                raise ValueError(f"unknown epsilon policy {eps!r}")
        elif isinstance(eps, bool) or not isinstance(eps, int) or eps < 0:
            raise ValueError("fixed epsilon must be a non-negative integer (hundredths)")
        if sorted(self.tie_break) != ["robot", "task"]:
            raise ValueError("tie_break must order 'robot' and 'task'")
        if self.max_iterations is not None and self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")

    def epsilon(self, instance: Instance) -> int:
        if self.epsilon_policy == "zero":
            return 0
        if self.epsilon_policy == "min-beta":
            return instance.min_beta()
        return self.epsilon_policy

    def order_key(self, ref: TaskRef) -> tuple:
        return tuple(ref.robot if f == "robot" else ref.index for f in self.tie_break)


DEFAULT_CONFIG = GreedyConfig()


def _insertion_window(seq, ref) -> tuple:
    """Range of positions where ``ref`` can go without breaking mission order."""
    lo, hi = 0, len(seq)
    for pos, (k, j) in enumerate(seq):
        if k == ref[0]:
            if j < ref[1]:
                lo = pos + 1
            elif hi == len(seq):
                hi = pos
    return lo, hi


def _unscheduled(instance: Instance, seq, robot: int, below: Optional[int] = None):
    taken = {j for k, j in seq if k == robot}
    limit = len(instance.missions[robot]) if below is None else below
    for j, task in enumerate(instance.missions[robot][:limit]):
        if j not in taken and task.beta < task.alpha:
            yield TaskRef(robot, j)


def greedy_insertion_step(instance: Instance, schedule: Schedule,
                          config: GreedyConfig = DEFAULT_CONFIG) -> Schedule:
    """Insert the task that most shortens a makespan robot's own mission.

    Every unscheduled effective task of each makespan robot is tried at every
    position that keeps mission order.  Returns ``schedule`` itself when no
    insertion shortens a makespan robot without raising the makespan.
    """
    seq = schedule.sequence
    fin = robot_finishes(instance, seq)
    mu = max(fin)
    best = None  # (reduction, order key, position)
    for k in range(instance.num_robots):
        if fin[k] != mu:
            continue
        for ref in _unscheduled(instance, seq, k):
            lo, hi = _insertion_window(seq, ref)
            for pos in range(lo, hi + 1):
                cand = seq[:pos] + (ref,) + seq[pos:]
                new = robot_finishes(instance, cand)
                if max(new) > mu:
                    continue
                gain = mu - new[k]
                if gain <= 0:
                    continue
                key = (-gain, config.order_key(ref), pos)
                if best is None or key < best[0]:
                    best = (key, cand)
    if best is None:
        return schedule
    return Schedule(best[1])


def block_removal_step(instance: Instance, schedule: Schedule,
                       config: GreedyConfig = DEFAULT_CONFIG) -> Schedule:
    """Pull a blocking task earlier by teleoperating an earlier task of its robot.

    Blocking tasks are scanned latest start first.  For each, the unscheduled
    effective tasks preceding it in its robot's mission are tried at every
    order-preserving position before it; the first insertion that strictly
    lowers the blocking task's start without raising the makespan wins.
    """
    seq = schedule.sequence
    report = find_blocking(instance, schedule, config.epsilon(instance))
    if not report.blocks:
        return schedule
    mu = max(robot_finishes(instance, seq))
    for block in report.blocks:
        k, j = block.task
        cands = sorted(_unscheduled(instance, seq, k, below=j), key=config.order_key)
        for ref in cands:
            lo, hi = _insertion_window(seq, ref)
            for pos in range(lo, min(hi, block.position) + 1):
                cand = seq[:pos] + (ref,) + seq[pos:]
                if entry_starts(instance, cand[: block.position + 2])[-1] >= block.start:
                    continue
                if max(robot_finishes(instance, cand)) > mu:
                    continue
                return Schedule(cand)
    return schedule


def iterative_greedy_trace(instance: Instance, config: GreedyConfig = DEFAULT_CONFIG,
                           initial: Optional[Schedule] = None) -> tuple:
    """Run Iterative Greedy and return ``(schedule, makespans)``.

    ``makespans`` holds the makespan of the starting schedule followed by the
    makespan after each successful step, so its length minus one is the
    number of insertions made.
    """
    schedule = initial if initial is not None else Schedule()
    schedule.check(instance)
    trace = [max(robot_finishes(instance, schedule.sequence))]
    cap = config.max_iterations
    while cap is None or len(trace) - 1 < cap:
        nxt = greedy_insertion_step(instance, schedule, config)
        if nxt is schedule:
            nxt = block_removal_step(instance, schedule, config)
            if nxt is schedule:
                break
        schedule = nxt
        trace.append(max(robot_finishes(instance, schedule.sequence)))
    return schedule, trace


def iterative_greedy(instance: Instance, config: GreedyConfig = DEFAULT_CONFIG,
                     initial: Optional[Schedule] = None) -> Schedule:
    return iterative_greedy_trace(instance, config, initial)[0]


def greedy_insertion(instance: Instance, config: GreedyConfig = DEFAULT_CONFIG) -> Schedule:
    """Greedy Insertion alone, repeated until it stops improving."""
    schedule = Schedule()
    while True:
        nxt = greedy_insertion_step(instance, schedule, config)
        if nxt is schedule:
            return schedule
        schedule = nxt


def block_removal(instance: Instance, config: GreedyConfig = DEFAULT_CONFIG,
                  initial: Optional[Schedule] = None) -> Schedule:
    """Block Removal alone, repeated until it stops improving."""
    schedule = initial if initial is not None else Schedule()
    while True:
        nxt = block_removal_step(instance, schedule, config)
        if nxt is schedule:
            return schedule
        schedule = nxt


# --- baselines ---------------------------------------------------------------

def _improves(old_fin, new_fin, k) -> bool:
    # Accept when the makespan drops, or stays put while the chosen makespan
    # robot gets faster (needed to make progress when several robots tie).
    mu, new_mu = max(old_fin), max(new_fin)
    return new_mu < mu or (new_mu == mu and new_fin[k] < old_fin[k])


def _robot_state_at(instance: Instance, seq, k: int, t: int):
    """Task of robot k running at time t and its start, or ``(None, None)``.

    Tasks after the last schedule entry run back to back, so this reads the
    robot's timeline from its last teleoperated task onward.
    """
    cum, betas = instance.cum_alpha, instance.betas
    starts = entry_starts(instance, seq)
    j0, t0 = 0, 0
    for (kk, jj), s in zip(seq, starts):
        if kk == k:
            j0, t0 = jj + 1, s + betas[kk][jj]
    alphas = instance.alphas[k]
    for j in range(j0, len(alphas)):
        s = t0 + cum[k][j] - cum[k][j0]
        if s <= t < s + alphas[j] or s >= t:
            return j, s
    return None, None


def _makespan_robot(fin) -> int:
    mu = max(fin)
    return fin.index(mu)


def _op_free(instance: Instance, seq) -> int:
    if not seq:
        return 0
    k, j = seq[-1]
    return entry_starts(instance, seq)[-1] + instance.betas[k][j]


def naive_greedy(instance: Instance) -> Schedule:
    """Teleoperate the makespan robot's next not-yet-started task, repeatedly."""
    seq = ()
    fin = robot_finishes(instance, seq)
    while True:
        k = _makespan_robot(fin)
        t = _op_free(instance, seq)
        j, s = _robot_state_at(instance, seq, k, t)
        if j is None:
            break
        if s < t:  # robot is mid-task; operator waits for the next one
            j += 1
        if j >= len(instance.missions[k]):
            break
        cand = seq + (TaskRef(k, j),)
        new = robot_finishes(instance, cand)
        if not _improves(fin, new, k):
            break
        seq, fin = cand, new
    return Schedule(seq)


def comparison_greedy(instance: Instance) -> Schedule:
    """Like naive greedy, but when the makespan robot is mid-task at the
    operator's free time, also consider having the robot redo the plan so it
    waits for the operator at the start of that task; keep the better option.
    """
    seq = ()
    fin = robot_finishes(instance, seq)
    while True:
        k = _makespan_robot(fin)
        t = _op_free(instance, seq)
        j, s = _robot_state_at(instance, seq, k, t)
        if j is None:
            break
        options = [j] if s >= t else [j, j + 1]
        best = None
        for jj in options:
            if jj >= len(instance.missions[k]):
                continue
            cand = seq + (TaskRef(k, jj),)
            new = robot_finishes(instance, cand)
            key = (max(new), new[k], jj)
            if best is None or key < best[0]:
                best = (key, cand, new)
        if best is None or not _improves(fin, best[2], k):
            break
        seq, fin = best[1], best[2]
    return Schedule(seq)
