"""Timing simulation of a teleoperation schedule.

Every task starts as early as its robot and (if teleoperated) its operator
allow.  The operator serves its schedule strictly in order; a robot reaching a
scheduled task waits for the operator and the operator waits for a robot that
has not arrived yet.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

from .model import Instance, InvalidSchedule, Schedule, TaskRef, format_fixed


class Interval(NamedTuple):
    task: TaskRef
    start: int
    finish: int


class IdleGap(NamedTuple):
    operator: int
    after: int  # position of the entry preceding the gap, -1 before the first entry
    start: int
    length: int
    task: TaskRef  # entry that follows the gap


class Block(NamedTuple):
    task: TaskRef
    robot: int
    gap: int
    start: int
    position: int  # index of the blocking task in the schedule


@dataclass(frozen=True)
class BlockingReport:
    blocks: tuple
    epsilon: float

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)


@dataclass(frozen=True)
class Timeline:
    start: dict
    finish: dict
    teleoperated: dict  # TaskRef -> operator index, only for teleoperated tasks
    operator_busy: tuple  # per operator, tuple of Interval in service order
    idle_gaps: tuple
    robot_finish: tuple
    makespan: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "robot", "index", "operator", "teleoperated", "start", "finish"])
        for ref in sorted(self.start):
            op = self.teleoperated.get(ref)
            w.writerow(["task", ref.robot, ref.index, "" if op is None else op,
                        int(op is not None), format_fixed(self.start[ref]), format_fixed(self.finish[ref])])
        for m, busy in enumerate(self.operator_busy):
            for iv in busy:
                w.writerow(["operator", iv.task.robot, iv.task.index, m, 1,
                            format_fixed(iv.start), format_fixed(iv.finish)])
        return buf.getvalue()


ScheduleLike = Union[Schedule, Sequence[Schedule]]


def _per_operator(schedule: ScheduleLike) -> tuple:
    if isinstance(schedule, Schedule):
        return (schedule,)
    return tuple(schedule)


def evaluate(instance: Instance, schedule: ScheduleLike) -> Timeline:
    """Simulate ``schedule`` on ``instance``.

    ``schedule`` is a single :class:`Schedule` (one operator) or a sequence
    with one schedule per operator.  Each task is touched once, so the cost
    is linear in the number of tasks.
    """
    schedules = _per_operator(schedule)
    if not schedules:
        raise InvalidSchedule("need at least one operator schedule")
    owner = {}
    for m, s in enumerate(schedules):
        s.check(instance)
        for pos, ref in enumerate(s.sequence):
            if ref in owner:
                raise InvalidSchedule(f"{ref.label()} assigned to more than one operator")
            owner[ref] = (m, pos)

    alphas, betas = instance.alphas, instance.betas
    K, M = instance.num_robots, len(schedules)
    ptr = [0] * K
    ready = [0] * K
    op_pos = [0] * M
    op_free = [0] * M
    start, finish, teleop = {}, {}, {}
    busy = [[] for _ in range(M)]

    def advance(k):
        # run robot k autonomously up to its next teleoperated task
        mission = alphas[k]
        j, t = ptr[k], ready[k]
        while j < len(mission):
            ref = TaskRef(k, j)
            if ref in owner:
                break
            start[ref] = t
            t += mission[j]
            finish[ref] = t
            j += 1
        ptr[k], ready[k] = j, t

    work = list(range(K))
    while work:
        k = work.pop()
        advance(k)
        j = ptr[k]
        if j == len(alphas[k]):
            continue
        ref = TaskRef(k, j)
        m, pos = owner[ref]
        if op_pos[m] != pos:
            continue  # operator m still has earlier entries to serve
        s = max(ready[k], op_free[m])
        f = s + betas[k][j]
        start[ref], finish[ref], teleop[ref] = s, f, m
        busy[m].append(Interval(ref, s, f))
        ptr[k], ready[k] = j + 1, f
        op_pos[m] += 1
        op_free[m] = f
        work.append(k)
        if op_pos[m] < len(schedules[m].sequence):
            nxt = schedules[m].sequence[op_pos[m]].robot
            if nxt != k:
                work.append(nxt)

    if any(ptr[k] != len(alphas[k]) for k in range(K)):
        raise InvalidSchedule("operator schedules wait on each other (cyclic order)")

    gaps = []
    for m, ivs in enumerate(busy):
        prev_end = 0
        for pos, iv in enumerate(ivs):
            if iv.start > prev_end:
                gaps.append(IdleGap(m, pos - 1, prev_end, iv.start - prev_end, iv.task))
            prev_end = iv.finish

    return Timeline(
        start=start,
        finish=finish,
        teleoperated=teleop,
        operator_busy=tuple(tuple(b) for b in busy),
        idle_gaps=tuple(gaps),
        robot_finish=tuple(ready),
        makespan=max(ready),
    )


def makespan(instance: Instance, schedule: ScheduleLike) -> int:
    return evaluate(instance, schedule).makespan


def find_blocking(instance: Instance, schedule: Schedule, epsilon: float = 0) -> BlockingReport:
    """Schedule entries preceded by more than ``epsilon`` of operator idle time.

    The first entry counts as blocking when it starts later than ``epsilon``.
    Blocks are ordered by start time, latest first.
    """
    if epsilon < 0 or (isinstance(epsilon, float) and math.isnan(epsilon)):
        raise ValueError("epsilon must be >= 0")
    schedule.check(instance)
    starts = entry_starts(instance, schedule.sequence)
    betas = instance.betas
    blocks = []
    prev_end = 0
    for pos, (ref, s) in enumerate(zip(schedule.sequence, starts)):
        if s - prev_end > epsilon:
            blocks.append(Block(ref, ref.robot, s - prev_end, s, pos))
        prev_end = s + betas[ref.robot][ref.index]
    blocks.sort(key=lambda b: (-b.start, b.position))
    return BlockingReport(tuple(blocks), epsilon)


# --- fast paths for the solvers (single operator, no validation) ------------

def robot_finishes(instance: Instance, seq) -> list:
    """Mission finish time per robot; O(len(seq) + K) via prefix sums."""
    cum, betas = instance.cum_alpha, instance.betas
    K = len(cum)
    ready = [0] * K
    ptr = [0] * K
    op = 0
    for k, j in seq:
        r = ready[k] + cum[k][j] - cum[k][ptr[k]]
        if op > r:
            r = op
        op = r + betas[k][j]
        ready[k] = op
        ptr[k] = j + 1
    return [ready[k] + cum[k][-1] - cum[k][ptr[k]] for k in range(K)]


def entry_starts(instance: Instance, seq) -> list:
    """Start time of each schedule entry, in schedule order."""
    cum, betas = instance.cum_alpha, instance.betas
    ready = [0] * len(cum)
    ptr = [0] * len(cum)
    op = 0
    out = []
    for k, j in seq:
        r = ready[k] + cum[k][j] - cum[k][ptr[k]]
        if op > r:
            r = op
        out.append(r)
        op = r + betas[k][j]
        ready[k] = op
        ptr[k] = j + 1
    return out
