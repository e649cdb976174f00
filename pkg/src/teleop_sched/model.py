"""Domain types for operator-assisted multi-robot missions.

All durations and times are stored as integers counting hundredths of a time
unit, so ``Task(alpha=1500, beta=1200)`` is a task taking 15.00 units
autonomously and 12.00 units under teleoperation.  Keeping everything in
fixed point makes timing ties exact.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

SCALE = 100


class InstanceParseError(ValueError):
    """Raised when instance text is not well-formed JSON."""

    def __init__(self, msg: str, line: int, column: int):
        super().__init__(f"{msg} (line {line}, column {column})")
        self.line = line
        self.column = column


class InstanceValidationError(ValueError):
    """Raised when a parsed instance violates a domain invariant."""

    def __init__(self, msg: str, field: str):
        super().__init__(f"{field}: {msg}")
        self.field = field


class InvalidSchedule(ValueError):
    pass


def to_fixed(value) -> int:
    """Convert a duration in time units (str, Decimal, int or float) to hundredths.

    Values with more than two fractional digits are rejected.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a duration: {value!r}")
    if isinstance(value, float):
        value = repr(value)
    try:
        d = Decimal(value) * SCALE
    except (InvalidOperation, TypeError):
        raise ValueError(f"not a duration: {value!r}") from None
    if not d.is_finite() or d != d.to_integral_value():
        raise ValueError(f"duration {value!r} needs at most two decimal places")
    return int(d)


def format_fixed(value: int) -> str:
    """Render hundredths as a decimal string with exactly two fractional digits."""
    sign = "-" if value < 0 else ""
    q, r = divmod(abs(value), SCALE)
    return f"{sign}{q}.{r:02d}"


@dataclass(frozen=True)
class Task:
    alpha: int  # autonomous duration, hundredths
    beta: int  # teleoperated duration, hundredths

    def __post_init__(self):
        if not isinstance(self.alpha, int) or not isinstance(self.beta, int):
            raise TypeError("task durations are integer hundredths; use Task.of() for units")
        if self.alpha <= 0:
            raise InstanceValidationError("must be positive", "alpha")
        if self.beta <= 0:
            raise InstanceValidationError("must be positive", "beta")

    @classmethod
    def of(cls, alpha, beta) -> "Task":
        """Build a task from durations given in time units, e.g. ``Task.of(15, 12.5)``."""
        return cls(to_fixed(alpha), to_fixed(beta))

    @property
    def saving(self) -> int:
        return self.alpha - self.beta

    @property
    def effective(self) -> bool:
        """True when teleoperating the task can shorten it."""
        return self.beta < self.alpha


Mission = tuple  # tuple[Task, ...]


class TaskRef(NamedTuple):
    """Task ``index`` of robot ``robot``; both zero-based."""

    robot: int
    index: int

    def label(self) -> str:
        return f"e{self.robot + 1}_{self.index + 1}"


@dataclass(frozen=True)
class Instance:
    missions: tuple
    operators: int = 1

    def __post_init__(self):
        missions = tuple(tuple(m) for m in self.missions)
        object.__setattr__(self, "missions", missions)
        if not missions:
            raise InstanceValidationError("at least one robot required", "robots")
        for k, mission in enumerate(missions):
            if not mission:
                raise InstanceValidationError("mission is empty", f"robots[{k}]")
            for j, task in enumerate(mission):
                if not isinstance(task, Task):
                    raise TypeError(f"robots[{k}][{j}] is not a Task")
        if not isinstance(self.operators, int) or self.operators < 1:
            raise InstanceValidationError("must be an integer >= 1", "operators")

    @classmethod
    def from_durations(cls, missions: Iterable[Iterable[tuple]], operators: int = 1) -> "Instance":
        """Build from nested ``(alpha, beta)`` pairs in time units."""
        return cls(tuple(tuple(Task.of(a, b) for a, b in m) for m in missions), operators)

    def with_operators(self, operators: int) -> "Instance":
        return Instance(self.missions, operators)

    @property
    def num_robots(self) -> int:
        return len(self.missions)

    @property
    def num_tasks(self) -> int:
        return sum(len(m) for m in self.missions)

    @property
    def lengths(self) -> tuple:
        return tuple(len(m) for m in self.missions)

    def task(self, ref: TaskRef) -> Task:
        return self.missions[ref.robot][ref.index]

    def refs(self):
        for k, mission in enumerate(self.missions):
            for j in range(len(mission)):
                yield TaskRef(k, j)

    # Flat lookup tables used by the hot loops in the evaluator and solvers.
    @cached_property
    def alphas(self) -> tuple:
        return tuple(tuple(t.alpha for t in m) for m in self.missions)

    @cached_property
    def betas(self) -> tuple:
        return tuple(tuple(t.beta for t in m) for m in self.missions)

    @cached_property
    def cum_alpha(self) -> tuple:
        """``cum_alpha[k][j]`` is the autonomous time of tasks ``0..j-1`` of robot k."""
        out = []
        for m in self.missions:
            acc = [0]
            for t in m:
                acc.append(acc[-1] + t.alpha)
            out.append(tuple(acc))
        return tuple(out)

    def autonomous_makespan(self) -> int:
        return max(c[-1] for c in self.cum_alpha)

    def min_beta(self) -> int:
        return min(t.beta for m in self.missions for t in m)


@dataclass(frozen=True)
class Schedule:
    """Ordered sequence of tasks the operator teleoperates.

    Construction checks the instance-independent invariants (no duplicates,
    mission order kept per robot).  Range checks need the instance and happen
    in :func:`teleop_sched.evaluator.evaluate`.
    """

    sequence: tuple = field(default=())

    def __post_init__(self):
        seq = tuple(TaskRef(*r) for r in self.sequence)
        object.__setattr__(self, "sequence", seq)
        last: dict = {}
        for ref in seq:
            prev = last.get(ref.robot)
            if prev is not None and ref.index <= prev:
                what = "duplicate" if ref.index == prev else "out of mission order"
                raise InvalidSchedule(f"{ref.label()} is {what}")
            last[ref.robot] = ref.index

    def __len__(self):
        return len(self.sequence)

    def __iter__(self):
        return iter(self.sequence)

    def __contains__(self, ref):
        return ref in self.sequence

    def insert(self, position: int, ref: TaskRef) -> "Schedule":
        seq = self.sequence
        return Schedule(seq[:position] + (TaskRef(*ref),) + seq[position:])

    def labels(self) -> str:
        return "<" + ", ".join(r.label() for r in self.sequence) + ">"

    def check(self, instance: Instance) -> None:
        for ref in self.sequence:
            if not (0 <= ref.robot < instance.num_robots) or not (
                0 <= ref.index < len(instance.missions[ref.robot])
            ):
                raise InvalidSchedule(f"{ref} is outside the instance")


# --- random instances -------------------------------------------------------

def generate_instance(robots: int, tasks_per_robot: int, seed: int) -> Instance:
    """Sample an instance: ``beta ~ U[10, 20]``, ``alpha = beta + U[0, 10]``.

    Both samples are rounded to two decimals before they are added, so
    ``alpha - beta`` is exactly the rounded second sample.  Uses numpy's PCG64
    generator, which is reproducible across platforms.
    """
    if robots < 1:
        raise ValueError("robots must be >= 1")
    if tasks_per_robot < 1:
        raise ValueError("tasks_per_robot must be >= 1")
    rng = np.random.default_rng(seed)
    beta = np.rint(rng.uniform(10.0, 20.0, size=(robots, tasks_per_robot)) * SCALE).astype(np.int64)
    delta = np.rint(rng.uniform(0.0, 10.0, size=(robots, tasks_per_robot)) * SCALE).astype(np.int64)
    alpha = beta + delta
    return Instance(
        tuple(
            tuple(Task(int(alpha[k, j]), int(beta[k, j])) for j in range(tasks_per_robot))
            for k in range(robots)
        )
    )


# --- serialization ----------------------------------------------------------

def save_instance(instance: Instance) -> str:
    doc = {
        "operators": instance.operators,
        "robots": [
            [{"alpha": format_fixed(t.alpha), "beta": format_fixed(t.beta)} for t in m]
            for m in instance.missions
        ],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_instance(text: str) -> Instance:
    try:
        doc = json.loads(text, parse_float=Decimal, parse_int=Decimal)
    except json.JSONDecodeError as e:
        raise InstanceParseError(e.msg, e.lineno, e.colno) from None

    if not isinstance(doc, dict):
        raise InstanceValidationError("top level must be an object", "instance")
    unknown = set(doc) - {"operators", "robots"}
    if unknown:
        raise InstanceValidationError(f"unknown keys {sorted(unknown)}", "instance")

    operators = doc.get("operators", Decimal(1))
    if not isinstance(operators, Decimal) or operators != operators.to_integral_value() or operators < 1:
        raise InstanceValidationError("must be an integer >= 1", "operators")

    robots = doc.get("robots")
    if not isinstance(robots, list) or not robots:
        raise InstanceValidationError("must be a non-empty array", "robots")

    missions = []
    for k, mission in enumerate(robots):
        if not isinstance(mission, list) or not mission:
            raise InstanceValidationError("mission must be a non-empty array", f"robots[{k}]")
        tasks = []
        for j, obj in enumerate(mission):
            where = f"robots[{k}][{j}]"
            if not isinstance(obj, dict) or set(obj) != {"alpha", "beta"}:
                raise InstanceValidationError("task needs exactly 'alpha' and 'beta'", where)
            durations = []
            for name in ("alpha", "beta"):
                raw = obj[name]
                if not isinstance(raw, (str, Decimal)):
                    raise InstanceValidationError("must be a number or decimal string", f"{where}.{name}")
                try:
                    v = to_fixed(raw)
                except ValueError as e:
                    raise InstanceValidationError(str(e), f"{where}.{name}") from None
                if v <= 0:
                    raise InstanceValidationError("must be positive", f"{where}.{name}")
                durations.append(v)
            tasks.append(Task(*durations))
        missions.append(tuple(tasks))
    return Instance(tuple(missions), int(operators))


def schedule_from_labels(labels: Sequence[str]) -> Schedule:
    """Parse ``["e1_1", "e2_1"]`` (one-based) into a schedule."""
    refs = []
    for lab in labels:
        k, j = lab.lstrip("e").split("_")
        refs.append(TaskRef(int(k) - 1, int(j) - 1))
    return Schedule(tuple(refs))
