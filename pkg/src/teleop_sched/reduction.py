"""2p1n-3SAT to Min-Makespan: the gadget construction behind the hardness result.

In a 2p1n formula every variable occurs exactly twice as a positive literal
and once negated.  With exactly three literals per clause there are ``v``
clauses and such a formula is always satisfiable (the clause/variable
incidence graph is 3-regular bipartite, hence has a perfect matching), so
clauses of one to three literals are accepted too; those can be
unsatisfiable.  Each clause becomes one robot; its mission has one segment per variable (in
ascending variable order) with autonomous length ``2z``:

* first positive occurrence:  ``(z, z - dz)`` then ``(z, z)``
* second positive occurrence: ``(z, z)`` then ``(z, z - dz)``
* negated occurrence:         ``(2z, 2z - dz)``
* variable absent:            ``(2z, 2z)``

The formula is satisfiable iff some schedule reaches makespan ``2zv - dz``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional

from .exact import solve_exact
from .model import Instance, Task


class FormulaError(ValueError):
    def __init__(self, msg: str, variable: Optional[int] = None, line: Optional[int] = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(msg + where)
        self.variable = variable
        self.line = line


@dataclass(frozen=True)
class SatFormula:
    num_vars: int
    clauses: tuple  # tuples of 1-3 non-zero ints, DIMACS-style literals

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for i, c in enumerate(self.clauses):
            if not 1 <= len(c) <= 3:
                raise FormulaError(f"clause {i + 1} has {len(c)} literals, expected 1 to 3")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise FormulaError(f"clause {i + 1}: literal {lit} out of range", variable=abs(lit))
            seen = [abs(lit) for lit in c]
            if len(set(seen)) != len(seen):
                dup = next(x for x in seen if seen.count(x) > 1)
                raise FormulaError(f"clause {i + 1} repeats variable {dup}", variable=dup)

    @property
    def is_3cnf(self) -> bool:
        return all(len(c) == 3 for c in self.clauses)

    def check_2p1n(self) -> None:
        pos = [0] * (self.num_vars + 1)
        neg = [0] * (self.num_vars + 1)
        for c in self.clauses:
            for lit in c:
                (pos if lit > 0 else neg)[abs(lit)] += 1
        for x in range(1, self.num_vars + 1):
            if pos[x] != 2 or neg[x] != 1:
                raise FormulaError(
                    f"variable {x} occurs {pos[x]}x positive and {neg[x]}x negated; 2p1n needs 2 and 1",
                    variable=x,
                )

    def is_satisfied(self, assignment) -> bool:
        """``assignment[x]`` is the truth value of variable x (index 0 unused)."""
        return all(any((lit > 0) == bool(assignment[abs(lit)]) for lit in c) for c in self.clauses)


@dataclass(frozen=True)
class ReductionParams:
    z: int = 100
    delta_z: int = 1

    def __post_init__(self):
        if self.z <= 0 or self.delta_z <= 0:
            raise ValueError("z and delta_z must be positive integers")
        if 10 * self.delta_z > self.z:
            raise ValueError("delta_z must be at most z/10")


def parse_dimacs(text: str) -> SatFormula:
    num_vars = num_clauses = None
    clauses, current = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith(("c", "%")):
            continue
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise FormulaError("duplicate header", line=lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormulaError(f"bad header {line!r}, expected 'p cnf <vars> <clauses>'", line=lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormulaError(f"bad header {line!r}", line=lineno) from None
            continue
        if num_vars is None:
            raise FormulaError("clause before 'p cnf' header", line=lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormulaError(f"bad literal {tok!r}", line=lineno) from None
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if num_vars is None:
        raise FormulaError("missing 'p cnf' header")
    if current:
        clauses.append(tuple(current))
    if len(clauses) != num_clauses:
        raise FormulaError(f"header declares {num_clauses} clauses, found {len(clauses)}")
    return SatFormula(num_vars, tuple(clauses))


def format_dimacs(formula: SatFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in formula.clauses]
    return "\n".join(lines) + "\n"


def reduce(formula: SatFormula, params: ReductionParams = ReductionParams()) -> tuple:
    """Build the scheduling instance for ``formula``; returns ``(instance, target)``.

    Durations are integer time units (stored as hundredths); ``target`` is
    ``2 z v`` in hundredths.
    """
    formula.check_2p1n()
    z, dz = params.z * 100, params.delta_z * 100
    seen_pos = set()
    kinds = []  # per clause: {var: "pos1" | "pos2" | "neg"}
    for c in formula.clauses:
        kind = {}
        for lit in c:
            x = abs(lit)
            if lit < 0:
                kind[x] = "neg"
            elif x in seen_pos:
                kind[x] = "pos2"
            else:
                kind[x] = "pos1"
                seen_pos.add(x)
        kinds.append(kind)

    missions = []
    for kind in kinds:
        tasks = []
        for x in range(1, formula.num_vars + 1):
            role = kind.get(x)
            if role == "pos1":
                tasks += [Task(z, z - dz), Task(z, z)]
            elif role == "pos2":
                tasks += [Task(z, z), Task(z, z - dz)]
            elif role == "neg":
                tasks.append(Task(2 * z, 2 * z - dz))
            else:
                tasks.append(Task(2 * z, 2 * z))
        missions.append(tuple(tasks))
    return Instance(tuple(missions)), 2 * z * formula.num_vars


def sat_brute_force(formula: SatFormula, max_vars: int = 20) -> Optional[tuple]:
    """Satisfying assignment by exhaustive search, or None if unsatisfiable.

    The assignment is a tuple indexed by variable (index 0 unused).
    """
    if formula.num_vars > max_vars:
        raise ValueError(f"{formula.num_vars} variables exceeds the brute-force limit of {max_vars}")
    for bits in itertools.product((False, True), repeat=formula.num_vars):
        assignment = (None,) + bits
        if formula.is_satisfied(assignment):
            return assignment
    return None


@dataclass
class ReductionReport:
    satisfiable: bool
    assignment: Optional[tuple]
    makespan: int
    target: int
    threshold: int  # 2zv - dz, in hundredths
    schedule: object
    proved_optimal: bool

    @property
    def schedule_meets_threshold(self) -> bool:
        return self.makespan <= self.threshold

    @property
    def consistent(self) -> bool:
        if self.satisfiable:
            return self.makespan <= self.threshold
        return self.makespan == self.target

    def summary(self) -> str:
        verdict = "confirmed" if self.consistent else "VIOLATED"
        return (f"SAT={self.satisfiable} makespan={self.makespan / 100:g} "
                f"threshold={self.threshold / 100:g} target={self.target / 100:g}: "
                f"SAT <=> makespan <= threshold {verdict}")


def verify_reduction(formula: SatFormula, params: ReductionParams = ReductionParams(),
                     time_limit: float = 60.0, max_vars: int = 12) -> ReductionReport:
    """Check satisfiability against the exact optimum of the reduced instance."""
    if formula.num_vars > max_vars:
        raise ValueError(f"{formula.num_vars} variables exceeds the verification limit of {max_vars}")
    instance, target = reduce(formula, params)
    assignment = sat_brute_force(formula)
    sol = solve_exact(instance, time_limit)
    if not sol.proved_optimal:
        raise TimeoutError("exact solver did not finish within the time limit")
    return ReductionReport(
        satisfiable=assignment is not None,
        assignment=assignment,
        makespan=sol.makespan,
        target=target,
        threshold=target - params.delta_z * 100,
        schedule=sol.schedule,
        proved_optimal=sol.proved_optimal,
    )


def random_2p1n(num_vars: int, rng: random.Random, widths=(3,), max_tries: int = 10000) -> SatFormula:
    """Random 2p1n formula by rejection sampling.

    Clause widths are drawn from ``widths``; the default gives 2p1n-3SAT.
    """
    if max(widths) > 3 or min(widths) < 1:
        raise ValueError("clause widths must be between 1 and 3")
    if widths == (3,) and num_vars < 3:
        raise ValueError("a 2p1n-3SAT formula needs at least 3 variables")
    literals = [lit for x in range(1, num_vars + 1) for lit in (x, x, -x)]
    for _ in range(max_tries):
        rng.shuffle(literals)
        clauses, i = [], 0
        while i < len(literals):
            w = min(rng.choice(widths), len(literals) - i)
            clauses.append(tuple(literals[i:i + w]))
            i += w
        if all(len({abs(lit) for lit in c}) == len(c) for c in clauses):
            return SatFormula(num_vars, tuple(clauses))
    raise RuntimeError(f"no 2p1n formula found for {num_vars} variables")


# Four-clause example over four variables; satisfiable (e.g. all true).
EXAMPLE_FORMULA = SatFormula(4, ((1, 2, -3), (1, -2, 4), (-1, 3, 4), (2, 3, -4)))
