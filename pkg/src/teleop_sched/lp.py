"""MILP model of the scheduling problem in CPLEX LP text format.

Variables (robots and tasks numbered from 1 in names):

``mu``          makespan
``t_k_j``       start time of task j of robot k
``x_k_j``       1 if the task is teleoperated (``x_k_j_m``: by operator m)
``y_k_j_l_i``   order of two teleoperated tasks of robots k < l
                (``y_k_j_l_i_m`` per operator); 1 means (k, j) goes after (l, i)

Finish times ``t + alpha - (alpha - beta) x`` are written inline.  The
either-or non-overlap condition is linearised with big-M equal to the sum of
all autonomous durations, which bounds every start time in an optimal
earliest-start solution.
"""
from __future__ import annotations

from functools import cmp_to_key
from typing import Mapping

from .model import Instance, Schedule, TaskRef, format_fixed


def _num(v: int) -> str:
    return format_fixed(v)


def _term(coef: int, var: str) -> str:
    if coef == 0:
        return ""
    sign = "+" if coef > 0 else "-"
    mag = abs(coef)
    return f" {sign} {var}" if mag == 100 else f" {sign} {_num(mag)} {var}"


def _row(name: str, terms, sense: str, rhs: int) -> str:
    """Render one constraint; ``terms`` are (coefficient in hundredths, var)
    pairs and repeated variables are summed."""
    coefs: dict = {}
    for c, v in terms:
        coefs[v] = coefs.get(v, 0) + c
    body = "".join(_term(c, v) for v, c in coefs.items()).strip()
    if body.startswith("+ "):
        body = body[2:]
    return f" {name}: {body} {sense} {_num(rhs)}"


def _x_terms(k: int, j: int, coef: int, ops: int):
    """Terms for ``coef * (teleoperation indicator of task (k, j))``."""
    if ops == 1:
        return [(coef, f"x_{k + 1}_{j + 1}")]
    return [(coef, f"x_{k + 1}_{j + 1}_{m + 1}") for m in range(ops)]


def emit_lp(instance: Instance) -> str:
    M_ops = instance.operators
    A, B = instance.alphas, instance.betas
    big = sum(sum(a) for a in A)
    rows = []

    # makespan covers each robot's last finish
    for k, a in enumerate(A):
        n = len(a)
        terms = [(100, "mu"), (-100, f"t_{k + 1}_{n}")]
        terms += _x_terms(k, n - 1, a[-1] - B[k][-1], M_ops)
        rows.append(_row(f"finish_{k + 1}", terms, ">=", a[-1]))

    # mission order inside each robot
    for k, a in enumerate(A):
        for j in range(1, len(a)):
            terms = [(100, f"t_{k + 1}_{j + 1}"), (-100, f"t_{k + 1}_{j}")]
            terms += _x_terms(k, j - 1, a[j - 1] - B[k][j - 1], M_ops)
            rows.append(_row(f"order_{k + 1}_{j + 1}", terms, ">=", a[j - 1]))

    # at most one operator per task
    if M_ops > 1:
        for k, a in enumerate(A):
            for j in range(len(a)):
                rows.append(_row(f"assign_{k + 1}_{j + 1}",
                                 _x_terms(k, j, 100, M_ops), "<=", 100))

    # one operator never serves two tasks at once
    ybins = []
    for k in range(len(A)):
        for l in range(k + 1, len(A)):
            for j in range(len(A[k])):
                for i in range(len(A[l])):
                    for m in range(M_ops):
                        op = f"_{m + 1}" if M_ops > 1 else ""
                        suf = f"{k + 1}_{j + 1}_{l + 1}_{i + 1}{op}"
                        xk = f"x_{k + 1}_{j + 1}{op}"
                        xl = f"x_{l + 1}_{i + 1}{op}"
                        y = f"y_{suf}"
                        ybins.append(y)
                        tk, tl = f"t_{k + 1}_{j + 1}", f"t_{l + 1}_{i + 1}"
                        # y = 1: t_kj >= finish_li, relaxed unless both x are 1
                        rows.append(_row(
                            f"after_{suf}",
                            [(100, tk), (-100, tl), (A[l][i] - B[l][i], xl),
                             (-big, xk), (-big, xl), (-big, y)],
                            ">=", A[l][i] - 3 * big))
                        # y = 0: t_li >= finish_kj
                        rows.append(_row(
                            f"before_{suf}",
                            [(100, tl), (-100, tk), (A[k][j] - B[k][j], xk),
                             (-big, xk), (-big, xl), (big, y)],
                            ">=", A[k][j] - 2 * big))

    xbins = []
    starts = []
    for k, a in enumerate(A):
        for j in range(len(a)):
            starts.append(f"t_{k + 1}_{j + 1}")
            if M_ops == 1:
                xbins.append(f"x_{k + 1}_{j + 1}")
            else:
                xbins += [f"x_{k + 1}_{j + 1}_{m + 1}" for m in range(M_ops)]

    out = [f"\\ operator scheduling: {len(A)} robots, {instance.num_tasks} tasks, "
           f"{M_ops} operator(s), big-M {_num(big)}",
           "Minimize", " obj: mu", "Subject To"]
    out += rows
    out.append("Bounds")
    out.append(" mu >= 0")
    out += [f" {t} >= 0" for t in starts]
    out.append("Binary")
    out += [f" {v}" for v in xbins + ybins]
    out.append("End")
    return "\n".join(out) + "\n"


def decode_solution(instance: Instance, values: Mapping[str, float]):
    """Turn solver variable values into schedules (one per operator if several).

    Teleoperated tasks are those with ``x >= 0.5``; they are ordered by start
    time, with near-equal starts ordered by the pair's ``y`` binary.
    """
    M_ops = instance.operators
    per_op = [[] for _ in range(M_ops)]
    for ref in instance.refs():
        k, j = ref
        for m in range(M_ops):
            name = f"x_{k + 1}_{j + 1}" + (f"_{m + 1}" if M_ops > 1 else "")
            if values.get(name, 0.0) >= 0.5:
                per_op[m].append(ref)

    def start(ref):
        return values.get(f"t_{ref.robot + 1}_{ref.index + 1}", 0.0)

    def cmp_for(m):
        def cmp(a: TaskRef, b: TaskRef):
            ta, tb = start(a), start(b)
            if abs(ta - tb) > 1e-6:
                return -1 if ta < tb else 1
            if a.robot == b.robot:
                return -1 if a.index < b.index else 1
            lo, hi = (a, b) if a.robot < b.robot else (b, a)
            suf = f"{lo.robot + 1}_{lo.index + 1}_{hi.robot + 1}_{hi.index + 1}" + (f"_{m + 1}" if M_ops > 1 else "")
            lo_after = values.get(f"y_{suf}", 0.0) >= 0.5
            first = hi if lo_after else lo
            return -1 if first == a else 1
        return cmp

    schedules = tuple(Schedule(tuple(sorted(s, key=cmp_to_key(cmp_for(m))))) for m, s in enumerate(per_op))
    return schedules[0] if M_ops == 1 else schedules
