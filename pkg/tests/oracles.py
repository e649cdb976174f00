"""Slow, independent reference implementations used only by the tests."""
from teleop_sched.evaluator import makespan
from teleop_sched.model import InvalidSchedule, Schedule, TaskRef


def relax_times(instance, schedules):
    """Start/finish times by repeated constraint relaxation (longest path).

    Each task starts at the max of its robot predecessor's finish and its
    operator predecessor's finish; iterate until nothing changes.
    """
    if isinstance(schedules, Schedule):
        schedules = (schedules,)
    op_of, op_prev = {}, {}
    for m, s in enumerate(schedules):
        prev = None
        for ref in s.sequence:
            op_of[ref] = m
            op_prev[ref] = prev
            prev = ref
    refs = [TaskRef(k, j) for k, mis in enumerate(instance.missions) for j in range(len(mis))]
    start = {r: 0 for r in refs}

    def dur(r):
        t = instance.missions[r.robot][r.index]
        return t.beta if r in op_of else t.alpha

    for _ in range(len(refs) + 2):
        changed = False
        for r in refs:
            s = 0
            if r.index > 0:
                p = TaskRef(r.robot, r.index - 1)
                s = max(s, start[p] + dur(p))
            q = op_prev.get(r)
            if q is not None:
                s = max(s, start[q] + dur(q))
            if s != start[r]:
                start[r] = s
                changed = True
        if not changed:
            break
    else:
        raise AssertionError("relaxation did not converge")
    finish = {r: start[r] + dur(r) for r in refs}
    mk = max(finish[TaskRef(k, len(m) - 1)] for k, m in enumerate(instance.missions))
    return start, finish, mk


def all_sequences(instance):
    """Every mission-order-respecting sequence of effective tasks."""
    eff = [[j for j, t in enumerate(m) if t.beta < t.alpha] for m in instance.missions]
    K = len(eff)

    def rec(seq, last):
        yield tuple(seq)
        for k in range(K):
            for j in eff[k]:
                if j > last[k]:
                    old = last[k]
                    last[k] = j
                    seq.append(TaskRef(k, j))
                    yield from rec(seq, last)
                    seq.pop()
                    last[k] = old

    yield from rec([], [-1] * K)


def brute_force_optimum(instance):
    best = None
    for seq in all_sequences(instance):
        mk = relax_times(instance, Schedule(seq))[2]
        if best is None or mk < best[0]:
            best = (mk, seq)
    return best


def brute_force_multi(instance, operators):
    """Optimum over every assignment of effective tasks to operators and
    every mission-order-respecting service order per operator.

    Candidates are scored with the library evaluator (itself checked against
    relax_times); the enumeration is what makes this independent of the
    branch and bound."""
    import itertools

    eff = [TaskRef(k, j) for k, m in enumerate(instance.missions)
           for j, t in enumerate(m) if t.beta < t.alpha]
    best = max(sum(t.alpha for t in m) for m in instance.missions)
    for labels in itertools.product(range(operators + 1), repeat=len(eff)):
        # canonical operator labelling: first use of each operator in order
        used = [l for l in labels if l]
        seen = []
        for l in used:
            if l not in seen:
                seen.append(l)
        if seen != list(range(1, len(seen) + 1)):
            continue
        groups = [[r for r, l in zip(eff, labels) if l == m] for m in range(1, operators + 1)]
        orders = [list(_interleavings(g)) for g in groups]
        for combo in itertools.product(*orders):
            try:
                mk = makespan(instance, tuple(Schedule(c) for c in combo))
            except InvalidSchedule:
                continue  # operators wait on each other in a cycle
            best = min(best, mk)
    return best


def _interleavings(refs):
    by_robot = {}
    for r in refs:
        by_robot.setdefault(r.robot, []).append(r)
    chains = list(by_robot.values())

    def rec(pos, seq):
        if len(seq) == len(refs):
            yield tuple(seq)
            return
        for c, chain in enumerate(chains):
            if pos[c] < len(chain):
                pos[c] += 1
                seq.append(chain[pos[c] - 1])
                yield from rec(pos, seq)
                seq.pop()
                pos[c] -= 1

    yield from rec([0] * len(chains), [])
