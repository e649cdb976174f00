import pytest
from hypothesis import given, settings

from conftest import instances
from oracles import all_sequences, brute_force_multi, brute_force_optimum, relax_times
from teleop_sched.evaluator import entry_starts, evaluate, makespan
from teleop_sched.exact import node_lower_bound, solve_exact, solve_exact_multi
from teleop_sched.greedy import iterative_greedy
from teleop_sched.model import Instance, Schedule, generate_instance


def test_two_robot_optimum(two_robot):
    sol = solve_exact(two_robot)
    assert sol.proved_optimal
    # no schedule beats the bottleneck robot teleoperating both its tasks
    assert sol.makespan == 400
    assert makespan(two_robot, sol.schedule) == 400


def test_solution_roundtrips_through_evaluator():
    inst = generate_instance(3, 4, seed=5)
    sol = solve_exact(inst)
    assert evaluate(inst, sol.schedule).makespan == sol.makespan
    assert set(sol.assignments) == set(sol.schedule)


@settings(max_examples=80, deadline=None)
@given(instances(max_robots=3, max_tasks=3, allow_slow_teleop=True))
def test_matches_brute_force(inst):
    mk, _ = brute_force_optimum(inst)
    sol = solve_exact(inst)
    assert sol.proved_optimal and sol.makespan == mk


@pytest.mark.parametrize("seed", range(15))
def test_matches_brute_force_generated(seed):
    inst = generate_instance(2, 4, seed)
    assert solve_exact(inst).makespan == brute_force_optimum(inst)[0]


@settings(max_examples=60, deadline=None)
@given(instances(max_robots=1, max_tasks=8, allow_slow_teleop=True))
def test_single_robot_closed_form(inst):
    assert solve_exact(inst).makespan == sum(min(t.alpha, t.beta) for t in inst.missions[0])


@settings(max_examples=60, deadline=None)
@given(instances(max_robots=3, max_tasks=4))
def test_optimum_bounds_heuristics(inst):
    opt = solve_exact(inst).makespan
    assert opt <= makespan(inst, iterative_greedy(inst))
    assert opt >= max(sum(min(t.alpha, t.beta) for t in m) for m in inst.missions)


def test_incumbents_non_increasing():
    sol = solve_exact(generate_instance(3, 5, seed=2))
    mks = [m for _, m in sol.incumbents]
    assert all(b < a for a, b in zip(mks, mks[1:]))
    assert mks[-1] == sol.makespan
    assert [n for n, _ in sol.incumbents] == sorted(n for n, _ in sol.incumbents)


@pytest.mark.parametrize("limit", [0, -1])
def test_time_limit_must_be_positive(limit):
    with pytest.raises(ValueError):
        solve_exact(generate_instance(1, 2, 0), time_limit=limit)


def test_time_limit_returns_incumbent():
    inst = generate_instance(5, 12, seed=3)
    sol = solve_exact(inst, time_limit=0.05)
    assert not sol.proved_optimal
    assert sol.makespan == makespan(inst, sol.schedule) <= inst.autonomous_makespan()


def _state(instance, seq):
    starts = entry_starts(instance, seq)
    ptr = [0] * instance.num_robots
    ready = [0] * instance.num_robots
    free = 0
    for (k, j), s in zip(seq, starts):
        fin = s + instance.betas[k][j]
        ptr[k], ready[k], free = j + 1, fin, fin
    return ptr, ready, [free]


@settings(max_examples=40, deadline=None)
@given(instances(max_robots=3, max_tasks=3, allow_slow_teleop=True))
def test_lower_bound_admissible(inst):
    # best completion of every prefix, by enumeration
    seqs = [(s, relax_times(inst, Schedule(s))[2]) for s in all_sequences(inst)]
    best_ext = {}
    for s, mk in seqs:
        for n in range(len(s) + 1):
            p = s[:n]
            best_ext[p] = min(best_ext.get(p, mk), mk)
    for prefix, best in best_ext.items():
        ptr, ready, free = _state(inst, prefix)
        assert node_lower_bound(inst, ptr, ready, free) <= best


def test_multi_operator_needs_two():
    with pytest.raises(ValueError):
        solve_exact_multi(generate_instance(2, 2, 0), operators=1)


@pytest.mark.parametrize("seed", range(6))
def test_multi_operator_enough_operators(seed):
    # with one operator per robot nobody waits for the operator
    inst = generate_instance(2, 3, seed)
    sol = solve_exact_multi(inst, operators=2)
    assert sol.makespan == max(sum(min(t.alpha, t.beta) for t in m) for m in inst.missions)


@pytest.mark.parametrize("seed", range(6))
def test_more_operators_never_hurt(seed):
    inst = generate_instance(3, 3, seed)
    one = solve_exact(inst).makespan
    two = solve_exact_multi(inst, operators=2).makespan
    three = solve_exact_multi(inst, operators=3).makespan
    assert three <= two <= one


@pytest.mark.parametrize("seed", range(8))
def test_multi_operator_brute_force_small(seed):
    inst = generate_instance(3, 2, seed)
    assert solve_exact_multi(inst, operators=2).makespan == brute_force_multi(inst, 2)


@pytest.mark.slow
def test_multi_operator_brute_force_three_by_three():
    inst = generate_instance(3, 3, 11).with_operators(2)
    assert solve_exact_multi(inst).makespan == brute_force_multi(inst, 2)


def test_multi_operator_schedule_shape():
    inst = Instance.from_durations([[(4, 2), (4, 2)], [(4, 2), (4, 2)]], operators=2)
    sol = solve_exact_multi(inst)
    assert isinstance(sol.schedule, tuple) and len(sol.schedule) == 2
    assert sol.makespan == 400
    assert set(sol.assignments.values()) <= {0, 1}
