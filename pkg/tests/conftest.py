import random

import pytest
from hypothesis import strategies as st

from teleop_sched.model import Instance, Schedule, Task, TaskRef


@st.composite
def instances(draw, max_robots=4, max_tasks=5, max_duration=3000, allow_slow_teleop=False):
    K = draw(st.integers(1, max_robots))
    missions = []
    for _ in range(K):
        n = draw(st.integers(1, max_tasks))
        tasks = []
        for _ in range(n):
            beta = draw(st.integers(1, max_duration))
            if allow_slow_teleop:
                alpha = draw(st.integers(1, max_duration))
            else:
                alpha = beta + draw(st.integers(0, max_duration))
            tasks.append(Task(alpha, beta))
        missions.append(tuple(tasks))
    return Instance(tuple(missions))


@st.composite
def schedules_for(draw, instance):
    chosen = []
    for k, mission in enumerate(instance.missions):
        chosen.append([j for j in range(len(mission)) if draw(st.booleans())])
    order = [k for k, js in enumerate(chosen) for _ in js]
    order = draw(st.permutations(order))
    nxt = [0] * len(chosen)
    seq = []
    for k in order:
        seq.append(TaskRef(k, chosen[k][nxt[k]]))
        nxt[k] += 1
    return Schedule(tuple(seq))


@st.composite
def instance_and_schedule(draw, **kw):
    inst = draw(instances(**kw))
    return inst, draw(schedules_for(inst))


def random_schedule(instance, rng: random.Random):
    chosen = [[j for j in range(len(m)) if rng.random() < 0.5] for m in instance.missions]
    order = [k for k, js in enumerate(chosen) for _ in js]
    rng.shuffle(order)
    nxt = [0] * len(chosen)
    seq = []
    for k in order:
        seq.append(TaskRef(k, chosen[k][nxt[k]]))
        nxt[k] += 1
    return Schedule(tuple(seq))


@pytest.fixture
def two_robot():
    # robot 1: (4, 2), (4, 2); robot 2: (3, 1)
    return Instance.from_durations([[(4, 2), (4, 2)], [(3, 1)]])
