"""Runtime of Iterative Greedy and node counts of the exact solver as size grows.

Absolute times depend on the machine; the trend is what matters.
"""
import argparse
import csv
import statistics
import sys
import time

from teleop_sched.exact import solve_exact
from teleop_sched.greedy import iterative_greedy
from teleop_sched.model import generate_instance


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--robots", default="2,3,4")
    p.add_argument("--greedy-tasks", default="10,20,40")
    p.add_argument("--exact-tasks", default="5,8,11")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("--exact-max-tasks", type=int, default=33,
                   help="skip exact runs above this many tasks")
    args = p.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["solver", "K", "N", "instances", "mean_s", "max_s", "median_nodes", "proved"])
    for K in map(int, args.robots.split(",")):
        for N in map(int, args.greedy_tasks.split(",")):
            times = []
            for seed in range(args.count):
                inst = generate_instance(K, N, seed)
                t0 = time.perf_counter()
                iterative_greedy(inst)
                times.append(time.perf_counter() - t0)
            w.writerow(["iterative-greedy", K, N, args.count, f"{statistics.mean(times):.4f}",
                        f"{max(times):.4f}", "", ""])
        for N in map(int, args.exact_tasks.split(",")):
            if K * N > args.exact_max_tasks:
                continue
            times, nodes, proved = [], [], 0
            for seed in range(args.count):
                t0 = time.perf_counter()
                sol = solve_exact(generate_instance(K, N, seed), args.time_limit)
                times.append(time.perf_counter() - t0)
                nodes.append(sol.nodes_explored)
                proved += sol.proved_optimal
            w.writerow(["exact", K, N, args.count, f"{statistics.mean(times):.4f}", f"{max(times):.4f}",
                        f"{statistics.median(nodes):g}", proved])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
