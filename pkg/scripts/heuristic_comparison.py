"""Mean makespan of every greedy variant over larger random instances."""
import argparse
import os

from teleop_sched.bench import BenchmarkConfig, run_benchmark


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--robots", default="2,3,4")
    p.add_argument("--tasks", default="10,20,40")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="results")
    args = p.parse_args()

    os.makedirs(args.out, exist_ok=True)
    rows = []
    for K in map(int, args.robots.split(",")):
        for N in map(int, args.tasks.split(",")):
            run = run_benchmark(BenchmarkConfig(K, N, count=args.count, seed=args.seed, jobs=args.jobs))
            with open(os.path.join(args.out, f"heuristics_K{K}_N{N}.csv"), "w") as f:
                f.write(run.to_csv())
            s = run.summary
            ng = s["naive-greedy"]["mean_makespan"]
            for name, v in s.items():
                rows.append((K, N, name, v["mean_makespan"], 100 * (ng - v["mean_makespan"]) / ng))

    print(f"{'K':>2} {'N':>3}  {'solver':22s} {'mean makespan':>14} {'vs naive':>9}")
    for K, N, name, mk, gain in rows:
        print(f"{K:>2} {N:>3}  {name:22s} {mk:14.2f} {gain:8.2f}%")


if __name__ == "__main__":
    main()
