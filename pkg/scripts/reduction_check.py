"""Check the SAT reduction on random 2p1n formulas with the exact solver."""
import argparse
import random

from teleop_sched.reduction import EXAMPLE_FORMULA, ReductionParams, random_2p1n, verify_reduction


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--max-vars", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--z", type=int, default=100)
    p.add_argument("--dz", type=int, default=1)
    p.add_argument("--widths", default="1,2,3", help="allowed clause widths")
    args = p.parse_args()

    params = ReductionParams(args.z, args.dz)
    widths = tuple(int(w) for w in args.widths.split(","))
    rng = random.Random(args.seed)
    formulas = [("example", EXAMPLE_FORMULA)]
    for i in range(args.count):
        lo = 3 if widths == (3,) else 1
        formulas.append((f"random-{i}", random_2p1n(rng.randint(lo, args.max_vars), rng, widths)))

    bad = 0
    for name, f in formulas:
        rep = verify_reduction(f, params)
        bad += not rep.consistent
        print(f"{name:10s} v={f.num_vars} clauses={len(f.clauses)}  {rep.summary()}")
    print(f"{len(formulas)} formulas, {bad} inconsistent")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
