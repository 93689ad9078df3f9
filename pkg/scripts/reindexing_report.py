#!/usr/bin/env python3
"""Randomized report on the block-to-kernel reindexing for bundled systems.

Runs the *-homomorphism trials and the shift-sign search on the flip system
and on odometer truncations, then prints one summary line per run.

    python3 scripts/reindexing_report.py --trials 200 --seed 7
"""

import argparse
import sys
import time

from cantorenv import ZPartialAction, equivariance_sign, isomorphism_suite
from cantorenv.prefix_map import ODOMETER, PrefixMap


def run(name, a, trials, seed, level=None) -> bool:
    t0 = time.time()
    rep = isomorphism_suite(a, trials=trials, seed=seed, level=level)
    eps, erep = equivariance_sign(a, trials=max(10, trials // 5), seed=seed + 1,
                                  level=level)
    dt = time.time() - t0
    ok = rep.ok and erep.ok
    print(f"{name:<14} trials={trials:<4} checks={rep.checked + erep.checked:<6} "
          f"sign={eps:+d} ok={ok} ({dt:.2f}s)")
    for f in (rep.failures + erep.failures)[:3]:
        print(f"    FAIL {f}")
    return ok


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    flip = ZPartialAction(PrefixMap.parse("[0 -> 1]"))
    odo = ZPartialAction(ODOMETER)
    ok = run("flip", flip, args.trials, args.seed)
    for k in (1, 2):
        ok &= run(f"odometer k={k}", odo, args.trials, args.seed, level=k)
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
