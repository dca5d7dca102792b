"""Simulated residence behind the barrier against (k+1)(2x0-1), for every outside start."""
import argparse
import time

from semibarrier.analysis.sectors import is_inside
from semibarrier.analysis.trapping import simulate_residence, trapping_time


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--M-max", type=int, default=12)
    ap.add_argument("--x0-max", type=int, default=4)
    ap.add_argument("--k-max", type=int, default=5)
    args = ap.parse_args()
    start = time.perf_counter()
    print(f"{'M':>3} {'x0':>3} {'k':>3} {'formula':>8} {'cases':>6} {'match':>6}")
    total = bad = 0
    for M in range(3, args.M_max + 1):
        for x0 in range(2, min(args.x0_max, M - 1) + 1):
            for k in range(1, args.k_max + 1):
                outside = [m for m in range(2 * M) if not is_inside(m, x0)]
                ok = sum(simulate_residence(M, x0, k, m).in_region_steps == trapping_time(k, x0)
                         for m in outside)
                total += len(outside)
                bad += len(outside) - ok
                print(f"{M:>3} {x0:>3} {k:>3} {trapping_time(k, x0):>8} {len(outside):>6} {ok:>6}")
    print(f"{total - bad}/{total} starts match, {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
