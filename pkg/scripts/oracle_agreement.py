"""Compare the interval search against the brute-force grid oracle on random pencils."""

import argparse
import time
from collections import defaultdict

import numpy as np

from pencilqp.config import OracleConfig
from pencilqp.oracle import PENCIL_VARIANTS, grid_interval, random_pencil
from pencilqp.pencil import positivity_interval


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1e-5)
    ap.add_argument("--grid", type=int, default=OracleConfig.grid_points)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    ocfg = OracleConfig(grid_points=args.grid)
    gaps = defaultdict(list)
    t_fast = t_grid = 0.0
    for _ in range(args.count):
        p, variant, _ = random_pencil(rng, int(rng.integers(2, args.max_n + 1)))
        t0 = time.perf_counter()
        a = positivity_interval(p)
        t1 = time.perf_counter()
        g = grid_interval(p, ocfg)
        t2 = time.perf_counter()
        t_fast += t1 - t0
        t_grid += t2 - t1
        gaps[variant].append(max(abs(a.lambda_minus - g.lambda_minus), abs(a.lambda_plus - g.lambda_plus)))

    print(f"{'variant':>13} {'count':>6} {'max gap':>9} {'median':>9} {'> tol':>6}")
    for v in PENCIL_VARIANTS:
        if gaps[v]:
            x = np.array(gaps[v])
            print(f"{v:>13} {x.size:>6} {x.max():>9.1e} {np.median(x):>9.1e} {int(np.sum(x > args.tol)):>6}")
    print(f"time: interval search {t_fast:.2f}s, grid oracle {t_grid:.2f}s")


if __name__ == "__main__":
    main()
