"""λ₋(N) for the N-dimensional truncation of the diagonal ℓ² pencil.

The truncation has interval [1 - 1/N, 2]; the lower endpoint increases to 1.
"""

import argparse
import time

from pencilqp.instances import truncated_l2_pencil
from pencilqp.pencil import Endpoint, endpoint_analysis, positivity_interval


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 50, 100, 200, 400])
    args = ap.parse_args()
    print(f"{'N':>5} {'lambda_minus':>18} {'1-1/N error':>12} {'lambda_plus':>18} {'lower witness b':>16} {'sec':>6}")
    for N in args.sizes:
        t0 = time.perf_counter()
        p = truncated_l2_pencil(N)
        iv = positivity_interval(p)
        ea = endpoint_analysis(p, iv, Endpoint.LOWER)
        dt = time.perf_counter() - t0
        b = ea.m_witnesses[0].b_value if ea.m_witnesses else float("nan")
        print(f"{N:>5} {iv.lambda_minus:>18.15f} {abs(iv.lambda_minus - (1 - 1 / N)):>12.1e}"
              f" {iv.lambda_plus:>18.15f} {b:>16.3f} {dt:>6.2f}")


if __name__ == "__main__":
    main()
