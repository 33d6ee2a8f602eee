"""Solve random QP1EQC instances and compare with the best of many feasible samples."""

import argparse

import numpy as np

from pencilqp.oracle import random_pencil, sample_feasible
from pencilqp.qp1eqc import Certificate, QP1EQCProblem, solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--samples", type=int, default=20000)
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'#':>3} {'variant':>13} {'certificate':>15} {'objective':>12} {'sampled min':>12} {'endpoint':>8}")
    for i in range(args.count):
        p, variant, _ = random_pencil(rng, args.n)
        prob = QP1EQCProblem(p.A, p.B, rng.standard_normal(args.n), rng.standard_normal(args.n))
        found = solve(prob)
        sols = [s for s in found if s.certificate is Certificate.GLOBAL_MIN] or found
        Y = sample_feasible(prob, args.samples, seed=i)
        D = Y - prob.w0
        sampled = np.einsum("ij,jk,ik->i", D, prob.A, D).min()
        if sols:
            s = sols[0]
            print(f"{i:>3} {variant:>13} {s.certificate.value:>15} {s.objective:>12.6f} {sampled:>12.6f} {str(s.endpoint_case):>8}")
        else:
            print(f"{i:>3} {variant:>13} {'none':>15} {'':>12} {sampled:>12.6f}")
        if sols and sols[0].certificate is Certificate.GLOBAL_MIN:
            assert sols[0].objective <= sampled + 1e-6 * max(1.0, abs(sampled))


if __name__ == "__main__":
    main()
