"""Block-signature pencil A = diag(αI, βI), B = diag(I, -I) and its Krein realization.

Prints the positivity interval, the congruence reduction at the midpoint and the
classification of R(L) across the admissible interval, for both sign patterns.
"""

import argparse

from pencilqp.cli import classify_report
from pencilqp.config import DEFAULT_TOL
from pencilqp.instances import block_signature_pencil, block_signature_regularization
from pencilqp.pencil import congruence_reduction, positivity_interval


def run(alpha, beta, p, q, samples):
    pencil = block_signature_pencil(alpha, beta, p, q)
    iv = positivity_interval(pencil)
    print(f"alpha={alpha:g} beta={beta:g}: interval [{iv.lambda_minus:.12g}, {iv.lambda_plus:.12g}]"
          f" strict={iv.strict_nonempty}")
    red = congruence_reduction(pencil, iv.midpoint)
    print(f"  G eigenvalues at rho={red.rho:g}: {[round(float(v), 12) for v in sorted(red.G.diagonal())]}")
    print(f"  eta interval [{red.interval.lambda_minus:.12g}, {red.interval.lambda_plus:.12g}]")
    rep = classify_report(block_signature_regularization(alpha, beta, p, q), samples, DEFAULT_TOL)
    labels = [r["label"] for r in rep["interior"]]
    ends = {k: v["label"] for k, v in rep["endpoints"].items()}
    print(f"  interior labels {labels}; endpoints {ends}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--samples", type=int, default=5)
    args = ap.parse_args()
    for alpha, beta in ((-1.0, 2.0), (2.0, -1.0)):
        run(alpha, beta, args.p, args.q, args.samples)


if __name__ == "__main__":
    main()
