"""
Zeros of L_n^{nC}(nz) and P_n^{(nA,nB)}(z) against the short trajectory of
the matching quadratic differential.

    python demos/zero_overlay.py --n 40
"""

import argparse
import math

from qdgraph import (find_short_trajectory, jacobi_polynomial_zeros, laguerre_polynomial_zeros,
                     laguerre_qd, laguerre_zeros, zero_measure_overlay)


def main():
    ap = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    ap.add_argument("--n", type=int, default=40)
    ap.add_argument("--C", type=float, default=1.0)
    ap.add_argument("--A", type=float, default=10.0)
    ap.add_argument("--B", type=float, default=10.0)
    ap.add_argument("--tube", type=float, default=0.1)
    args = ap.parse_args()

    a, b = laguerre_zeros(args.C)
    rep = find_short_trajectory(laguerre_qd(args.C), a, b)
    for n in (10, 20, args.n):
        z = laguerre_polynomial_zeros(n, args.C)
        ov = zero_measure_overlay(z, rep.trajectory, args.tube)
        print(f"Laguerre n={n:3d} C={args.C}: {ov.fraction:.2%} of zeros within {args.tube} "
              f"(spread {z.real.min():.3f} .. {z.real.max():.3f}, segment {b.real:.3f} .. {a.real:.3f})")

    s = 4 * math.sqrt((args.A + 1) * (args.B + 1) * (args.A + args.B + 1)) / (args.A + args.B + 2) ** 2
    c = (args.B ** 2 - args.A ** 2) / (args.A + args.B + 2) ** 2
    for n in (10, 20, 30):
        z = jacobi_polynomial_zeros(n, args.A, args.B)
        ov = zero_measure_overlay(z, [c - s, c + s], args.tube)
        print(f"Jacobi n={n:3d} A={args.A} B={args.B}: {ov.fraction:.2%} within {args.tube} of "
              f"[{c - s:.4f}, {c + s:.4f}]")


if __name__ == "__main__":
    main()
