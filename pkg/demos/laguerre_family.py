"""
Laguerre family q = -(z**2 - 2(C+2)z + C**2)/z**2: short trajectory between
the two zeros, the class of the double pole, and the quantized period, for
a few values of C and along a path of parameters.

    python demos/laguerre_family.py --samples 50 --outdir figures
"""

import argparse
import os

import numpy as np

from qdgraph import (OrientedArc, RenderSpec, classify_double_pole, closed_arc, critical_graph,
                     find_short_trajectory, laguerre_qd, laguerre_quantization,
                     laguerre_zeros, local_data, render_graph, sweep)


def main():
    ap = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--outdir", default="figures")
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)

    print(f"{'C':>14} {'pole':>10} {'found':>6} {'period / 2 pi i':>18}")
    for C in (0.5, 1, 3, 2 + 1j, -0.95, -0.95 + 0.1j):
        q = laguerre_qd(C)
        a, b = laguerre_zeros(C)
        rep = find_short_trajectory(q, b, a)
        kind = classify_double_pole(local_data(q, 0)).value
        period = "-"
        if rep.found:
            end = a if abs(rep.trajectory.start - b) < abs(rep.trajectory.start - a) else b
            res = laguerre_quantization(C, OrientedArc(closed_arc(rep.trajectory, end)))
            period = f"{res.value / (2j * np.pi):.6f}"
        print(f"{complex(C)!s:>14} {kind:>10} {rep.found!s:>6} {period:>18}")
        if C == -0.95 + 0.1j:
            path = os.path.join(args.outdir, "laguerre_spiral.svg")
            with open(path, "w") as fh:
                fh.write(render_graph(critical_graph(q), RenderSpec.around(q.roots, background_field=True),
                                      rep.trajectory))
            print("wrote", path)

    # along the way from C = 3 to C = -0.95 + 0.1i the zero b(C) turns around
    # the pole; the per-sample crossing parity flips but the transported one does not
    path = np.linspace(3, -0.95 + 0.1j, args.samples)
    res = sweep("laguerre", list(path))
    raw = [r.signature.parities[0] for _, r in res.samples]
    print(f"sweep: all found={res.all_found}  constant class={res.signature_constant}  "
          f"raw parity changes at sample {raw.index(1) if 1 in raw else None}")


if __name__ == "__main__":
    main()
