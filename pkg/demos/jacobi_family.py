"""
Jacobi family q = -D_AB(z)/(z**2 - 1)**2: short trajectories, the quantized
period with the endpoint normalization of the branch, and a sweep to a
complex parameter.

    python demos/jacobi_family.py --outdir figures
"""

import argparse
import os

import numpy as np

from qdgraph import (OrientedArc, RenderSpec, closed_arc, critical_graph, find_short_trajectory,
                     jacobi_qd, jacobi_quantization, jacobi_zeros, render_graph, sweep)


def main():
    ap = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    ap.add_argument("--samples", type=int, default=25)
    ap.add_argument("--outdir", default="figures")
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)

    for A, B in ((1, 1), (10, 10), (2, 0.5), (10 + 1j, 10)):
        q = jacobi_qd(A, B)
        a, b = jacobi_zeros(A, B)
        rep = find_short_trajectory(q, b, a)
        end = a if abs(rep.trajectory.start - b) < abs(rep.trajectory.start - a) else b
        res = jacobi_quantization(A, B, OrientedArc(closed_arc(rep.trajectory, end)))
        s1, sm1 = res.endpoint_values
        print(f"A={A!s:>7} B={B!s:>4}: found={rep.found} period/2 pi i={res.value / (2j * np.pi):.6f} "
              f"sqrtD(1)={s1:.4f} sqrtD(-1)={sm1:.4f}")
        if A == 10 + 1j:
            path = os.path.join(args.outdir, "jacobi_complex.svg")
            with open(path, "w") as fh:
                fh.write(render_graph(critical_graph(q), RenderSpec(width=3.2, height=3.2), rep.trajectory))
            print("wrote", path)

    path = [(10 + 1j * t, 10) for t in np.linspace(0, 1, args.samples)]
    res = sweep("jacobi", path)
    print(f"sweep (10,10) -> (10+i,10): all found={res.all_found} constant class={res.signature_constant}")


if __name__ == "__main__":
    main()
