"""
The quartic q = -(z**4 - 1): the real zeros are joined by a short
trajectory, the imaginary ones are not, although the real-period condition
holds for an arc joining them.  A necessary condition that is not sufficient.

    python demos/quartic_counterexample.py --outdir figures
"""

import argparse
import os

from qdgraph import (FactoredRational, OrientedArc, RenderSpec, condition_check,
                     critical_graph, find_short_trajectory, render_graph,
                     residue_at_infinity_sqrt)


def main():
    ap = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    ap.add_argument("--outdir", default="figures")
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)

    f = FactoredRational(1.0, [(1, 1), (-1, 1), (1j, 1), (-1j, 1)])   # z**4 - 1
    q = f.negate()
    g = critical_graph(q)
    print(f"{len(g.rays)} critical rays, {len(g.adjacency)} connected pairs")

    real = find_short_trajectory(q, -1, 1)
    imag = find_short_trajectory(q, 1j, -1j)
    print(f"-1 -- 1 : found={real.found}  phi-length={real.trajectory.phi_length:.6f}")
    print(f" i -- -i: found={imag.found}  ray-family gap={imag.distance:.4f}")

    # the period condition along an arc around +1 still holds
    arc = OrientedArc([1j, 2 + 1j, 2 - 1j, -1j])
    chk = condition_check(f, arc)
    print(f"Re of the period from i to -i: {chk.real_part:.2e} (passes={chk.passes})")
    print(f"residue of sqrt(z^4-1) at infinity: {abs(residue_at_infinity_sqrt(f)):.2e}")

    path = os.path.join(args.outdir, "quartic.svg")
    with open(path, "w") as fh:
        fh.write(render_graph(g, RenderSpec(width=5, height=5, background_field=True), real.trajectory))
    print("wrote", path)


if __name__ == "__main__":
    main()
