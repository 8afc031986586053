"""Gauss-Legendre panel rules on straight segments, with endpoint grading."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def gauss_legendre01(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def segment_rule(za: complex, zb: complex, npanels: int = 1, order: int = 16,
                 sing_a: bool = False, sing_b: bool = False):
    """Nodes and complex weights for ``int_{za}^{zb} g(z) dz``.

    Nodes are returned in order from ``za`` to ``zb``.  When an endpoint
    carries an algebraic singularity (a root of ``q`` under a square root)
    the parameter is graded quadratically toward it, which makes the
    integrand smooth in the new variable.
    """
    x, w = gauss_legendre01(order)
    edges = np.linspace(0.0, 1.0, npanels + 1)
    h = np.diff(edges)
    u = (edges[:-1, None] + h[:, None] * x[None, :]).ravel()
    wu = (h[:, None] * w[None, :]).ravel()
    if sing_a and sing_b:
        t = 0.5 * (1.0 - np.cos(np.pi * u))
        dt = 0.5 * np.pi * np.sin(np.pi * u)
    elif sing_a:
        t = u * u
        dt = 2.0 * u
    elif sing_b:
        t = 1.0 - (1.0 - u) ** 2
        dt = 2.0 * (1.0 - u)
    else:
        t = u
        dt = np.ones_like(u)
    d = zb - za
    return za + d * t, d * dt * wu


def point_segment_distance(p, a, b):
    """Euclidean distance from point(s) ``p`` to the segment ``[a, b]``."""
    p = np.asarray(p, dtype=complex)
    d = b - a
    dd = (d * np.conj(d)).real
    if dd == 0:
        return np.abs(p - a)
    t = np.clip(((p - a) * np.conj(d)).real / dd, 0.0, 1.0)
    return np.abs(p - (a + t * d))
