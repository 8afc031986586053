"""
Corner angles of polygons bounded by trajectories, and the identity relating
them to the singular points enclosed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .algebra import FactoredRational
from .errors import EdgesDontMeet

TWO_PI = 2.0 * math.pi
SNAP_TOL = 0.05


@dataclass(frozen=True)
class PolygonData:
    """Corners ``(order, interior angle)`` and the orders of interior singular points."""

    vertices: tuple
    interior_orders: tuple = ()

    def __init__(self, vertices, interior_orders=()):
        verts = tuple((int(n), float(theta)) for n, theta in vertices)
        for n, theta in verts:
            if n < -1:
                raise ValueError(f"corner order {n} is below -1")
            if not 0.0 <= theta <= TWO_PI + 1e-12:
                raise ValueError(f"interior angle {theta} outside [0, 2 pi]")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "interior_orders", tuple(int(n) for n in interior_orders))

    def to_json(self) -> dict:
        return {"vertices": [[n, t] for n, t in self.vertices],
                "interior_orders": list(self.interior_orders)}

    @classmethod
    def from_json(cls, obj: dict) -> "PolygonData":
        return cls(obj["vertices"], obj.get("interior_orders", ()))


def teichmuller_residual(p: PolygonData) -> float:
    """``sum_j (1 - theta_j (n_j + 2) / (2 pi)) - 2 - sum_i n_i``.

    Zero for a polygon whose sides are trajectory arcs; a negative value
    certifies that no such polygon exists.
    """
    lhs = sum(1.0 - theta * (n + 2) / TWO_PI for n, theta in p.vertices)
    return lhs - 2.0 - sum(p.interior_orders)


@dataclass(frozen=True)
class AngleMeasurement:
    angle: float
    raw: float
    snapped: bool

    def to_json(self) -> dict:
        return {"angle": self.angle, "raw": self.raw, "snapped": self.snapped}


def _tangent(edge, vertex: complex, meet_tol: float, scale: float, arriving: bool) -> float:
    # an arriving edge is read from its last vertex when that one meets the
    # corner, a leaving edge from its first; this keeps loops apart
    v = np.asarray(getattr(edge, "vertices", edge), dtype=complex)
    d0, d1 = abs(v[0] - vertex), abs(v[-1] - vertex)
    if min(d0, d1) > meet_tol:
        raise EdgesDontMeet(f"edge ends {min(d0, d1):.3g} away from the vertex")
    use_last = d1 <= meet_tol if arriving else d0 > meet_tol
    if use_last:
        v = v[::-1]
    gap = abs(v[0] - vertex)
    rho = max(4 * gap, 1e-3 * scale)
    far = np.nonzero(np.abs(v - vertex) >= rho)[0]
    p = v[far[0]] if len(far) else v[-1]
    return cmath.phase(p - vertex)


def measure_interior_angle(q: FactoredRational, vertex, edge_in, edge_out, inside=None,
                           tol: float = SNAP_TOL, meet_tol: float | None = None
                           ) -> AngleMeasurement:
    """Interior angle at a polygon corner where two trajectory edges meet.

    Parameters
    ----------
    q : FactoredRational
    vertex : complex
    edge_in, edge_out : Trajectory or array of complex
        Either end of each edge may sit at the vertex.
    inside : complex, optional
        A point of the region near the corner.  Without it the boundary is
        taken to run counterclockwise, so the interior is the sector swept
        counterclockwise from ``edge_out`` to ``edge_in``.
    tol : float
        Snap to the nearest multiple of ``pi / (n + 2)``, ``n`` the order of
        ``q`` at the vertex, when the raw angle is this close to it.
    meet_tol : float, optional
        How far an edge end may sit from the vertex; default
        ``1e-3 * max(1, |vertex|)``.

    Returns
    -------
    AngleMeasurement
    """
    vertex = complex(vertex)
    meet_tol = 1e-3 * max(1.0, abs(vertex)) if meet_tol is None else meet_tol
    t_in = _tangent(edge_in, vertex, meet_tol, q.scale, True)
    t_out = _tangent(edge_out, vertex, meet_tol, q.scale, False)
    raw = (t_in - t_out) % TWO_PI
    if inside is not None:
        w = (cmath.phase(complex(inside) - vertex) - t_out) % TWO_PI
        if w > raw:
            raw = TWO_PI - raw
    n = q.multiplicity_at(vertex, tol=1e-9 * q.scale)
    unit = math.pi / (n + 2)
    k = round(raw / unit)
    if abs(raw - k * unit) <= tol:
        return AngleMeasurement(k * unit, raw, True)
    return AngleMeasurement(raw, raw, False)
