"""
Short-trajectory certification between two zeros.

A short trajectory joins ``a`` and ``b`` exactly when one of the finitely
many horizontal rays leaving ``a`` ends at ``b``; the distance between the
two ray families is reported alongside, and is bounded away from zero when
no such ray exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import FactoredRational, as_point, local_data
from .errors import ArcThroughPole, NoNearbyRay, NotAZero, ZerosCoincide
from .geometry import min_distance, point_polyline_distance, segment_distances
from .tracer import (HIT, HORIZONTAL, VERTICAL, TraceOptions, Trajectory,
                     _Field, _integral_from_critical, emanation_directions,
                     trace)

_MAX_REFINE = 3


@dataclass(frozen=True)
class HomotopySignature:
    """Crossing parities of an arc with downward vertical cuts from each pole."""

    parities: tuple = ()

    def to_json(self) -> list:
        return list(self.parities)


@dataclass
class ShortTrajectoryReport:
    found: bool
    distance: float
    trajectory: Trajectory | None = None
    unbroken: bool | None = None
    signature: HomotopySignature | None = None
    resolved: bool = True
    hit_radius: float = 0.0
    connections: int = 0
    endpoints: tuple = field(default=())

    def to_json(self) -> dict:
        out = {
            "found": self.found,
            "distance": self.distance,
            "resolved": self.resolved,
            "hit_radius": self.hit_radius,
            "connections": self.connections,
            "endpoints": [[z.real, z.imag] for z in self.endpoints],
        }
        if self.trajectory is not None:
            out["trajectory"] = self.trajectory.to_json()
            out["unbroken"] = self.unbroken
            out["signature"] = self.signature.to_json()
        return out


def _zero_of(q: FactoredRational, z) -> tuple:
    z = as_point(z)
    tol = 1e-9 * q.scale
    for r, m in q.factors:
        if abs(r - z) <= tol:
            if m > 0:
                return r, m
            break
    raise NotAZero(f"{z!r} is not a zero of q")


def gamma_set(q: FactoredRational, zero, opts: TraceOptions | None = None,
              kind: str = HORIZONTAL) -> list[Trajectory]:
    """The ``r + 2`` critical rays leaving a zero of order ``r``."""
    z0, _ = _zero_of(q, zero)
    opts = opts or TraceOptions.for_rational(q)
    rays = []
    for k, theta in enumerate(emanation_directions(local_data(q, z0), kind)):
        ray = trace(q, z0, theta, opts, kind)
        ray.emanation_index = k
        rays.append(ray)
    return rays


def homotopy_signature(arc, poles) -> HomotopySignature:
    """Parity of crossings of ``arc`` with the cut ``{p - i t : t > 0}`` per pole.

    Vertices exactly on a cut count as lying to its right, which makes the
    parity stable under inserting vertices on existing segments.  A cut
    passing through an endpoint of the arc is nudged sideways by 1e-9.
    """
    v = np.asarray(arc, dtype=complex)
    if len(v) < 2:
        raise ValueError("an arc needs at least two vertices")
    bits = []
    for p in poles:
        p = complex(p)
        if len(v) > 1 and np.any(segment_distances(v[:-1], v[1:], p, p) <= 1e-12 * max(1.0, abs(p))):
            raise ArcThroughPole(f"arc passes through pole {p!r}")
        px = p.real
        for e in (v[0], v[-1]):
            if abs(e.real - px) <= 1e-12 * max(1.0, abs(px)) and e.imag < p.imag:
                px += 1e-9
        x = v.real - px
        left = x < 0
        cross = left[:-1] != left[1:]
        x0, x1 = x[:-1][cross], x[1:][cross]
        y0, y1 = v.imag[:-1][cross], v.imag[1:][cross]
        y = y0 + (y1 - y0) * (-x0) / (x1 - x0)
        bits.append(int(np.count_nonzero(y < p.imag)) % 2)
    return HomotopySignature(tuple(bits))


def _other_finite_critical(q, a, b):
    return [r for r, m in q.factors if (m > 0 or m == -1) and r != a and r != b]


def closed_arc(ray: Trajectory, target: complex) -> np.ndarray:
    """Vertices of ``ray`` ending exactly at ``target``."""
    v = ray.vertices
    return v if v[-1] == target else np.append(v, target)


def _stitch(pieces: list) -> Trajectory:
    # rays leaving successive zeros, each ending at the next one
    verts, svals, prims, phi, off = [], [], [], 0.0, 0j
    for k, r in enumerate(pieces):
        v = closed_arc(r, r.termination.point)
        skip = 1 if k else 0
        verts.extend(v[skip:])
        svals.extend(np.append(r.sqrt_values, 0j)[:len(v)][skip:])
        prims.extend(np.append(r.primitive, r.primitive[-1])[:len(v)][skip:] + off)
        off = prims[-1]
        phi += r.phi_length
    first = pieces[0]
    return Trajectory(np.array(verts, dtype=complex), np.array(svals, dtype=complex),
                      np.array(prims, dtype=complex), phi, pieces[-1].termination,
                      kind=first.kind, source=first.source, source_index=first.source_index,
                      emanation_index=first.emanation_index,
                      steps=sum(r.steps for r in pieces),
                      monotone=all(r.monotone for r in pieces))


def _broken_path(q, a, b, ga, opts, tol):
    """Shortest chain of rays a -> c1 -> ... -> b through other zeros, or None."""
    zeros = [r for r, m in q.factors if m > 0]
    rays = {a: ga}
    prev = {a: None}
    frontier = [a]
    while frontier:
        nxt = []
        for u in frontier:
            if u not in rays:
                rays[u] = gamma_set(q, u, opts)
            for ray in rays[u]:
                if ray.termination.kind != HIT:
                    continue
                v = next((z for z in zeros if abs(z - ray.termination.point) <= tol), None)
                if v is None or v in prev:
                    continue
                prev[v] = (u, ray)
                if v == b:
                    pieces = []
                    while prev[v] is not None:
                        v, ray = prev[v]
                        pieces.append(ray)
                    return pieces[::-1]
                nxt.append(v)
        frontier = nxt
    return None


def find_short_trajectory(q: FactoredRational, a, b, opts: TraceOptions | None = None
                          ) -> ShortTrajectoryReport:
    """Decide whether a short trajectory of ``q dz**2`` joins zeros ``a``, ``b``.

    Parameters
    ----------
    q : FactoredRational
    a, b : complex
        Distinct zeros of ``q``.
    opts : TraceOptions, optional

    Returns
    -------
    ShortTrajectoryReport
        ``found`` when a ray from one zero enters the hit disc of the other,
        ``unbroken`` unless the connection only exists as a chain of rays
        through intermediate zeros (a broken short trajectory).
        When nothing is found but the ray families come within
        ``10 * hit_radius`` of each other, the hit radius is divided by ten
        and the search repeated (three times at most); a pair still inside
        that band is reported with ``resolved=False``.
    """
    a, _ = _zero_of(q, a)
    b, _ = _zero_of(q, b)
    if a == b:
        raise ZerosCoincide(f"{a!r} given twice")
    opts = opts or TraceOptions.for_rational(q)
    for attempt in range(_MAX_REFINE + 1):
        ga = gamma_set(q, a, opts)
        gb = gamma_set(q, b, opts)
        dist = min_distance(ga, gb)
        tol = 1e-9 * q.scale
        from_a = [r for r in ga if r.hits(b, tol)]
        from_b = [r for r in gb if r.hits(a, tol)]
        if from_a or from_b:
            ray = from_a[0] if from_a else from_b[0]
            target = b if from_a else a
            arc = closed_arc(ray, target)
            others = _other_finite_critical(q, a, b)
            unbroken = all(point_polyline_distance(c, arc)[0] > opts.hit_radius for c in others)
            return ShortTrajectoryReport(
                found=True, distance=dist, trajectory=ray, unbroken=unbroken,
                signature=homotopy_signature(arc, q.poles), resolved=True,
                hit_radius=opts.hit_radius, connections=max(len(from_a), len(from_b)),
                endpoints=(a, b))
        chain = _broken_path(q, a, b, ga, opts, tol)
        if chain is not None:
            ray = _stitch(chain)
            return ShortTrajectoryReport(
                found=True, distance=dist, trajectory=ray, unbroken=False,
                signature=homotopy_signature(ray.vertices, q.poles), resolved=True,
                hit_radius=opts.hit_radius, connections=1, endpoints=(a, b))
        if dist > 10 * opts.hit_radius:
            return ShortTrajectoryReport(False, dist, resolved=True, hit_radius=opts.hit_radius,
                                         endpoints=(a, b))
        if attempt < _MAX_REFINE:
            opts = opts.with_hit_radius(opts.hit_radius / 10)
    return ShortTrajectoryReport(False, dist, resolved=False, hit_radius=opts.hit_radius,
                                 endpoints=(a, b))


def _chord(field: _Field, z0: complex, z1: complex, s0: complex):
    return field.chord_integral(z0, z1, s0)


def _first_crossing(sigma: np.ndarray, gamma: np.ndarray):
    # earliest segment of sigma meeting gamma; returns (j, i, point)
    for j in range(len(sigma) - 1):
        p0, p1 = sigma[j], sigma[j + 1]
        d = segment_distances(p0, p1, gamma[:-1], gamma[1:])
        hits = np.nonzero(d == 0.0)[0]
        if len(hits):
            i = int(hits[0])
            q0, q1 = gamma[i], gamma[i + 1]
            r, s = p1 - p0, q1 - q0
            den = r.real * s.imag - r.imag * s.real
            if den == 0:
                continue
            w = q0 - p0
            t = (w.real * s.imag - w.imag * s.real) / den
            return j, i, p0 + t * r
    return None


def orthogonal_obstruction(q: FactoredRational, a, b, opts: TraceOptions | None = None,
                           neighborhood: float | None = None) -> complex:
    """Period of ``sqrt q`` along a ray from ``a`` completed to ``b`` by a vertical arc.

    The ray from ``a`` that comes closest to ``b`` is followed up to the
    point ``c`` where a vertical trajectory from ``b`` meets it, then the
    vertical arc is followed back to ``b``.  The horizontal part contributes
    a real period and the vertical part an imaginary one, so the imaginary
    part of the returned value is the obstruction: it vanishes only when the
    vertical arc degenerates, that is, when the ray actually reaches ``b``.
    """
    a, _ = _zero_of(q, a)
    b, _ = _zero_of(q, b)
    opts = opts or TraceOptions.for_rational(q)
    neighborhood = 0.1 * q.scale if neighborhood is None else neighborhood
    field = _Field(q, 1.0)
    rays = gamma_set(q, a, opts)
    dists = [point_polyline_distance(b, r.vertices)[0] for r in rays]
    k = int(np.argmin(dists))
    gamma = rays[k]
    if dists[k] > neighborhood:
        raise NoNearbyRay(f"closest ray from {a!r} stays {dists[k]:.3g} away from {b!r}")
    if gamma.hits(b, 1e-9 * q.scale):
        if gamma.end == b:
            return complex(gamma.primitive[-1])
        z_last, s_last = gamma.end, complex(gamma.sqrt_values[-1])
        tail = -_integral_from_critical(field, b, z_last, s_last)
        return complex(gamma.primitive[-1] + tail)

    gv = gamma.vertices
    for sigma in gamma_set(q, b, opts, kind=VERTICAL):
        hit = _first_crossing(sigma.vertices, gv)
        if hit is None:
            continue
        j, i, c = hit
        to_c, s_c = _chord(field, complex(gv[i]), c, complex(gamma.sqrt_values[i]))
        along_gamma = gamma.primitive[i] + to_c
        sig_to_c, s_sig = _chord(field, complex(sigma.vertices[j]), c, complex(sigma.sqrt_values[j]))
        b_to_c = sigma.primitive[j] + sig_to_c
        sign = 1.0 if (s_sig * s_c.conjugate()).real >= 0 else -1.0
        return complex(along_gamma - sign * b_to_c)
    raise NoNearbyRay(f"no vertical trajectory from {b!r} meets the closest ray from {a!r}")
