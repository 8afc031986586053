"""
Horizontal and vertical trajectories of ``q(z) dz**2`` and critical graphs.

Trajectories are integrated in Euclidean arclength, ``dz/ds = rot *
conj(sqrt q) / |sqrt q|`` (``rot = 1`` for horizontal, ``1j`` for vertical
trajectories), with an embedded Dormand-Prince 5(4) pair.  The primitive
``F = int sqrt(q) dz`` is accumulated chord by chord and every accepted step
is projected back onto the level set ``Im F = const`` (``Re F`` for vertical
traces), so the invariant holds to quadrature accuracy instead of drifting
with the integrator.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from ._quadrature import gauss_legendre01, point_segment_distance, segment_rule
from .algebra import (INFINITY, FactoredRational, LocalData, _eval_scalar,
                      as_point, evaluate, local_data, nearest_root)
from .errors import (InfiniteCriticalPoint, NotHigherOrderPole, PoleOnPath,
                     StartsAtInfiniteCriticalPoint)

TWO_PI = 2.0 * math.pi

HORIZONTAL = "horizontal"
VERTICAL = "vertical"

HIT = "HitCriticalPoint"
ESCAPED = "EscapedToInfinity"
CLOSED = "ClosedLoop"
BUDGET = "Budget"


def _rot(kind: str) -> complex:
    if kind == HORIZONTAL:
        return 1.0
    if kind == VERTICAL:
        return 1j
    raise ValueError(f"unknown trajectory kind {kind!r}")


@dataclass(frozen=True)
class TraceOptions:
    """Stopping radii, budgets and step control for :func:`trace`."""

    hit_radius: float
    escape_radius: float
    max_phi_length: float
    max_steps: int = 20000
    rel_tol: float = 1e-8

    def __post_init__(self):
        for name in ("hit_radius", "escape_radius", "max_phi_length", "max_steps", "rel_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.hit_radius >= self.escape_radius:
            raise ValueError("hit_radius must be smaller than escape_radius")

    @classmethod
    def for_rational(cls, q: FactoredRational, **overrides) -> "TraceOptions":
        """Scale-free defaults: S = max(1, max |critical point|)."""
        S = q.scale
        R = 10 * S + 10
        # phi-length of a radial run from S out to the escape radius under
        # q ~ c z**n; without it every escaping ray of a degree >= 2 q would
        # end on the budget before reaching the escape circle.
        n = q.degree
        c = abs(q.coefficient) ** 0.5
        e = n / 2 + 1
        reach = c * (math.log(R / S) if e == 0 else (R ** e - S ** e) / e)
        vals = dict(hit_radius=1e-4 * S, escape_radius=R, max_phi_length=100 * S + max(reach, 0.0))
        vals.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**vals)

    def with_hit_radius(self, r: float) -> "TraceOptions":
        return replace(self, hit_radius=r)

    def to_json(self) -> dict:
        return {"hit_radius": self.hit_radius, "escape_radius": self.escape_radius,
                "max_phi_length": self.max_phi_length, "max_steps": self.max_steps,
                "rel_tol": self.rel_tol}


@dataclass(frozen=True)
class Termination:
    kind: str
    point: complex | None = None
    direction_index: int | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.point is not None:
            out["point"] = [self.point.real, self.point.imag]
        if self.kind == ESCAPED:
            out["direction_index"] = self.direction_index
        return out


@dataclass
class Trajectory:
    """An oriented polyline along a trajectory.

    Attributes
    ----------
    vertices : ndarray of complex
    sqrt_values : ndarray of complex
        Branch-continued ``sqrt(q)`` at each vertex (0 at a zero, which a ray
        leaving or hitting a zero includes as its end vertex).
    primitive : ndarray of complex
        ``int sqrt(q) dz`` from the start to each vertex.
    phi_length : float
        Length in the metric ``|sqrt q| |dz|`` of the traced curve.
    termination : Termination
    """

    vertices: np.ndarray
    sqrt_values: np.ndarray
    primitive: np.ndarray
    phi_length: float
    termination: Termination
    kind: str = HORIZONTAL
    source: complex | None = None
    source_index: int | None = None
    emanation_index: int | None = None
    steps: int = 0
    monotone: bool = True

    @property
    def start(self) -> complex:
        return complex(self.vertices[0])

    @property
    def end(self) -> complex:
        return complex(self.vertices[-1])

    def hits(self, p: complex, tol: float = 1e-9) -> bool:
        t = self.termination
        return t.kind == HIT and abs(t.point - p) <= tol

    def to_json(self) -> dict:
        out = {
            "vertices": [[z.real, z.imag] for z in self.vertices.tolist()],
            "phi_length": self.phi_length,
            "termination": self.termination.to_json(),
            "kind": self.kind,
        }
        if self.source_index is not None:
            out["source_index"] = self.source_index
            out["emanation_index"] = self.emanation_index
        return out


# --------------------------------------------------------------------------
# Local directions
# --------------------------------------------------------------------------

def emanation_directions(d: LocalData, kind: str = HORIZONTAL) -> list[float]:
    """Directions of the ``order + 2`` trajectories leaving a finite point.

    ``theta_k = (2 pi k - arg leading)/(order + 2)``; vertical directions are
    shifted by ``pi/(order + 2)``.  Returned sorted in ``[0, 2 pi)``.
    """
    if d.point is INFINITY or d.order <= -2:
        raise InfiniteCriticalPoint(f"order {d.order} at {d.point!r}")
    r = d.order
    shift = 0.0 if kind == HORIZONTAL else math.pi / (r + 2)
    _rot(kind)
    arg = cmath.phase(d.leading)
    return sorted(((TWO_PI * k - arg) / (r + 2) + shift) % TWO_PI for k in range(r + 2))


def asymptotic_directions(q: FactoredRational, kind: str = HORIZONTAL) -> list[float]:
    """Critical directions at infinity when it is a pole of order ``p >= 3``.

    Along ``z = t e^{i theta}`` one has ``q dz**2 ~ c t**n e^{i(n+2) theta}
    dt**2``; the ``p - 2 = n + 2`` horizontal directions make it positive.
    """
    n = q.degree
    p = n + 4
    if p <= 2:
        raise NotHigherOrderPole(f"infinity is a pole of order {p}")
    _rot(kind)
    shift = 0.0 if kind == HORIZONTAL else math.pi
    arg = cmath.phase(q.coefficient)
    return sorted(((TWO_PI * k + shift - arg) / (n + 2)) % TWO_PI for k in range(n + 2))


def _angle_diff(a: float, b: float) -> float:
    d = (a - b) % TWO_PI
    return min(d, TWO_PI - d)


def nearest_direction(angle: float, directions: Sequence[float]) -> int:
    return min(range(len(directions)), key=lambda k: _angle_diff(angle, directions[k]))


# --------------------------------------------------------------------------
# Integrator
# --------------------------------------------------------------------------

# Dormand-Prince 5(4)
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)

_CHORD_X, _CHORD_W = gauss_legendre01(12)
_LAUNCH_X, _LAUNCH_W = gauss_legendre01(24)


class _Field:
    """Unit direction field with branch selection relative to a reference."""

    def __init__(self, q: FactoredRational, rot: complex):
        self.q = q
        self.rot = rot

    def sqrt_near(self, z: complex, ref: complex) -> complex:
        return nearest_root(cmath.sqrt(_eval_scalar(self.q, z)), ref)

    def __call__(self, z: complex, ref: complex) -> complex:
        s = self.sqrt_near(z, ref)
        return self.rot * s.conjugate() / abs(s)

    def chord_integral(self, z0: complex, z1: complex, s0: complex):
        """``int_{z0}^{z1} sqrt q dz`` on the chord and the branch value at ``z1``."""
        d = z1 - z0
        s = s0
        acc = 0.0j
        for x, w in zip(_CHORD_X, _CHORD_W):
            s = self.sqrt_near(z0 + d * x, s)
            acc += w * s
        s1 = self.sqrt_near(z1, s)
        return acc * d, s1


def _integral_from_critical(field: _Field, z0: complex, z1: complex, s1: complex) -> complex:
    # z = z0 + (z1 - z0) u^2 removes the algebraic singularity at z0
    w = z1 - z0
    s = s1
    acc = 0.0j
    for x, wt in zip(_LAUNCH_X[::-1], _LAUNCH_W[::-1]):
        s = field.sqrt_near(z0 + w * x * x, s)
        acc += wt * s * 2.0 * x
    return acc * w


def _orient(s: complex, rot: complex, e: complex) -> complex:
    u = rot * s.conjugate()
    return s if (u * e.conjugate()).real >= 0 else -s


def _level(F: complex, kind: str) -> float:
    return F.imag if kind == HORIZONTAL else F.real


def _advance(F: complex, kind: str) -> float:
    return F.real if kind == HORIZONTAL else F.imag


def _project(kind: str, drift: float, s: complex) -> complex:
    # first-order shift moving the level value by -drift
    return (-1j * drift / s) if kind == HORIZONTAL else (-drift / s)


def _dp_step(field: _Field, z: complex, s: complex, h: float):
    ks = [field(z, s)]
    for i in range(1, 7):
        zi = z + h * sum(a * kk for a, kk in zip(_A[i], ks))
        ks.append(field(zi, s))
    z5 = z + h * sum(b * kk for b, kk in zip(_B5, ks))
    z4 = z + h * sum(b * kk for b, kk in zip(_B4, ks))
    return z5, abs(z5 - z4)


def _launch(field: _Field, kind: str, z0: complex, theta: float, delta: float):
    e = cmath.exp(1j * theta)
    z = z0 + delta * e
    s = _orient(cmath.sqrt(_eval_scalar(field.q, z)), field.rot, e)
    dF = _integral_from_critical(field, z0, z, s)
    for _ in range(12):
        drift = _level(dF, kind)
        if abs(drift) <= 1e-15 * max(abs(dF), 1e-300):
            break
        z = z + _project(kind, drift, s)
        s = _orient(cmath.sqrt(_eval_scalar(field.q, z)), field.rot, e)
        dF = _integral_from_critical(field, z0, z, s)
    return z, s, dF


def _update_capture(capture, spiral, z_old, z):
    # A trajectory that winds once around a double pole inside a small disc
    # while moving inward keeps doing so (the local model is self-similar).
    for p, rho in spiral:
        if abs(z - p) < rho:
            if capture is None or capture[0] != p:
                return [p, abs(z - p), 0.0]
            capture[2] += cmath.phase((z - p) / (z_old - p))
            return capture
    return None


def _locate_source(q: FactoredRational, start: complex):
    tol = 1e-12 * q.scale
    for i, (r, m) in enumerate(q.factors):
        if abs(r - start) <= tol:
            return i, r, m
    return None, None, 0


def trace(q: FactoredRational, start, direction: float, opts: TraceOptions | None = None,
          kind: str = HORIZONTAL) -> Trajectory:
    """Trace one trajectory of ``q dz**2`` from ``start`` along ``direction``.

    Parameters
    ----------
    q : FactoredRational
    start : complex
        A regular point or a finite critical point (zero or simple pole).
    direction : float
        Initial direction; at a critical point it must be one of
        :func:`emanation_directions` (within 1e-6 rad).
    opts : TraceOptions, optional
        Defaults to :meth:`TraceOptions.for_rational`.
    kind : {"horizontal", "vertical"}

    Returns
    -------
    Trajectory
        Terminated by reaching a critical point, leaving the escape disc,
        closing up, or exhausting the budget.
    """
    start = as_point(start)
    opts = opts or TraceOptions.for_rational(q)
    rot = _rot(kind)
    field = _Field(q, rot)
    roots = [r for r, _ in q.factors]
    total_mult = sum(abs(m) for _, m in q.factors)
    cap = min(0.25, 1.0 / total_mult) if total_mult else 0.25
    S = q.scale

    src_idx, src, src_mult = _locate_source(q, start)
    verts: list[complex] = []
    svals: list[complex] = []
    prims: list[complex] = []
    if src is not None:
        if src_mult <= -2:
            raise StartsAtInfiniteCriticalPoint(f"{src!r} has order {src_mult}")
        dirs = emanation_directions(local_data(q, src), kind)
        k = nearest_direction(direction, dirs)
        if _angle_diff(direction, dirs[k]) > 1e-6:
            raise ValueError(f"direction {direction} is not an emanation direction at {src!r}")
        others = [abs(r - src) for r in roots if r != src]
        d_other = min(others) if others else S
        delta = 1e-3 * min(d_other, S)
        z, s, F = _launch(field, kind, src, dirs[k], delta)
        if src_mult > 0:
            verts.append(src)
            svals.append(0j)
            prims.append(0j)
        phi = _advance(F, kind)
        arm_radius = max(4 * delta, 2 * opts.hit_radius)
        armed = False
    else:
        if q.factors and min(abs(start - r) for r in roots) == 0:
            raise PoleOnPath("start coincides with a root")
        e = cmath.exp(1j * direction)
        z = start
        s = _orient(cmath.sqrt(_eval_scalar(q, z)), rot, e)
        F = 0j
        phi = 0.0
        armed = True
        arm_radius = 0.0
        k = None
    verts.append(z)
    svals.append(s)
    prims.append(F)

    u0 = field(z, s)
    asym = None
    if q.degree + 4 >= 3:
        asym = asymptotic_directions(q, kind)

    def nearest_dist(zz):
        if not roots:
            return math.inf
        return min(abs(zz - r) for r in roots)

    # log-spiral capture discs around poles of order >= 2
    spiral = []
    for r, m in q.factors:
        if m <= -2:
            others = [abs(r - rr) for rr in roots if rr != r]
            spiral.append((r, 0.25 * (min(others) if others else S)))
    capture = None   # [pole, entry radius, accumulated angle]
    outer = None     # same bookkeeping around infinity when it is a double pole
    r_outer = 2.0 * S if q.degree == -2 else math.inf

    dnear = nearest_dist(z)
    h = cap * min(dnear, S) if roots else 0.1 * S
    steps = 0
    monotone = True
    max_excursion = 0.0
    termination = None

    while termination is None:
        if steps >= opts.max_steps or phi > opts.max_phi_length:
            termination = Termination(BUDGET)
            break
        dnear = nearest_dist(z)
        hmax = min(cap * dnear, 0.5 * (abs(z) + S))
        h = min(h, hmax)
        z5, err = _dp_step(field, z, s, h)
        tol = opts.rel_tol * min(dnear, S) if roots else opts.rel_tol * S
        if err > tol and h > 1e-14 * S:
            h *= max(0.2, 0.9 * (tol / err) ** 0.2)
            continue
        dF, s_new = field.chord_integral(z, z5, s)
        F_new = F + dF
        drift = _level(F_new, kind)
        corr = _project(kind, drift, s_new)
        if abs(corr) > 0.1 * h and h > 1e-14 * S:
            h *= 0.5
            continue
        z_new = z5 + corr
        F_new = F_new + s_new * corr
        s_new = field.sqrt_near(z_new, s_new)
        inc = _advance(F_new - F, kind)
        if inc <= 0:
            monotone = False
        steps += 1

        # closed-loop test: crossing the transversal through the start
        if src is None and max_excursion > 10 * opts.hit_radius and phi > 10 * opts.hit_radius:
            g_old = ((z - start) * u0.conjugate()).real
            g_new = ((z_new - start) * u0.conjugate()).real
            if g_old < 0 <= g_new:
                # secant on the step length so the landing point is on the curve
                h0, g0, h1, g1 = 0.0, g_old, h, g_new
                p = z_new
                for _ in range(30):
                    if g1 == g0:
                        break
                    ht = h1 - g1 * (h1 - h0) / (g1 - g0)
                    p, _ = _dp_step(field, z, s, ht)
                    gt = ((p - start) * u0.conjugate()).real
                    h0, g0, h1, g1 = h1, g1, ht, gt
                    if abs(gt) <= 1e-14 * S:
                        break
                if abs(p - start) < opts.hit_radius:
                    dFp, sp = field.chord_integral(z, p, s)
                    up = field(p, sp)
                    if abs(cmath.phase(up / u0)) < 1e-3:
                        F_p = F + dFp
                        phi += _advance(dFp, kind)
                        verts.append(p)
                        svals.append(sp)
                        prims.append(F_p)
                        termination = Termination(CLOSED)
                        break

        phi += inc
        z, s, F = z_new, s_new, F_new
        verts.append(z)
        svals.append(s)
        prims.append(F)
        max_excursion = max(max_excursion, abs(z - start))
        if src is not None and not armed and abs(z - src) > arm_radius:
            armed = True

        for i, r in enumerate(roots):
            if abs(z - r) < opts.hit_radius and (i != src_idx or armed):
                termination = Termination(HIT, point=r)
                if q.factors[i][1] > 0:
                    # close the polyline at the zero; the tail is integrable
                    tail = -_integral_from_critical(field, r, z, s)
                    phi += _advance(tail, kind)
                    F = F + tail
                    verts.append(r)
                    svals.append(0j)
                    prims.append(F)
                break
        if termination is not None:
            break
        capture = _update_capture(capture, spiral, verts[-2], z)
        if capture is not None and abs(capture[2]) >= TWO_PI and abs(z - capture[0]) < 0.9 * capture[1]:
            termination = Termination(HIT, point=capture[0])
            break
        if abs(z) > r_outer:
            if outer is None:
                outer = [abs(z), 0.0]
            else:
                outer[1] += cmath.phase(z / verts[-2])
                if abs(outer[1]) >= TWO_PI and abs(z) > outer[0] / 0.9:
                    termination = Termination(ESCAPED)
                    break
        else:
            outer = None
        if abs(z) > opts.escape_radius:
            idx = None if asym is None else nearest_direction(cmath.phase(z) % TWO_PI, asym)
            termination = Termination(ESCAPED, direction_index=idx)
            break

        if err > 0:
            h *= min(4.0, max(0.25, 0.9 * (tol / err) ** 0.2))
        else:
            h *= 4.0

    return Trajectory(
        vertices=np.array(verts, dtype=complex),
        sqrt_values=np.array(svals, dtype=complex),
        primitive=np.array(prims, dtype=complex),
        phi_length=float(phi),
        termination=termination,
        kind=kind,
        source=src,
        source_index=src_idx,
        emanation_index=k,
        steps=steps,
        monotone=monotone,
    )


# --------------------------------------------------------------------------
# Critical graphs
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalPoint:
    point: object
    order: int
    index: int | None = None

    @property
    def is_finite_critical(self) -> bool:
        return self.point is not INFINITY and (self.order > 0 or self.order == -1)

    @property
    def kind(self) -> str:
        if self.order > 0:
            return "zero"
        if self.order == -1:
            return "simple_pole"
        if self.order < 0:
            return "pole"
        return "regular"

    def to_json(self) -> dict:
        if self.point is INFINITY:
            pt = "infinity"
        else:
            pt = [self.point.real, self.point.imag]
        return {"point": pt, "order": self.order, "kind": self.kind}


@dataclass
class CriticalGraph:
    q: FactoredRational
    points: list            # every finite critical point, indexed like q.factors
    sources: list           # finite critical points that emit rays
    rays: list
    adjacency: dict = field(default_factory=dict)   # (i, j) -> [ray indices]
    options: TraceOptions | None = None

    def point_index(self, p: complex, tol: float | None = None) -> int | None:
        tol = 1e-9 * self.q.scale if tol is None else tol
        for cp in self.points:
            if abs(cp.point - p) <= tol:
                return cp.index
        return None

    def connects(self, p1: complex, p2: complex) -> bool:
        i, j = self.point_index(p1), self.point_index(p2)
        if i is None or j is None:
            return False
        return (min(i, j), max(i, j)) in self.adjacency

    def rays_from(self, p: complex) -> list:
        i = self.point_index(p)
        return [r for r in self.rays if r.source_index == i]

    def to_json(self) -> dict:
        return {
            "quadratic_differential": self.q.to_json(),
            "points": [cp.to_json() for cp in self.points],
            "sources": [cp.index for cp in self.sources],
            "rays": [r.to_json() for r in self.rays],
            "adjacency": [{"pair": list(k), "rays": v} for k, v in sorted(self.adjacency.items())],
            "infinity": critical_point_at_infinity(self.q).to_json(),
        }


def critical_point_at_infinity(q: FactoredRational) -> CriticalPoint:
    return CriticalPoint(INFINITY, -(q.degree + 4))


def critical_graph(q: FactoredRational, opts: TraceOptions | None = None) -> CriticalGraph:
    """Trace every horizontal ray from every zero and simple pole of ``q``.

    Rays are ordered by (source index, emanation index), so the output is
    deterministic.  ``adjacency`` maps sorted pairs of critical-point
    indices (indices into ``q.factors``) to the rays joining them.
    """
    if not any(m >= -1 for _, m in q.factors):
        raise ValueError("q has no finite critical point")
    opts = opts or TraceOptions.for_rational(q)
    points = [CriticalPoint(r, m, i) for i, (r, m) in enumerate(q.factors)]
    sources = [cp for cp in points if cp.is_finite_critical]
    rays = []
    adjacency: dict = {}
    for cp in sources:
        dirs = emanation_directions(local_data(q, cp.point), HORIZONTAL)
        for k, theta in enumerate(dirs):
            ray = trace(q, cp.point, theta, opts, HORIZONTAL)
            ray.emanation_index = k
            if ray.termination.kind == HIT:
                j = next(i for i, (r, _) in enumerate(q.factors) if r == ray.termination.point)
                key = (min(cp.index, j), max(cp.index, j))
                adjacency.setdefault(key, []).append(len(rays))
            rays.append(ray)
    return CriticalGraph(q, points, sources, rays, adjacency, opts)


# --------------------------------------------------------------------------
# phi-length of polylines
# --------------------------------------------------------------------------

def phi_length(q: FactoredRational, polyline: Sequence[complex], rtol: float = 1e-8) -> float:
    """``int |sqrt q| |dz|`` along a polyline by panel-doubled Gauss-Legendre.

    Vertices may sit on zeros or simple poles (integrable singularities);
    the polyline must not touch a pole of order two or more.
    """
    pts = np.asarray(polyline, dtype=complex)
    if len(pts) < 2:
        return 0.0
    tol = 1e-12 * q.scale
    sing = np.zeros(len(pts), dtype=bool)
    for r, m in q.factors:
        on_vertex = np.abs(pts - r) <= tol
        if m <= -2:
            for a, b in zip(pts[:-1], pts[1:]):
                if point_segment_distance(r, a, b) <= tol:
                    raise PoleOnPath(f"polyline meets pole {r!r}")
        else:
            if m < 0:
                for a, b in zip(pts[:-1], pts[1:]):
                    if point_segment_distance(r, a, b) <= tol and not (
                            abs(a - r) <= tol or abs(b - r) <= tol):
                        raise PoleOnPath(f"polyline crosses simple pole {r!r}")
        sing |= on_vertex
    total = 0.0
    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        if a == b:
            continue
        prev = None
        n = 1
        while n <= 1024:
            z, w = segment_rule(a, b, n, 16, bool(sing[i]), bool(sing[i + 1]))
            val = float(np.sum(np.sqrt(np.abs(evaluate(q, z))) * np.abs(w)))
            if prev is not None and abs(val - prev) <= 0.01 * rtol * abs(val):
                break
            prev = val
            n *= 2
        total += val
    return total
