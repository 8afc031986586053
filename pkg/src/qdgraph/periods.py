"""
Arc and contour integrals of ``sqrt f`` and the quantized periods of the
Laguerre and Jacobi families.

Boundary values on a cut are handled in two stages.  The sign of the root
on the requested side is read off at a point displaced by ``eps`` along the
normal of one segment, the one farthest from the roots of ``f`` (checked
again at ``eps/2``); the integral is
then taken along the arc itself, continuing that sign.  Interior points of a
cut are regular points of ``f``, so the side limit is just one of the two
roots there and no offset is needed during quadrature.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._quadrature import point_segment_distance, segment_rule
from .algebra import (BranchState, CutBranch, FactoredRational, _eval_scalar,
                      continue_sqrt, nearest_root, winding_number)
from .errors import BranchAmbiguity, BranchNotClosed, DegenerateC, PoleOnPath

_ORDER = 16
_MAX_PANELS = 4096


class Side(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"
    OFF = "off"


@dataclass(frozen=True)
class OrientedArc:
    """A polyline with an optional boundary-value side.

    ``Side.PLUS`` is the left of the direction of travel.
    """

    vertices: tuple
    side: Side = Side.OFF

    def __init__(self, vertices, side: Side | str = Side.OFF):
        v = tuple(complex(z) for z in vertices)
        if len(v) < 2:
            raise ValueError("an arc needs at least two vertices")
        if any(v[k] == v[k + 1] for k in range(len(v) - 1)):
            raise ValueError("consecutive vertices must be distinct")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "side", Side(side))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=complex)

    @property
    def closed(self) -> bool:
        return self.vertices[0] == self.vertices[-1]

    def reversed(self) -> "OrientedArc":
        flip = {Side.PLUS: Side.MINUS, Side.MINUS: Side.PLUS, Side.OFF: Side.OFF}
        return OrientedArc(self.vertices[::-1], flip[self.side])

    def with_side(self, side) -> "OrientedArc":
        return OrientedArc(self.vertices, side)

    def to_json(self) -> dict:
        return {"vertices": [[z.real, z.imag] for z in self.vertices], "side": self.side.value}

    @classmethod
    def from_json(cls, obj: dict) -> "OrientedArc":
        return cls([complex(re, im) for re, im in obj["vertices"]], obj.get("side", "off"))


def circle(center: complex, radius: float, n: int = 256) -> OrientedArc:
    """Counterclockwise closed polygon inscribed in a circle."""
    t = 2 * np.pi * np.arange(n + 1) / n
    z = center + radius * np.exp(1j * t)
    z[-1] = z[0]
    return OrientedArc(z)


# --------------------------------------------------------------------------
# Quadrature along a polyline with branch continuation
# --------------------------------------------------------------------------

def _is_root(f: FactoredRational, z: complex, sign: int) -> bool:
    tol = 1e-12 * f.scale
    return any(abs(z - r) <= tol and (m > 0 if sign > 0 else m < 0) for r, m in f.factors)


def _check_poles(f: FactoredRational, v: np.ndarray):
    tol = 1e-12 * f.scale
    for p in f.poles:
        for a, b in zip(v[:-1], v[1:]):
            if point_segment_distance(p, a, b) <= tol:
                raise PoleOnPath(f"pole {p!r} lies on the path")


def _check_interior_zeros(f: FactoredRational, v: np.ndarray, closed: bool):
    tol = 1e-12 * f.scale
    for z in f.zeros:
        for k, (a, b) in enumerate(zip(v[:-1], v[1:])):
            if point_segment_distance(z, a, b) > tol:
                continue
            at_start = k == 0 and abs(z - a) <= tol and not closed
            at_end = k == len(v) - 2 and abs(z - b) <= tol and not closed
            if not (at_start or at_end):
                raise BranchAmbiguity(f"zero {z!r} lies inside the path")


def _split_index(f: FactoredRational, v: np.ndarray) -> int:
    # reference segment: the one whose midpoint is farthest from the roots
    mids = 0.5 * (v[:-1] + v[1:])
    if not f.factors:
        return int(np.argmax(np.abs(np.diff(v))))
    d = np.min(np.abs(mids[:, None] - f.roots[None, :]), axis=1)
    return int(np.argmax(d))


def _pieces(v: np.ndarray, f: FactoredRational, closed: bool, j: int = 0):
    """Split segment ``j`` at its midpoint ``m``; pieces run outward from ``m``.

    Returns ``m``, the pieces leading back to ``v[0]`` and those leading on
    to ``v[-1]``, each as ``(za, zb, singular_at_zb)``.
    """
    m = 0.5 * (v[j] + v[j + 1])
    sing0 = not closed and _is_root(f, v[0], 1)
    sing_end = not closed and _is_root(f, v[-1], 1)
    back = [(m, v[j], sing0 and j == 0)]
    for k in range(j, 0, -1):
        back.append((v[k], v[k - 1], sing0 and k == 1))
    last = len(v) - 2
    fwd = [(m, v[j + 1], sing_end and j == last)]
    for k in range(j + 1, len(v) - 1):
        fwd.append((v[k], v[k + 1], sing_end and k == last))
    return m, back, fwd


def _segment_integral(f, za, zb, s_ref, npanels, sing_b):
    """``int_{za}^{zb} sqrt f`` continuing the root ``s_ref`` given at ``za``."""
    nodes, weights = segment_rule(za, zb, npanels, _ORDER, False, sing_b)
    s = s_ref
    vals = np.empty(len(nodes), dtype=complex)
    for k, z in enumerate(nodes):
        s = nearest_root(cmath.sqrt(_eval_scalar(f, complex(z))), s)
        vals[k] = s
    end = s if sing_b else nearest_root(cmath.sqrt(_eval_scalar(f, complex(zb))), s)
    return complex(np.dot(weights, vals)), end


def _polyline_integral(f, m, s_m, back, fwd, npanels):
    total = 0j
    s = s_m
    for za, zb, sing in back:
        val, s = _segment_integral(f, za, zb, s, npanels, sing)
        total -= val
    s_back = s
    s = s_m
    for za, zb, sing in fwd:
        val, s = _segment_integral(f, za, zb, s, npanels, sing)
        total += val
    return total, s, s_back


def _initial_panels(f: FactoredRational, v: np.ndarray) -> int:
    # enough panels that each one is short compared with the nearest root
    if not f.factors:
        return 1
    L = float(np.sum(np.abs(np.diff(v))))
    d = [float(point_segment_distance(r, a, b)) for r in f.roots for a, b in zip(v[:-1], v[1:])]
    d = min([x for x in d if x > 0], default=L)
    return int(min(64, max(1, math.ceil(L / max(d, 1e-3 * L)))))


def _integrate(f, m, s_m, back, fwd, v, tol=1e-10):
    n = _initial_panels(f, v)
    prev = _polyline_integral(f, m, s_m, back, fwd, n)
    while n < _MAX_PANELS:
        n *= 2
        cur = _polyline_integral(f, m, s_m, back, fwd, n)
        if abs(cur[0] - prev[0]) <= tol * (1 + abs(cur[0])):
            return cur
        prev = cur
    return cur


def _reference_value(f, start, p: complex) -> complex:
    """Root of ``f`` at ``p`` selected by ``start``."""
    if isinstance(start, CutBranch):
        return complex(start(p))
    if isinstance(start, BranchState):
        if start.anchor == p:
            return complex(start.value)
        return complex(continue_sqrt(f, [start.anchor, p], start)[-1])
    if start is None:
        return cmath.sqrt(_eval_scalar(f, p))
    raise TypeError("start must be a BranchState, a CutBranch or None")


def _side_value(f, start, m: complex, normal: complex, eps: float) -> complex:
    w = cmath.sqrt(_eval_scalar(f, m))
    v1 = _reference_value(f, start, m + eps * normal)
    v2 = _reference_value(f, start, m + 0.5 * eps * normal)
    s1, s2 = nearest_root(w, v1), nearest_root(w, v2)
    if s1 != s2 or abs(v1 - s1) > 1e-3 * abs(w) + 1e-12:
        raise BranchAmbiguity(f"side limit of sqrt f at {m!r} is not stable under halving the offset")
    return s1


def integrate_sqrt(f: FactoredRational, arc: OrientedArc, start=None) -> complex:
    """Branch-continued ``int sqrt(f) dz`` along an oriented polyline.

    Parameters
    ----------
    f : FactoredRational
    arc : OrientedArc
        The endpoints may be zeros of ``f``; nothing else on the arc may be a
        zero or a pole.  With ``side`` plus or minus the arc is treated as a
        cut and the integral uses the boundary values from that side.
    start : BranchState, CutBranch or None
        Selects the root.  A ``BranchState`` is continued in a straight line
        from its anchor to the first evaluation point; a ``CutBranch`` is
        evaluated there directly; ``None`` takes the principal root.

    Returns
    -------
    complex
    """
    v = arc.array
    _check_poles(f, v)
    _check_interior_zeros(f, v, closed=False)
    j = _split_index(f, v)
    m, back, fwd = _pieces(v, f, closed=False, j=j)
    if arc.side is Side.OFF:
        s_m = nearest_root(cmath.sqrt(_eval_scalar(f, m)), _reference_value(f, start, m))
    else:
        d = v[j + 1] - v[j]
        normal = 1j * d / abs(d)
        if arc.side is Side.MINUS:
            normal = -normal
        s_m = _side_value(f, start, m, normal, 1e-7 * f.scale)
    return _integrate(f, m, s_m, back, fwd, v)[0]


def _enclosed_parity(f: FactoredRational, loop: np.ndarray) -> int:
    w = 0
    for r, mult in f.factors:
        if mult % 2:
            w += int(winding_number(loop, r))
    return w % 2


def contour_integral_sqrt(f: FactoredRational, contour: OrientedArc, start=None) -> complex:
    """``oint sqrt(f) dz`` over a closed polyline.

    Raises
    ------
    BranchNotClosed
        If the contour winds an odd number of times, in total, around the
        odd-multiplicity roots of ``f``: continuation would return with the
        opposite sign.
    """
    v = contour.array
    if v[0] != v[-1]:
        v = np.append(v, v[0])
    _check_poles(f, v)
    _check_interior_zeros(f, v, closed=True)
    if _enclosed_parity(f, v):
        raise BranchNotClosed("the contour encloses odd total multiplicity")
    m, back, fwd = _pieces(v, f, closed=True)
    s_m = nearest_root(cmath.sqrt(_eval_scalar(f, m)), _reference_value(f, start, m))
    val, s_end, s_back = _integrate(f, m, s_m, back, fwd, v)
    if (s_end * s_back.conjugate()).real < 0:
        raise BranchNotClosed("continuation around the contour changed sign")
    return val


def encircling_contour(cut, radius: float, resolution: int = 64) -> OrientedArc:
    """Counterclockwise closed polyline at distance ``radius`` from a cut."""
    from shapely.geometry import LineString
    from shapely.geometry.polygon import orient

    v = np.asarray(cut, dtype=complex)
    poly = orient(LineString(np.column_stack([v.real, v.imag])).buffer(radius, quad_segs=resolution), 1.0)
    xy = np.asarray(poly.exterior.coords)
    return OrientedArc(xy[:, 0] + 1j * xy[:, 1])


def two_sided_identity(f: FactoredRational, cuts, radius: float, leading_sqrt=None):
    """Both sides of ``2 I = sum of oint`` for a branch of ``sqrt f`` cut along ``cuts``.

    ``I`` is the sum of plus-side integrals along the cuts.  Since the plus
    and minus boundary values are opposite, ``2 I`` equals the clockwise
    integral around each cut, which is returned as the second value.
    """
    branch = CutBranch(f, cuts, leading_sqrt)
    I = sum(integrate_sqrt(f, OrientedArc(c, Side.PLUS), branch) for c in cuts)
    loops = sum(-contour_integral_sqrt(f, encircling_contour(c, radius), branch) for c in cuts)
    return 2 * I, loops


# --------------------------------------------------------------------------
# Quantized periods
# --------------------------------------------------------------------------

@dataclass
class QuantizationResult:
    value: complex
    matched: complex | None
    admissible: list
    tolerance: float
    endpoint_ok: bool | None = None
    endpoint_values: tuple = field(default=())

    @property
    def residual(self) -> float:
        return min(abs(self.value - s) for s in self.admissible)

    def to_json(self) -> dict:
        out = {
            "value": [self.value.real, self.value.imag],
            "matched": None if self.matched is None else [self.matched.real, self.matched.imag],
            "admissible": [[s.real, s.imag] for s in self.admissible],
            "tolerance": self.tolerance,
            "residual": self.residual,
        }
        if self.endpoint_ok is not None:
            out["endpoint_ok"] = self.endpoint_ok
            out["endpoint_values"] = [[s.real, s.imag] for s in self.endpoint_values]
        return out


def _match(value: complex, multipliers) -> QuantizationResult:
    admissible = []
    for k in multipliers:
        admissible.extend([2j * math.pi * k, -2j * math.pi * k])
    tol = 1e-6 * (1 + 2 * math.pi * sum(abs(k) for k in multipliers))
    best = min(admissible, key=lambda s: abs(value - s))
    matched = best if abs(value - best) <= tol else None
    return QuantizationResult(complex(value), matched, admissible, tol)


def _orient_arc(arc: OrientedArc, start: complex, end: complex, tol: float) -> OrientedArc:
    v = arc.vertices
    if abs(v[0] - start) <= tol and abs(v[-1] - end) <= tol:
        return arc
    if abs(v[0] - end) <= tol and abs(v[-1] - start) <= tol:
        # keep the geometric side while running from start to end
        return arc.reversed()
    raise ValueError("the arc must join the two zeros")


def _snap_ends(arc: OrientedArc, start: complex, end: complex) -> OrientedArc:
    v = list(arc.vertices)
    v[0], v[-1] = start, end
    return OrientedArc(v, arc.side)


def laguerre_quantization(C: complex, arc: OrientedArc) -> QuantizationResult:
    """Plus-side period ``int (sqrt D_C)_+ / t dt`` along an arc from ``b(C)`` to ``a(C)``.

    ``sqrt D_C ~ z`` at infinity, with the cut along the arc.  The admissible
    values are ``+-2 pi i`` and ``+-2 pi i (C + 1)``.
    """
    from .families import laguerre_zeros

    C = complex(C)
    if C == -1 or C == 0:
        raise DegenerateC(f"C = {C!r} makes a zero collide with the other zero or the pole")
    a, b = laguerre_zeros(C)
    f = FactoredRational(1.0, [(a, 1), (b, 1), (0.0, -2)])
    arc = _orient_arc(arc, b, a, 1e-8 * f.scale)
    arc = _snap_ends(arc.with_side(Side.PLUS) if arc.side is Side.OFF else arc, b, a)
    branch = CutBranch(f, [arc.array], leading_sqrt=1.0)
    return _match(integrate_sqrt(f, arc, branch), [1, C + 1])


def jacobi_quantization(A: complex, B: complex, arc: OrientedArc) -> QuantizationResult:
    """Plus-side period ``int (sqrt D_AB)_+ / (t**2 - 1) dt`` from ``b`` to ``a``.

    ``sqrt D_AB ~ (A + B + 2) z`` at infinity.  Besides the match against
    ``+-2 pi i {1, A+1, B+1, A+B+1}`` the result records whether this branch
    satisfies ``sqrt D(1) = 2A`` and ``sqrt D(-1) = -2B``.
    """
    from .families import check_jacobi_params, jacobi_zeros

    A, B = complex(A), complex(B)
    check_jacobi_params(A, B)
    a, b = jacobi_zeros(A, B)
    lead = A + B + 2
    f = FactoredRational(lead ** 2, [(a, 1), (b, 1), (1.0, -2), (-1.0, -2)])
    arc = _orient_arc(arc, b, a, 1e-8 * f.scale)
    arc = _snap_ends(arc.with_side(Side.PLUS) if arc.side is Side.OFF else arc, b, a)
    cut = [arc.array]
    value = integrate_sqrt(f, arc, CutBranch(f, cut, leading_sqrt=lead))
    res = _match(value, [1, A + 1, B + 1, A + B + 1])
    D = FactoredRational(lead ** 2, [(a, 1), (b, 1)])
    sD = CutBranch(D, cut, leading_sqrt=lead)
    at1, atm1 = complex(sD(1.0)), complex(sD(-1.0))
    tol = 1e-8 * (1 + abs(A) + abs(B))
    res.endpoint_values = (at1, atm1)
    res.endpoint_ok = abs(at1 - 2 * A) <= tol and abs(atm1 + 2 * B) <= tol
    return res


@dataclass(frozen=True)
class ConditionCheck:
    value: complex
    real_part: float
    passes: bool

    def to_json(self) -> dict:
        return {"value": [self.value.real, self.value.imag],
                "real_part": self.real_part, "passes": self.passes}


def condition_check(f: FactoredRational, arc: OrientedArc, start=None) -> ConditionCheck:
    """Test ``Re int sqrt(f) dz = 0`` along ``arc`` to ``1e-6 (1 + |integral|)``."""
    val = integrate_sqrt(f, arc, start)
    return ConditionCheck(val, val.real, abs(val.real) <= 1e-6 * (1 + abs(val)))
