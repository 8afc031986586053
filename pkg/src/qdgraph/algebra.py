"""
Factored rational functions and square-root branch bookkeeping.

A quadratic differential ``q(z) dz**2`` is represented by the rational
function ``q(z) = c * prod (z - r_k) ** m_k`` in factored form, so every
critical point is known by construction.  Square roots of ``q`` are tracked
either by continuation along a path (:func:`continue_sqrt`) or through an
explicit single-valued branch on the plane minus a set of cuts
(:class:`CutBranch`).
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (BranchAmbiguity, NotDoublePole, OddDegree,
                     PoleEvaluation)


class _Infinity:
    """The point at infinity of the Riemann sphere (a tag, not a number)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def as_point(z) -> complex:
    """Coerce ``z`` (complex, real, or ``[re, im]`` pair) to a finite complex."""
    if isinstance(z, (list, tuple, np.ndarray)) and len(z) == 2:
        z = complex(float(z[0]), float(z[1]))
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite point {z!r}; use INFINITY for the point at infinity")
    return z


@dataclass(frozen=True)
class FactoredRational:
    """``coefficient * prod (z - root) ** mult``.

    Parameters
    ----------
    coefficient : complex
        Nonzero leading constant.
    factors : sequence of (root, mult)
        Pairwise distinct roots with nonzero integer multiplicities;
        negative multiplicities are poles.
    """

    coefficient: complex
    factors: tuple = field(default=())

    def __post_init__(self):
        c = complex(self.coefficient)
        if c == 0 or not cmath.isfinite(c):
            raise ValueError("coefficient must be finite and nonzero")
        facs = []
        for root, mult in self.factors:
            mult = int(mult)
            if mult == 0:
                raise ValueError("zero multiplicity")
            facs.append((as_point(root), mult))
        roots = [r for r, _ in facs]
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                if roots[i] == roots[j]:
                    raise ValueError(f"repeated root {roots[i]!r}")
        object.__setattr__(self, "coefficient", c)
        object.__setattr__(self, "factors", tuple(facs))

    @property
    def roots(self) -> np.ndarray:
        return np.array([r for r, _ in self.factors], dtype=complex)

    @property
    def mults(self) -> np.ndarray:
        return np.array([m for _, m in self.factors], dtype=int)

    @property
    def zeros(self) -> list:
        return [r for r, m in self.factors if m > 0]

    @property
    def poles(self) -> list:
        return [r for r, m in self.factors if m < 0]

    @property
    def degree(self) -> int:
        """Degree at infinity ``n = sum(mult)``; ``q ~ c z**n``."""
        return int(sum(m for _, m in self.factors))

    @property
    def scale(self) -> float:
        """``max(1, max |critical point|)``."""
        if not self.factors:
            return 1.0
        return max(1.0, float(np.max(np.abs(self.roots))))

    def __call__(self, z):
        return evaluate(self, z)

    def multiplicity_at(self, z, tol: float = 0.0) -> int:
        """Multiplicity of ``z`` as a root (0 if ``z`` is not a root)."""
        for r, m in self.factors:
            if abs(z - r) <= tol:
                return m
        return 0

    def negate(self) -> "FactoredRational":
        return FactoredRational(-self.coefficient, self.factors)

    # --- JSON --------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "coefficient": [self.coefficient.real, self.coefficient.imag],
            "factors": [{"root": [r.real, r.imag], "mult": m} for r, m in self.factors],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FactoredRational":
        try:
            c = obj["coefficient"]
            coeff = complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
            factors = [(as_point(f["root"]), int(f["mult"])) for f in obj["factors"]]
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed FactoredRational JSON: {exc}") from exc
        return cls(coeff, tuple(factors))


def evaluate(q: FactoredRational, z):
    """Evaluate ``q`` at ``z`` (scalar or array) by the factored product.

    Raises
    ------
    PoleEvaluation
        If ``z`` coincides with a root of negative multiplicity.
    """
    scalar = np.isscalar(z)
    zz = np.asarray(z, dtype=complex)
    out = np.full(zz.shape, q.coefficient, dtype=complex)
    for r, m in q.factors:
        d = zz - r
        if m < 0 and np.any(d == 0):
            raise PoleEvaluation(f"evaluation at pole {r!r}")
        out = out * d ** m
    return complex(out) if scalar else out


def _eval_scalar(q: FactoredRational, z: complex) -> complex:
    # hot path for the tracer; no pole check
    v = q.coefficient
    for r, m in q.factors:
        v *= (z - r) ** m
    return v


# --------------------------------------------------------------------------
# Branches
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BranchState:
    """A chosen value of ``sqrt(q)`` at ``anchor``."""

    anchor: complex
    value: complex

    def check(self, q: FactoredRational, rtol: float = 1e-10) -> bool:
        qa = evaluate(q, self.anchor)
        return abs(self.value ** 2 - qa) <= rtol * max(abs(qa), 1e-300)


def nearest_root(w: complex, ref: complex) -> complex:
    """Return ``w`` or ``-w``, whichever is closer to ``ref``."""
    return w if (w * ref.conjugate()).real >= 0 else -w


_MAX_BISECT = 20


def _continue_segment(q, z0, z1, v0, depth):
    w = cmath.sqrt(_eval_scalar(q, z1))
    aw, av = abs(w), abs(v0)
    dot = (w * v0.conjugate()).real
    decisive = abs(dot) >= 0.5 * aw * av and 0.5 * av <= aw <= 1.5 * av
    if decisive:
        return w if dot >= 0 else -w
    if depth >= _MAX_BISECT:
        if abs(dot) <= 1e-12 * aw * av:
            raise BranchAmbiguity(f"both roots equidistant near {z1!r}")
        return w if dot >= 0 else -w
    zm = 0.5 * (z0 + z1)
    if _eval_scalar(q, zm) == 0:
        raise BranchAmbiguity(f"path passes through a zero near {zm!r}")
    vm = _continue_segment(q, z0, zm, v0, depth + 1)
    return _continue_segment(q, zm, z1, vm, depth + 1)


def continue_sqrt(q: FactoredRational, path: Sequence[complex], start: BranchState) -> np.ndarray:
    """Continue ``sqrt(q)`` along the polyline ``path``.

    Each vertex value is the square root closest to the previous one.  A
    segment is bisected (up to 20 times) whenever ``|sqrt(q)|`` moves by more
    than half or the two candidate roots are not clearly separated.

    Parameters
    ----------
    q : FactoredRational
    path : sequence of complex
        Vertices; none may be a zero or pole of ``q``.
    start : BranchState
        Value at ``path[0]``.

    Returns
    -------
    ndarray of complex
        ``sqrt(q)`` at each vertex; the first entry is ``start.value``.
    """
    pts = np.asarray(path, dtype=complex)
    out = np.empty(len(pts), dtype=complex)
    if len(pts) == 0:
        return out
    out[0] = start.value
    v = complex(start.value)
    if v == 0:
        raise BranchAmbiguity("cannot continue from a zero of q")
    for k in range(1, len(pts)):
        z0, z1 = complex(pts[k - 1]), complex(pts[k])
        if z0 != z1:
            if _eval_scalar(q, z1) == 0:
                raise BranchAmbiguity(f"path vertex {z1!r} is a zero of q")
            v = _continue_segment(q, z0, z1, v, 0)
        out[k] = v
    return out


# --------------------------------------------------------------------------
# Local structure
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalData:
    """Local behaviour ``q(z) ~ leading * (z - point) ** order``.

    At infinity the order is that of ``q dz**2`` in the chart ``w = 1/z``
    and ``leading`` is the coefficient of the top-degree behaviour.
    """

    point: object
    order: int
    leading: complex
    residue_sq: complex | None = None


def local_data(q: FactoredRational, p) -> LocalData:
    """Order and leading coefficient of ``q dz**2`` at ``p`` (possibly INFINITY)."""
    if p is INFINITY:
        order = -(q.degree + 4)
        lead = q.coefficient
        return LocalData(INFINITY, order, lead, lead if order == -2 else None)
    p = as_point(p)
    order = 0
    lead = q.coefficient
    for r, m in q.factors:
        if r == p:
            order = m
        else:
            lead *= (p - r) ** m
    return LocalData(p, order, lead, lead if order == -2 else None)


class DoublePoleKind(enum.Enum):
    RADIAL = "radial"
    CIRCULAR = "circular"
    LOG_SPIRAL = "log-spiral"


def classify_double_pole(d: LocalData, tol: float = 1e-9) -> DoublePoleKind:
    """Radial, circular or log-spiral structure at a double pole.

    With ``r = sqrt(residue_sq)`` the trajectories are level sets of
    ``Im(r log z)``: rays when ``r`` is real, circles when ``r`` is imaginary.
    """
    if d.order != -2 or d.residue_sq is None:
        raise NotDoublePole(f"order {d.order} is not a double pole")
    r = cmath.sqrt(d.residue_sq)
    if abs(r.imag) < tol * abs(r):
        return DoublePoleKind.RADIAL
    if abs(r.real) < tol * abs(r):
        return DoublePoleKind.CIRCULAR
    return DoublePoleKind.LOG_SPIRAL


def _sqrt_near_infinity(P: FactoredRational, z: np.ndarray) -> np.ndarray:
    # sqrt(c) z^(n/2) prod (1 - r/z)^(m/2); principal powers are continuous
    # for |z| > 2 max|r| because 1 - r/z stays in the right half plane.
    n = P.degree
    out = cmath.sqrt(P.coefficient) * z ** (n // 2)
    for r, m in P.factors:
        out = out * (1 - r / z) ** (m / 2)
    return out


def residue_at_infinity_sqrt(P: FactoredRational, tol: float = 1e-10) -> complex:
    """``res_inf sqrt(P)`` for a polynomial ``P`` of even degree.

    The branch is fixed by ``sqrt(P) ~ sqrt(leading) z**(n/2)`` at infinity.
    Computed as ``(1/2 pi i)`` times the clockwise integral over a circle of
    radius ``2 max|root| + 1`` with the trapezoidal rule, doubling the node
    count until two successive values agree within ``tol``.
    """
    if any(m < 0 for _, m in P.factors):
        raise ValueError("residue_at_infinity_sqrt expects a polynomial")
    if P.degree % 2:
        raise OddDegree(f"degree {P.degree} is odd; sqrt(P) is not single-valued near infinity")
    rmax = float(np.max(np.abs(P.roots))) if P.factors else 0.0
    R = 2.0 * rmax + 1.0
    prev = None
    n = 64
    while n <= 1 << 20:
        theta = 2 * np.pi * np.arange(n) / n
        z = R * np.exp(1j * theta)
        # counterclockwise integral; residue at infinity is minus its 1/(2 pi i)
        ccw = np.sum(_sqrt_near_infinity(P, z) * 1j * z) * (2 * np.pi / n)
        val = -ccw / (2j * np.pi)
        if prev is not None and abs(val - prev) <= tol:
            return complex(val)
        prev = val
        n *= 2
    return complex(prev)


# --------------------------------------------------------------------------
# Single-valued branches on the plane minus cuts
# --------------------------------------------------------------------------

def winding_number(loop: np.ndarray, z) -> np.ndarray:
    """Winding number of the closed polygon ``loop`` around point(s) ``z``."""
    loop = np.asarray(loop, dtype=complex)
    if loop[0] != loop[-1]:
        loop = np.append(loop, loop[0])
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    d = loop[None, :] - zz[:, None]
    ang = np.angle(d[:, 1:] / d[:, :-1])
    w = np.rint(ang.sum(axis=1) / (2 * np.pi)).astype(int)
    return w if np.ndim(z) else int(w[0])


class CutBranch:
    """Single-valued ``sqrt(f)`` on the plane minus explicit cut arcs.

    Every odd-multiplicity root of ``f`` must be an endpoint of exactly one
    cut.  Each cut joins two such roots along a polyline; the branch is
    normalised at infinity by ``sqrt(f) ~ leading_sqrt * z**(n/2)``.

    The square root attached to a cut from ``p0`` to ``p1`` is
    ``(z - p0) * sqrt((z - p1)/(z - p0))`` with the principal root, whose own
    cut is the straight segment ``[p0, p1]``; multiplying by
    ``(-1)**wind(z)``, the winding number of the loop "cut followed by the
    segment back", moves the discontinuity onto the requested arc.
    """

    def __init__(self, f: FactoredRational, cuts: Sequence[Sequence[complex]],
                 leading_sqrt: complex | None = None):
        if f.degree % 2:
            raise OddDegree("sqrt(f) is not single-valued near infinity")
        self.f = f
        self.cuts = [np.asarray(c, dtype=complex) for c in cuts]
        odd = [r for r, m in f.factors if m % 2]
        ends = []
        for c in self.cuts:
            if len(c) < 2:
                raise ValueError("a cut needs at least two vertices")
            ends.extend([c[0], c[-1]])
        tol = 1e-12 * f.scale
        for r in odd:
            hits = sum(abs(e - r) <= tol for e in ends)
            if hits != 1:
                raise ValueError(f"odd root {r!r} must end exactly one cut (found {hits})")
        if len(ends) != len(odd):
            raise ValueError("cut endpoints must be the odd-multiplicity roots of f")
        if leading_sqrt is None:
            leading_sqrt = cmath.sqrt(f.coefficient)
        if abs(leading_sqrt ** 2 - f.coefficient) > 1e-10 * abs(f.coefficient):
            raise ValueError("leading_sqrt**2 must equal the coefficient of f")
        self.leading_sqrt = complex(leading_sqrt)
        self._loops = [np.append(c, c[0]) for c in self.cuts]

    def __call__(self, z):
        scalar = np.ndim(z) == 0
        zz = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.full(zz.shape, self.leading_sqrt, dtype=complex)
        for r, m in self.f.factors:
            out = out * (zz - r) ** ((m - (m % 2)) // 2)
        for c, loop in zip(self.cuts, self._loops):
            p0, p1 = c[0], c[-1]
            g = (zz - p0) * np.sqrt((zz - p1) / (zz - p0))
            wind = winding_number(loop, zz)
            out = out * g * np.where(wind % 2, -1.0, 1.0)
        return complex(out[0]) if scalar else out
