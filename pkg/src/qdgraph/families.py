"""
The Laguerre and Jacobi quadratic differentials, parameter sweeps, and the
zeros of the classical polynomials with varying parameters.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath as mp
import numpy as np

from .algebra import FactoredRational
from .detector import ShortTrajectoryReport, closed_arc, find_short_trajectory
from .errors import (ConditionABViolated, DegenerateParams, DegenerateSample,
                     DegreeTooLarge, NonConvergence, ZeroPoleCollision)
from .geometry import point_polyline_distance
from .roots import aberth
from .tracer import TraceOptions

LAGUERRE = "laguerre"
JACOBI = "jacobi"
MAX_DEGREE = 200


@dataclass(frozen=True)
class LaguerreParams:
    C: complex

    def to_json(self) -> dict:
        return {"C": [self.C.real, self.C.imag]}


@dataclass(frozen=True)
class JacobiParams:
    A: complex
    B: complex

    def to_json(self) -> dict:
        return {"A": [self.A.real, self.A.imag], "B": [self.B.real, self.B.imag]}


# --------------------------------------------------------------------------
# Quadratic differentials
# --------------------------------------------------------------------------

def laguerre_zeros(C: complex) -> tuple[complex, complex]:
    """``a, b = C + 2 +- 2 sqrt(C + 1)`` with the principal root."""
    C = complex(C)
    s = cmath.sqrt(C + 1)
    return C + 2 + 2 * s, C + 2 - 2 * s


def laguerre_qd(C) -> FactoredRational:
    """``q = -D_C(z) / z**2`` with ``D_C = z**2 - 2(C+2) z + C**2``."""
    C = complex(getattr(C, "C", C))
    if C == -1:
        raise DegenerateParams("C = -1: the two zeros coincide")
    a, b = laguerre_zeros(C)
    if C == 0 or a == 0 or b == 0:
        raise DegenerateParams("C = 0: a zero collides with the double pole at 0")
    return FactoredRational(-1.0, [(a, 1), (b, 1), (0.0, -2)])


def check_jacobi_params(A: complex, B: complex) -> None:
    for name, v in (("A+1", A + 1), ("B+1", B + 1), ("A+B+1", A + B + 1), ("A+B+2", A + B + 2)):
        if v == 0:
            raise ConditionABViolated(f"{name} = 0")


def jacobi_zeros(A: complex, B: complex) -> tuple[complex, complex]:
    """Zeros of ``D_AB``; the square root is principal."""
    A, B = complex(A), complex(B)
    check_jacobi_params(A, B)
    s = 4 * cmath.sqrt((A + 1) * (B + 1) * (A + B + 1))
    d = (A + B + 2) ** 2
    return (-A * A + B * B + s) / d, (-A * A + B * B - s) / d


def jacobi_qd(A, B=None) -> FactoredRational:
    """``q = -D_AB(z) / (z**2 - 1)**2`` in factored form."""
    if B is None:
        A, B = A.A, A.B
    A, B = complex(A), complex(B)
    a, b = jacobi_zeros(A, B)
    if a == b:
        raise DegenerateParams("the zeros of D_AB coincide")
    for z in (a, b):
        if abs(z - 1) <= 1e-12 or abs(z + 1) <= 1e-12:
            raise ZeroPoleCollision(f"zero {z!r} collides with a pole at +-1")
    return FactoredRational(-(A + B + 2) ** 2, [(a, 1), (b, 1), (1.0, -2), (-1.0, -2)])


def family_qd(family: str, param) -> FactoredRational:
    if family == LAGUERRE:
        return laguerre_qd(param)
    if family == JACOBI:
        A, B = param
        return jacobi_qd(A, B)
    raise ValueError(f"unknown family {family!r}")


def family_zeros(family: str, param) -> tuple[complex, complex]:
    if family == LAGUERRE:
        return laguerre_zeros(param)
    A, B = param
    return jacobi_zeros(A, B)


# --------------------------------------------------------------------------
# Sweeps
# --------------------------------------------------------------------------

@dataclass
class SweepResult:
    """Detector reports along a parameter path.

    ``signatures`` holds, per found sample, the homotopy signature of its
    short trajectory carried back to the first sample's endpoints (see
    :func:`sweep`); ``signature_constant`` compares those.
    """

    family: str
    samples: list = field(default_factory=list)
    dichotomy_ok: bool = True
    signature_constant: bool = True
    signatures: list = field(default_factory=list)

    @property
    def all_found(self) -> bool:
        return all(r.found for _, r in self.samples)

    def to_json(self) -> dict:
        def par(p):
            if isinstance(p, tuple):
                return [[complex(x).real, complex(x).imag] for x in p]
            p = complex(p)
            return [p.real, p.imag]

        return {
            "family": self.family,
            "dichotomy_ok": self.dichotomy_ok,
            "signature_constant": self.signature_constant,
            "samples": [{"parameter": par(p), "found": r.found, "resolved": r.resolved,
                         "distance": r.distance,
                         "signature": None if sig is None else sig.to_json(),
                         "local_signature": None if r.signature is None else r.signature.to_json()}
                        for (p, r), sig in zip(self.samples, self.signatures)],
        }


def _lerp(p0, p1, t: float):
    if isinstance(p0, tuple):
        return tuple(x + (y - x) * t for x, y in zip(p0, p1))
    return p0 + (p1 - p0) * t


def _track_zeros(family: str, p0, p1, prev: tuple, poles, depth: int = 0) -> list:
    """Zero pairs along the straight parameter step ``p0 -> p1``.

    Bisects until neither zero moves by more than a tenth of its distance to
    the nearest pole, and matches labels by proximity so that a jump of the
    principal square root does not swap the zeros.
    """
    a, b = family_zeros(family, p1)
    if abs(a - prev[0]) + abs(b - prev[1]) > abs(a - prev[1]) + abs(b - prev[0]):
        a, b = b, a
    gap = min([abs(z - p) for z in prev for p in poles], default=math.inf)
    step = max(abs(a - prev[0]), abs(b - prev[1]))
    if step <= 0.1 * gap or depth >= 24:
        return [(a, b)]
    mid = _lerp(p0, p1, 0.5)
    first = _track_zeros(family, p0, mid, prev, poles, depth + 1)
    return first + _track_zeros(family, mid, p1, first[-1], poles, depth + 1)


def _oriented_arc(rep: ShortTrajectoryReport, start: complex, end: complex) -> np.ndarray:
    tr = rep.trajectory
    v = closed_arc(tr, end if abs(tr.start - start) <= abs(tr.start - end) else start).copy()
    if abs(v[0] - start) > abs(v[0] - end):
        v = v[::-1]
    v[0], v[-1] = start, end
    return v


def sweep(family: str, path: Sequence, opts: TraceOptions | None = None) -> SweepResult:
    """Run the short-trajectory detector at each parameter along ``path``.

    ``dichotomy_ok`` holds when ``found`` takes one value over all resolved
    samples.  Homotopy signatures use fixed cuts, so they would change
    whenever a moving zero crosses a cut even though the trajectory deforms
    continuously.  Each found trajectory is therefore extended at both ends
    by the paths its endpoints follow back to the first sample, and the
    signatures of these fixed-endpoint arcs are compared.
    """
    from .detector import homotopy_signature

    reports: list[tuple[object, ShortTrajectoryReport]] = []
    qs = []
    for k, p in enumerate(path):
        try:
            q = family_qd(family, p)
        except DegenerateParams as exc:
            raise DegenerateSample(f"sample {k} ({p!r}): {exc}") from exc
        qs.append(q)
    if not qs:
        return SweepResult(family)
    poles = qs[0].poles
    tracked = [family_zeros(family, path[0])]
    trail_a, trail_b = [tracked[0][0]], [tracked[0][1]]
    trails = [(list(trail_a), list(trail_b))]
    for k in range(1, len(path)):
        pairs = _track_zeros(family, path[k - 1], path[k], tracked[-1], poles)
        tracked.append(pairs[-1])
        trail_a.extend(a for a, _ in pairs)
        trail_b.extend(b for _, b in pairs)
        trails.append((list(trail_a), list(trail_b)))

    signatures = []
    for (p, q), (a, b), (ta, tb) in zip(zip(path, qs), tracked, trails):
        o = opts if opts is not None else TraceOptions.for_rational(q)
        rep = find_short_trajectory(q, a, b, o)
        reports.append((p, rep))
        if rep.found:
            arc = np.concatenate([ta[:-1], _oriented_arc(rep, a, b), tb[::-1][1:]])
            signatures.append(homotopy_signature(arc, poles))
        else:
            signatures.append(None)
    resolved = {r.found for _, r in reports if r.resolved}
    sigs = {s for s in signatures if s is not None}
    return SweepResult(family, reports, len(resolved) <= 1, len(sigs) <= 1, signatures)


# --------------------------------------------------------------------------
# Classical polynomials with varying parameters
# --------------------------------------------------------------------------

def gen_binomial(x, j: int):
    """``binom(x, j)`` for non-integer ``x`` as a product, no factorials.

    Works for floats and for mpmath numbers alike.
    """
    out = x * 0 + 1
    for i in range(1, j + 1):
        out = out * (x - j + i) / i
    return out


def _check_degree(n: int):
    if n < 1:
        raise ValueError("degree must be positive")
    if n > MAX_DEGREE:
        raise DegreeTooLarge(f"n = {n} exceeds {MAX_DEGREE}")


def _dps(n: int) -> int:
    # the explicit sums cancel catastrophically; about one digit per degree
    # is lost, so carry that many on top of double precision
    return 30 + 2 * n


class _MPPoly:
    """``p(z) = pre(z) * sum c_k t(z)**k`` evaluated in extended precision."""

    def __init__(self, coeffs, to_t, pre, dps):
        self.c = coeffs
        self.to_t = to_t
        self.pre = pre
        self.dps = dps

    def _eval(self, z):
        t, dt = self.to_t(z)
        P, dP = mp.mpc(0), mp.mpc(0)
        for ck in reversed(self.c):
            dP = dP * t + P
            P = P * t + ck
        g, dg = self.pre(z)
        return g * P, dg * P + g * dP * dt

    def _abs_sum(self, z):
        t, _ = self.to_t(z)
        g, _ = self.pre(z)
        acc = mp.mpf(0)
        for ck in reversed(self.c):
            acc = acc * abs(t) + abs(ck)
        return abs(g) * acc

    def newton(self, zs):
        out = np.empty(len(zs), dtype=complex)
        with mp.workdps(self.dps):
            for i, z in enumerate(zs):
                v, d = self._eval(mp.mpc(complex(z)))
                out[i] = complex(v / d) if d != 0 else 0.0
        return out

    def relative_residual(self, zs):
        out = np.empty(len(zs))
        with mp.workdps(self.dps):
            for i, z in enumerate(zs):
                zz = mp.mpc(complex(z))
                out[i] = float(abs(self._eval(zz)[0]) / self._abs_sum(zz))
        return out


def _solve(poly: _MPPoly, n: int, center: complex, radius: float) -> np.ndarray:
    z = aberth(poly.newton, n, center, radius)
    z = z - poly.newton(z)
    if np.any(poly.relative_residual(z) > 1e-10):
        raise NonConvergence("roots could not be polished to the residual tolerance")
    return z[np.lexsort((z.imag, z.real))]


def laguerre_polynomial_zeros(n: int, C: float) -> np.ndarray:
    """Zeros of ``z -> L_n^{nC}(n z)``.

    Uses ``L_n^{alpha}(w) = sum binom(n + alpha, n - k) (-w)**k / k!`` with
    ``w = n z``, summed in extended precision: in double precision the sum
    cancels so badly that the computed roots are meaningless by ``n = 40``.
    """
    _check_degree(n)
    with mp.workdps(_dps(n)):
        top = n + n * mp.mpf(C)
        c, fact = [], mp.mpf(1)
        for k in range(n + 1):
            if k:
                fact *= k
            c.append(gen_binomial(top, n - k) * (-n) ** k / fact)
        center = complex(-c[n - 1] / (n * c[n]))
        poly = _MPPoly(c, lambda z: (z, 1), lambda z: (1, 0), _dps(n))
        with mp.workdps(_dps(n)):
            radius = float(abs(poly._eval(mp.mpc(center))[0] / c[n]) ** (mp.mpf(1) / n))
    return _solve(poly, n, center, max(radius, 1e-3))


def jacobi_polynomial_zeros(n: int, A: float, B: float) -> np.ndarray:
    """Zeros of ``P_n^{(nA, nB)}`` from the sum over ``(z-1)**k (z+1)**(n-k)``.

    Written as ``(z+1)**n sum c_k t**k`` with ``t = (z-1)/(z+1)`` and
    evaluated in extended precision.
    """
    _check_degree(n)
    with mp.workdps(_dps(n)):
        nA, nB = n * mp.mpf(A), n * mp.mpf(B)
        c = [gen_binomial(n + nA, n - k) * gen_binomial(n + nB, k) / mp.mpf(2) ** n
             for k in range(n + 1)]

    def to_t(z):
        return (z - 1) / (z + 1), 2 / (z + 1) ** 2

    def pre(z):
        return (z + 1) ** n, n * (z + 1) ** (n - 1)

    poly = _MPPoly(c, to_t, pre, _dps(n))
    return _solve(poly, n, 0.0, 1.0)


@dataclass(frozen=True)
class OverlayReport:
    fraction: float
    n: int
    tube: float
    empty: bool = False

    def to_json(self) -> dict:
        return {"fraction": self.fraction, "n": self.n, "tube": self.tube, "empty": self.empty}


def zero_measure_overlay(zeros, trajectory, tube: float = 0.1) -> OverlayReport:
    """Fraction of ``zeros`` within ``tube`` of a trajectory polyline.

    An empty zero set gives fraction 1.0 with ``empty`` set.
    """
    if tube <= 0:
        raise ValueError("tube must be positive")
    zeros = np.asarray(zeros, dtype=complex).ravel()
    if len(zeros) == 0:
        return OverlayReport(1.0, 0, tube, True)
    poly = np.asarray(getattr(trajectory, "vertices", trajectory), dtype=complex)
    d = point_polyline_distance(zeros, poly)
    return OverlayReport(float(np.mean(d <= tube)), len(zeros), tube)
