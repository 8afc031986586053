"""Exact Euclidean distances between polylines in the complex plane."""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 20


def _cross(a, b):
    return a.real * b.imag - a.imag * b.real


def _point_seg(p, a, b):
    d = b - a
    dd = (d * np.conj(d)).real
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(dd > 0, ((p - a) * np.conj(d)).real / np.where(dd > 0, dd, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.abs(p - (a + t * d))


def segment_distances(p0, p1, q0, q1) -> np.ndarray:
    """Pairwise distance between segments ``[p0, p1]`` and ``[q0, q1]`` (broadcast)."""
    d1 = _cross(p1 - p0, q0 - p0)
    d2 = _cross(p1 - p0, q1 - p0)
    d3 = _cross(q1 - q0, p0 - q0)
    d4 = _cross(q1 - q0, p1 - q0)
    crossing = (d1 * d2 < 0) & (d3 * d4 < 0)
    dist = np.minimum(
        np.minimum(_point_seg(p0, q0, q1), _point_seg(p1, q0, q1)),
        np.minimum(_point_seg(q0, p0, p1), _point_seg(q1, p0, p1)),
    )
    return np.where(crossing, 0.0, dist)


def _segments(poly):
    v = np.asarray(poly, dtype=complex).ravel()
    if len(v) == 1:
        return v, v
    return v[:-1], v[1:]


def polyline_distance(A, B) -> float:
    """Infimum of ``|x - y|`` over points ``x`` on polyline A and ``y`` on B."""
    a0, a1 = _segments(A)
    b0, b1 = _segments(B)
    best = np.inf
    rows = max(1, _CHUNK // max(len(b0), 1))
    for i in range(0, len(a0), rows):
        d = segment_distances(a0[i:i + rows, None], a1[i:i + rows, None], b0[None, :], b1[None, :])
        best = min(best, float(d.min()))
        if best == 0.0:
            break
    return best


def min_distance(A, B) -> float:
    """Smallest distance between two families of trajectories (or polylines).

    Segment-to-segment, so two polylines that cross at a non-vertex point
    are at distance zero.
    """
    if len(A) == 0 or len(B) == 0:
        raise ValueError("both families must be nonempty")
    best = np.inf
    for ta in A:
        va = getattr(ta, "vertices", ta)
        for tb in B:
            vb = getattr(tb, "vertices", tb)
            best = min(best, polyline_distance(va, vb))
            if best == 0.0:
                return 0.0
    return best


def point_polyline_distance(p, poly) -> np.ndarray:
    a0, a1 = _segments(poly)
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    out = np.empty(len(p))
    rows = max(1, _CHUNK // max(len(a0), 1))
    for i in range(0, len(p), rows):
        out[i:i + rows] = _point_seg(p[i:i + rows, None], a0[None, :], a1[None, :]).min(axis=1)
    return out


def densify(poly, spacing: float) -> np.ndarray:
    """Insert points along each segment so consecutive points are <= spacing apart."""
    v = np.asarray(poly, dtype=complex)
    if len(v) < 2:
        return v
    out = [v[:1]]
    for a, b in zip(v[:-1], v[1:]):
        n = max(1, int(np.ceil(abs(b - a) / spacing)))
        seg = a + (b - a) * np.arange(1, n + 1) / n
        seg[-1] = b
        out.append(seg)
    return np.concatenate(out)


def hausdorff_distance(A, B, spacing: float | None = None) -> float:
    """Hausdorff distance between polylines, sampling each at ``spacing``.

    Distances are measured to the other polyline's segments exactly; only
    the sup side is sampled, so the result is accurate to about ``spacing``.
    """
    A = np.asarray(getattr(A, "vertices", A), dtype=complex)
    B = np.asarray(getattr(B, "vertices", B), dtype=complex)
    if spacing is None:
        ext = max(np.ptp(A.real), np.ptp(A.imag), np.ptp(B.real), np.ptp(B.imag), 1e-300)
        spacing = 1e-4 * ext
    da = point_polyline_distance(densify(A, spacing), B).max()
    db = point_polyline_distance(densify(B, spacing), A).max()
    return float(max(da, db))
