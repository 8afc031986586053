"""Deterministic SVG drawings of critical graphs."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .algebra import FactoredRational, _eval_scalar
from .tracer import (CLOSED, ESCAPED, HIT, HORIZONTAL, CriticalGraph,
                     TraceOptions, Trajectory, trace)

DEFAULT_STYLES = {
    "short": "stroke:#c0392b;stroke-width:2.2;fill:none",
    HIT: "stroke:#c0392b;stroke-width:2.2;fill:none",
    ESCAPED: "stroke:#1f4e9c;stroke-width:1.4;fill:none",
    CLOSED: "stroke:#1f4e9c;stroke-width:1.4;fill:none",
    "other": "stroke:#7f8c8d;stroke-width:1.4;fill:none;stroke-dasharray:4 3",
    "background": "stroke:#b8c4d6;stroke-width:0.7;fill:none",
    "zero": "fill:#000000",
    "pole": "fill:#ffffff;stroke:#000000;stroke-width:1.4",
}


@dataclass(frozen=True)
class RenderSpec:
    """Viewport in the z-plane and output size in pixels (width; height follows)."""

    center: complex = 0j
    width: float = 4.0
    height: float = 4.0
    resolution: int = 600
    background_field: bool = False
    background_grid: int = 9
    styles: dict = field(default_factory=lambda: dict(DEFAULT_STYLES))

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0 and self.resolution > 0):
            raise ValueError("viewport and resolution must be positive")

    @classmethod
    def around(cls, points, margin: float = 0.6, **kw) -> "RenderSpec":
        """Square viewport containing ``points`` with a relative margin."""
        pts = np.asarray(list(points), dtype=complex)
        lo = complex(pts.real.min(), pts.imag.min())
        hi = complex(pts.real.max(), pts.imag.max())
        c = 0.5 * (lo + hi)
        side = max(hi.real - lo.real, hi.imag - lo.imag, 1.0) * (1 + 2 * margin)
        return cls(center=c, width=side, height=side, **kw)

    @property
    def pixel_height(self) -> int:
        return max(1, int(round(self.resolution * self.height / self.width)))

    def to_pixels(self, z: np.ndarray) -> np.ndarray:
        x = (z.real - (self.center.real - self.width / 2)) / self.width * self.resolution
        y = ((self.center.imag + self.height / 2) - z.imag) / self.height * self.pixel_height
        return np.column_stack([x, y])


def _fmt(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _path(spec: RenderSpec, z: np.ndarray) -> str:
    # drop points far outside the viewport (keep one beyond each visible run)
    big = 3 * max(spec.width, spec.height)
    inside = np.abs(z - spec.center) <= big
    keep = inside | np.r_[inside[1:], False] | np.r_[False, inside[:-1]]
    xy = spec.to_pixels(z[keep])
    parts, last = [], None
    for x, y in xy:
        p = f"{_fmt(x)},{_fmt(y)}"
        if p != last:
            parts.append(p)
            last = p
    if len(parts) < 2:
        return ""
    return "M" + " L".join(parts)


def _ray_class(g: CriticalGraph, ray: Trajectory) -> str:
    t = ray.termination
    if t.kind == HIT:
        return "short"
    if t.kind in (ESCAPED, CLOSED):
        return t.kind
    return "other"


def background_trajectories(q: FactoredRational, spec: RenderSpec,
                            opts: TraceOptions | None = None) -> list:
    """Horizontal trajectories through a fixed grid of regular points."""
    opts = opts or TraceOptions.for_rational(q)
    opts = TraceOptions(opts.hit_radius, opts.escape_radius, 4 * max(spec.width, spec.height) * q.scale,
                        max_steps=1500, rel_tol=1e-6)
    n = spec.background_grid
    out = []
    tol = 1e-3 * max(spec.width, spec.height)
    for j in range(n):
        for i in range(n):
            z = complex(spec.center.real + spec.width * ((i + 0.5) / n - 0.5),
                        spec.center.imag + spec.height * ((j + 0.5) / n - 0.5))
            if any(abs(z - r) < tol for r in q.roots):
                continue
            s = cmath.sqrt(_eval_scalar(q, z))
            theta = -cmath.phase(s)
            for d in (theta, theta + np.pi):
                try:
                    out.append(trace(q, z, d, opts, HORIZONTAL))
                except Exception:  # a background curve is decoration only
                    continue
    return out


def render_graph(g: CriticalGraph, spec: RenderSpec, highlight: Trajectory | None = None,
                 title: str | None = None) -> str:
    """SVG text for a critical graph; identical inputs give identical bytes."""
    W, H = spec.resolution, spec.pixel_height
    st = spec.styles
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" style="fill:#ffffff"/>',
    ]
    if title:
        lines.append(f"<title>{title}</title>")
    if spec.background_field:
        lines.append('<g id="background">')
        for tr in background_trajectories(g.q, spec, g.options):
            d = _path(spec, tr.vertices)
            if d:
                lines.append(f'<path d="{d}" style="{st["background"]}"/>')
        lines.append("</g>")
    lines.append('<g id="critical">')
    for k, ray in enumerate(g.rays):
        d = _path(spec, ray.vertices)
        if d:
            cls = _ray_class(g, ray)
            lines.append(f'<path id="ray{k}" class="{cls}" d="{d}" style="{st[cls]}"/>')
    if highlight is not None:
        d = _path(spec, highlight.vertices)
        if d:
            lines.append(f'<path id="highlight" d="{d}" style="{st["short"]}"/>')
    lines.append("</g>")
    lines.append('<g id="points">')
    for cp in g.points:
        (x, y), = spec.to_pixels(np.array([cp.point]))
        if cp.order > 0:
            lines.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3.5" style="{st["zero"]}"/>')
        else:
            lines.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" style="{st["pole"]}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
