"""Planar primitives: points, polygons, rigid placement transforms.

All lengths are millimeters and angles degrees. The board frame is
right-handed with z up; the board's top copper surface is z = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import shapely
from shapely.geometry import Polygon as _ShapelyPolygon


class Point2(NamedTuple):
    x: float
    y: float


Ring = tuple[Point2, ...]


def signed_area(ring: Sequence[Point2]) -> float:
    """Shoelace area; positive for counter-clockwise rings."""
    n = len(ring)
    acc = 0.0
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return 0.5 * acc


def _as_ring(points: Iterable[Sequence[float]]) -> Ring:
    ring = tuple(Point2(float(p[0]), float(p[1])) for p in points)
    if len(ring) > 1 and ring[0] == ring[-1]:
        ring = ring[:-1]
    return ring


@dataclass(frozen=True)
class Polygon2:
    """Polygon with optional holes; outer ring CCW, holes CW."""

    outer: Ring
    holes: tuple[Ring, ...] = ()

    def __post_init__(self) -> None:
        if len(self.outer) < 3 or any(len(h) < 3 for h in self.holes):
            raise ValueError("polygon rings need at least 3 vertices")

    @classmethod
    def from_points(cls, outer: Iterable[Sequence[float]], holes: Iterable[Iterable[Sequence[float]]] = ()) -> "Polygon2":
        """Build a polygon, normalising ring orientation."""
        ring = _as_ring(outer)
        if len(ring) >= 3 and signed_area(ring) < 0:
            ring = ring[::-1]
        hole_rings = []
        for h in holes:
            hr = _as_ring(h)
            if len(hr) >= 3 and signed_area(hr) > 0:
                hr = hr[::-1]
            hole_rings.append(hr)
        return cls(ring, tuple(hole_rings))

    @classmethod
    def rectangle(cls, x0: float, y0: float, x1: float, y1: float) -> "Polygon2":
        return cls.from_points([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])

    @property
    def area(self) -> float:
        return signed_area(self.outer) + sum(signed_area(h) for h in self.holes)

    def bbox(self) -> tuple[float, float, float, float]:
        xs = [p.x for p in self.outer]
        ys = [p.y for p in self.outer]
        return min(xs), min(ys), max(xs), max(ys)

    def is_simple(self) -> bool:
        """True when no ring self-intersects and holes sit inside the outer ring."""
        return bool(self.to_shapely().is_valid)

    def to_shapely(self) -> _ShapelyPolygon:
        return _ShapelyPolygon(self.outer, list(self.holes))


def rotate(p: Point2, degrees: float) -> Point2:
    # exact quarter turns keep integer inputs integral
    r = degrees % 360.0
    if r == 0.0:
        return Point2(p.x, p.y)
    if r == 90.0:
        return Point2(-p.y, p.x)
    if r == 180.0:
        return Point2(-p.x, -p.y)
    if r == 270.0:
        return Point2(p.y, -p.x)
    a = math.radians(r)
    c, s = math.cos(a), math.sin(a)
    return Point2(c * p.x - s * p.y, s * p.x + c * p.y)


def transform_to_board_frame(local_pts: Iterable[Sequence[float]], placement) -> list[Point2]:
    """Rotate package-local points about the origin, then translate to the placement position."""
    px, py = placement.position
    out = []
    for q in local_pts:
        r = rotate(Point2(float(q[0]), float(q[1])), placement.rotation)
        out.append(Point2(r.x + px, r.y + py))
    return out


def _on_segment(p: Point2, a: Point2, b: Point2, eps: float = 1e-12) -> bool:
    cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)
    scale = max(1.0, abs(b.x - a.x) + abs(b.y - a.y))
    if abs(cross) > eps * scale:
        return False
    return (min(a.x, b.x) - eps <= p.x <= max(a.x, b.x) + eps
            and min(a.y, b.y) - eps <= p.y <= max(a.y, b.y) + eps)


def polygon_contains(poly: Polygon2, p: Sequence[float]) -> bool:
    """Even-odd containment over all rings; boundary points count as inside."""
    pt = Point2(float(p[0]), float(p[1]))
    inside = False
    for ring in (poly.outer, *poly.holes):
        n = len(ring)
        for i in range(n):
            a, b = ring[i], ring[(i + 1) % n]
            if _on_segment(pt, a, b):
                return True
            if (a.y > pt.y) != (b.y > pt.y):
                x_cross = a.x + (pt.y - a.y) * (b.x - a.x) / (b.y - a.y)
                if pt.x < x_cross:
                    inside = not inside
    return inside


def rect_corners(cx: float, cy: float, w: float, h: float) -> list[Point2]:
    """Corners (CCW) of an axis-aligned rectangle given center and size."""
    hx, hy = w / 2.0, h / 2.0
    return [Point2(cx - hx, cy - hy), Point2(cx + hx, cy - hy), Point2(cx + hx, cy + hy), Point2(cx - hx, cy + hy)]


def circle_points(cx: float, cy: float, radius: float, segments: int) -> list[Point2]:
    """Inscribed regular polygon, CCW, first vertex on the +x axis."""
    return [
        Point2(cx + radius * math.cos(2.0 * math.pi * k / segments), cy + radius * math.sin(2.0 * math.pi * k / segments))
        for k in range(segments)
    ]


def ring_to_shapely(points: Sequence[Sequence[float]]) -> _ShapelyPolygon:
    return shapely.Polygon([(float(x), float(y)) for x, y in points])
