"""Small 2D vector/segment helpers shared by the rest of the package."""

from __future__ import annotations

import math
from dataclasses import dataclass

# Relative tolerance below which two directions count as parallel.
PARALLEL_EPS = 1e-12


class ParallelError(ValueError):
    """Raised when intersecting two (nearly) parallel lines."""


@dataclass(frozen=True)
class Vec2:
    """Immutable 2D point/vector with finite coordinates."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"coordinates must be finite, got ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def scaled(self, k: float) -> "Vec2":
        return Vec2(k * self.x, k * self.y)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y)

    def unit(self) -> "Vec2":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize a zero vector")
        return Vec2(self.x / n, self.y / n)

    def perp(self) -> "Vec2":
        """This vector rotated +90 degrees (counterclockwise)."""
        return Vec2(-self.y, self.x)


@dataclass(frozen=True)
class Segment:
    """Directed segment with distinct endpoints."""

    a: Vec2
    b: Vec2

    def __post_init__(self):
        if self.a.x == self.b.x and self.a.y == self.b.y:
            raise ValueError("segment endpoints must be distinct")

    def direction(self) -> Vec2:
        return self.b - self.a

    def length(self) -> float:
        return self.direction().norm()


def dot(u: Vec2, v: Vec2) -> float:
    """Euclidean inner product."""
    return u.x * v.x + u.y * v.y


def cross(u: Vec2, v: Vec2) -> float:
    """z-component of the 3D cross product (signed parallelogram area)."""
    return u.x * v.y - u.y * v.x


def point_line_distance(p: Vec2, seg: Segment) -> float:
    """Unsigned distance from p to the infinite line supporting seg.

    Note: deliberately *not* clamped to the segment; see
    point_segment_distance for the clamped variant.
    """
    d = seg.direction()
    return abs(cross(d, p - seg.a)) / d.norm()


def signed_line_offset(p: Vec2, seg: Segment) -> float:
    """Signed distance from p to seg's line; positive on the left of a→b."""
    d = seg.direction()
    return cross(d, p - seg.a) / d.norm()


def point_segment_distance(p: Vec2, seg: Segment) -> float:
    """Distance from p to the closed segment (foot clamped to the ends)."""
    d = seg.direction()
    t = dot(p - seg.a, d) / dot(d, d)
    t = max(0.0, min(1.0, t))
    foot = Vec2(seg.a.x + t * d.x, seg.a.y + t * d.y)
    return (p - foot).norm()


def _orient(a: Vec2, b: Vec2, c: Vec2) -> float:
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)


def _on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool:
    """Whether p (already collinear with a-b) lies within the bounding box."""
    return (
        min(a.x, b.x) <= p.x <= max(a.x, b.x)
        and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    )


def segments_intersect(s1: Segment, s2: Segment) -> bool:
    """Whether two closed segments share at least one point.

    Handles proper crossings, endpoint touches, and collinear overlap.
    """
    a, b = s1.a, s1.b
    c, d = s2.a, s2.b
    o1 = _orient(a, b, c)
    o2 = _orient(a, b, d)
    o3 = _orient(c, d, a)
    o4 = _orient(c, d, b)

    if ((o1 > 0) != (o2 > 0) and o1 != 0 and o2 != 0
            and (o3 > 0) != (o4 > 0) and o3 != 0 and o4 != 0):
        return True
    if o1 == 0 and _on_segment(a, b, c):
        return True
    if o2 == 0 and _on_segment(a, b, d):
        return True
    if o3 == 0 and _on_segment(c, d, a):
        return True
    if o4 == 0 and _on_segment(c, d, b):
        return True
    return False


def line_intersection(p1: Vec2, d1: Vec2, p2: Vec2, d2: Vec2) -> Vec2:
    """Intersection of the lines p1 + t*d1 and p2 + u*d2.

    Raises ParallelError when the directions are parallel within
    PARALLEL_EPS (relative, scale-normalized).
    """
    denom = cross(d1, d2)
    scale = d1.norm() * d2.norm()
    if scale == 0.0:
        raise ValueError("line direction must be nonzero")
    if abs(denom) <= PARALLEL_EPS * scale:
        raise ParallelError(
            f"lines are parallel within {PARALLEL_EPS:g} (|cross| = {abs(denom):g})"
        )
    t = cross(p2 - p1, d2) / denom
    return Vec2(p1.x + t * d1.x, p1.y + t * d1.y)
