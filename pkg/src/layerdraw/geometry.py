"""Exact rational plane geometry used by the layout and validation code.

All constructions in this package produce points with rational coordinates,
so every predicate here is decided exactly with integer/Fraction arithmetic.
Floating point appears only in conservative prefilters (see validate.py).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Coord = Union[int, Fraction]
Point = tuple[Coord, Coord]


def frac(x: Coord) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the signed area of triangle (a, b, c): +1 ccw, -1 cw, 0 collinear."""
    det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (det > 0) - (det < 0)


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True iff p lies on the closed segment [a, b] (collinearity included)."""
    if orient(a, b, p) != 0:
        return False
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def segment_intersection(
    a: Point, b: Point, c: Point, d: Point
) -> tuple[str, list[Point]]:
    """Classify the intersection of closed segments [a,b] and [c,d].

    Returns (kind, points) where kind is one of:
      "none"    -- disjoint
      "point"   -- exactly one common point (crossing or touching)
      "overlap" -- collinear segments sharing more than one point; the two
                   extreme shared points are returned.
    """
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)

    if o1 != o2 and o3 != o4 and o1 != 0 and o2 != 0 and o3 != 0 and o4 != 0:
        # Proper crossing: solve for the intersection point exactly.
        ax, ay, bx, by = frac(a[0]), frac(a[1]), frac(b[0]), frac(b[1])
        cx, cy, dx, dy = frac(c[0]), frac(c[1]), frac(d[0]), frac(d[1])
        denom = (bx - ax) * (dy - cy) - (by - ay) * (dx - cx)
        t = ((cx - ax) * (dy - cy) - (cy - ay) * (dx - cx)) / denom
        px = ax + t * (bx - ax)
        py = ay + t * (by - ay)
        return "point", [(px, py)]

    if o1 == 0 and o2 == 0 and o3 == 0 and o4 == 0:
        # Collinear: project on the dominant axis and intersect ranges.
        axis = 0 if max(a[0], b[0], c[0], d[0]) - min(a[0], b[0], c[0], d[0]) >= max(
            a[1], b[1], c[1], d[1]
        ) - min(a[1], b[1], c[1], d[1]) else 1
        s1 = sorted([a, b], key=lambda p: p[axis])
        s2 = sorted([c, d], key=lambda p: p[axis])
        lo = max(s1[0], s2[0], key=lambda p: p[axis])
        hi = min(s1[1], s2[1], key=lambda p: p[axis])
        if lo[axis] > hi[axis]:
            return "none", []
        if lo[axis] == hi[axis]:
            return "point", [lo]
        return "overlap", [lo, hi]

    # Non-collinear touching cases: an endpoint of one lies on the other.
    touch: list[Point] = []
    for p, (u, v) in ((c, (a, b)), (d, (a, b)), (a, (c, d)), (b, (c, d))):
        if on_segment(p, u, v) and p not in touch:
            touch.append(p)
    if not touch:
        return "none", []
    # Distinct endpoints may coincide geometrically; dedupe handled above.
    return "point", [touch[0]]


def bboxes_overlap(a: Point, b: Point, c: Point, d: Point) -> bool:
    return not (
        max(a[0], b[0]) < min(c[0], d[0])
        or max(c[0], d[0]) < min(a[0], b[0])
        or max(a[1], b[1]) < min(c[1], d[1])
        or max(c[1], d[1]) < min(a[1], b[1])
    )


def y_at(a: Point, b: Point, x: Coord) -> Fraction:
    """Height of the non-vertical segment/line (a, b) at abscissa x."""
    ax, ay, bx, by = frac(a[0]), frac(a[1]), frac(b[0]), frac(b[1])
    if ax == bx:
        raise ValueError("vertical segment has no unique height")
    t = (frac(x) - ax) / (bx - ax)
    return ay + t * (by - ay)


def dedupe_collinear(points: Sequence[Point]) -> list[Point]:
    """Drop repeated points and interior vertices collinear with their neighbors."""
    cleaned: list[Point] = []
    for p in points:
        if cleaned and cleaned[-1] == p:
            continue
        cleaned.append(p)
    out: list[Point] = []
    for p in cleaned:
        while len(out) >= 2 and orient(out[-2], out[-1], p) == 0:
            # Keep monotone chains simple: middle point is redundant only if
            # it lies between its neighbors, otherwise the chain backtracks.
            if on_segment(out[-1], out[-2], p):
                out.pop()
            else:
                break
        out.append(p)
    return out


def polyline_length_ok(points: Iterable[Point]) -> bool:
    return len(list(points)) >= 2
