"""Geometric ground truth: crossing detection, uphill checking, bend counting
and bound reporting.

The crossing oracle is an exact brute force over all segment pairs from
distinct edges. A conservative numpy bounding-box prefilter prunes pairs that
provably cannot interact; every surviving pair is decided with exact rational
predicates, so the filter never changes an answer, only the running time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Optional

import numpy as np

from .drawing import PolylineDrawing
from .geometry import Point, frac, on_segment, orient, segment_intersection
from .graph import VertexOrdering

# Bend definition: interior vertex whose turn angle exceeds this many radians;
# collinear interior vertices never count.
BEND_ANGLE_EPS = 1e-9


@dataclass
class CrossingReport:
    crossings: list[tuple[Hashable, Hashable, Point]] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.crossings)


def _segment_arrays(layer: PolylineDrawing):
    segs = []
    for key, a, b in layer.segments():
        segs.append((key, a, b))
    return segs


def count_crossings(layer: PolylineDrawing) -> CrossingReport:
    """Exact contact report over all segment pairs from distinct edges.

    Contacts at a point shared because the two edges share a graph endpoint
    are excluded; every other contact (proper crossing, overlap, endpoint on
    interior, interior touch) is reported once per segment pair.

    A vectorized float prefilter (bounding boxes plus orientation straddle
    tests with conservative error bounds) discards pairs that provably cannot
    touch; all remaining pairs are classified exactly.
    """
    segs = _segment_arrays(layer)
    report = CrossingReport()
    if len(segs) < 2:
        return report

    ax = np.array([float(s[1][0]) for s in segs])
    ay = np.array([float(s[1][1]) for s in segs])
    bx = np.array([float(s[2][0]) for s in segs])
    by = np.array([float(s[2][1]) for s in segs])
    xs0, xs1 = np.minimum(ax, bx), np.maximum(ax, bx)
    ys0, ys1 = np.minimum(ay, by), np.maximum(ay, by)
    scale = max(1.0, float(np.max(np.abs(np.concatenate([xs1, ys1, -xs0, -ys0])))))
    pad = 1e-11 * scale
    floor = 1e-15 * scale * scale

    key_ids: dict[Hashable, int] = {}
    eid_list = []
    for s in segs:
        eid_list.append(key_ids.setdefault(s[0], len(key_ids)))
    eid = np.array(eid_list)

    shared_cache: dict[tuple[Hashable, Hashable], set[Point]] = {}

    def shared_endpoint_points(ka, kb) -> set[Point]:
        pair = (ka, kb)
        if pair not in shared_cache:
            na = set(layer.edge_nodes.get(ka, ()))
            nb = set(layer.edge_nodes.get(kb, ()))
            pts = {layer.points[v] for v in (na & nb) if v in layer.points}
            shared_cache[pair] = pts
        return shared_cache[pair]

    def orient_f(px, py, qx, qy, rx, ry):
        detl = (qx - px) * (ry - py)
        detr = (qy - py) * (rx - px)
        det = detl - detr
        err = 1e-13 * (np.abs(detl) + np.abs(detr)) + floor
        return det, err

    n = len(segs)
    block = 512
    for i0 in range(0, n, block):
        i1 = min(n, i0 + block)
        sl = slice(i0, i1)
        overlap = ~(
            (xs1[sl, None] + pad < xs0[None, :])
            | (xs1[None, :] + pad < xs0[sl, None])
            | (ys1[sl, None] + pad < ys0[None, :])
            | (ys1[None, :] + pad < ys0[sl, None])
        )
        tri = np.arange(n)[None, :] > np.arange(i0, i1)[:, None]
        cand = overlap & tri & (eid[sl, None] != eid[None, :])
        di, j = np.nonzero(cand)
        if len(di) == 0:
            continue
        i = di + i0
        o1, e1 = orient_f(ax[i], ay[i], bx[i], by[i], ax[j], ay[j])
        o2, e2 = orient_f(ax[i], ay[i], bx[i], by[i], bx[j], by[j])
        o3, e3 = orient_f(ax[j], ay[j], bx[j], by[j], ax[i], ay[i])
        o4, e4 = orient_f(ax[j], ay[j], bx[j], by[j], bx[i], by[i])
        same12 = (np.minimum(o1, o2) > np.maximum(e1, e2)) | (
            np.maximum(o1, o2) < -np.maximum(e1, e2)
        )
        same34 = (np.minimum(o3, o4) > np.maximum(e3, e4)) | (
            np.maximum(o3, o4) < -np.maximum(e3, e4)
        )
        keep = np.nonzero(~(same12 | same34))[0]
        for k in keep:
            ii, jj = int(i[k]), int(j[k])
            ka, a1, a2 = segs[ii]
            kb, b1, b2 = segs[jj]
            shared = [p for p in (a1, a2) if p == b1 or p == b2]
            if len(shared) == 1 and (a1 == a2) is False and (b1 == b2) is False:
                # Touch at an exactly shared endpoint: if each remaining
                # endpoint is definitively off the other segment's line, the
                # contact is exactly that point.
                p = shared[0]
                bo_is_b2 = b1 == p
                ao_is_a2 = a1 == p
                off_b = abs(o2[k]) > e2[k] if bo_is_b2 else abs(o1[k]) > e1[k]
                off_a = abs(o4[k]) > e4[k] if ao_is_a2 else abs(o3[k]) > e3[k]
                if off_a and off_b:
                    if p not in shared_endpoint_points(ka, kb):
                        report.crossings.append((ka, kb, p))
                    continue
            kind, pts = segment_intersection(a1, a2, b1, b2)
            if kind == "none":
                continue
            if kind == "point" and pts[0] in shared_endpoint_points(ka, kb):
                continue
            report.crossings.append((ka, kb, pts[0]))
    return report


@dataclass
class UphillResult:
    ok: bool
    violation: Optional[dict] = None


def check_uphill(
    drawing: PolylineDrawing, path: VertexOrdering, axis: str = "x"
) -> UphillResult:
    """Check the uphill property of a drawn path.

    The ray condition is evaluated at the critical points of the drawing:
    polyline vertices, segment midpoints, and the projections of prefix
    vertices onto later segments. Because every segment restricted to a
    shared abscissa range is linear, evaluating each earlier/later segment
    pair at the endpoints of their shared range decides the condition exactly
    over that whole critical set. A conservative float prefilter prunes pairs
    that provably cannot violate; survivors are decided with exact rationals.
    """
    n = len(path.order)
    chains: list[tuple[Point, ...]] = []
    for i in range(n - 1):
        key = ("path", i)
        if key not in drawing.chains:
            raise ValueError(f"drawing is missing path edge {i}")
        chains.append(drawing.chains[key])
    if axis == "y":
        chains = [tuple((p[1], p[0]) for p in pts) for pts in chains]
    elif axis != "x":
        raise ValueError("axis must be 'x' or 'y'")

    pieces: list[tuple[Point, Point]] = []
    for pts in chains:
        for i in range(len(pts) - 1):
            pieces.append((pts[i], pts[i + 1]))
    m = len(pieces)
    if m <= 1:
        for a, b in pieces:
            if a[0] == b[0] and b[1] < a[1]:
                return UphillResult(False, {"piece": 0, "reason": "descending vertical segment"})
        return UphillResult(True)

    for idx, (a, b) in enumerate(pieces):
        if a[0] == b[0] and b[1] < a[1]:
            return UphillResult(
                False, {"piece": idx, "reason": "descending vertical segment", "at": b}
            )

    ax = np.array([float(a[0]) for a, b in pieces])
    bx = np.array([float(b[0]) for a, b in pieces])
    ay = np.array([float(a[1]) for a, b in pieces])
    by = np.array([float(b[1]) for a, b in pieces])
    x0 = np.minimum(ax, bx)
    x1 = np.maximum(ax, bx)
    vertical = x0 == x1
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = np.where(vertical, 0.0, (by - ay) / np.where(vertical, 1.0, bx - ax))
    ymax = np.maximum(ay, by)
    ymin = np.minimum(ay, by)
    scale = max(1.0, float(np.max(np.abs(ymax))), float(np.max(np.abs(x1))))
    pad = 1e-11 * scale

    def exact_pair_violates(e: int, l: int):
        (ea, eb), (la, lb) = pieces[e], pieces[l]
        exlo, exhi = (ea[0], eb[0]) if ea[0] <= eb[0] else (eb[0], ea[0])
        lxlo, lxhi = (la[0], lb[0]) if la[0] <= lb[0] else (lb[0], la[0])
        lo, hi = max(exlo, lxlo), min(exhi, lxhi)
        if lo > hi:
            return None

        def e_val(x):
            if ea[0] == eb[0]:
                return max(frac(ea[1]), frac(eb[1]))
            t = (frac(x) - frac(ea[0])) / (frac(eb[0]) - frac(ea[0]))
            return frac(ea[1]) + t * (frac(eb[1]) - frac(ea[1]))

        def l_val(x):
            if la[0] == lb[0]:
                return min(frac(la[1]), frac(lb[1]))
            t = (frac(x) - frac(la[0])) / (frac(lb[0]) - frac(la[0]))
            return frac(la[1]) + t * (frac(lb[1]) - frac(la[1]))

        for x in (lo, hi):
            if e_val(x) > l_val(x):
                return (x, l_val(x))
        return None

    def vals_at(idx: np.ndarray, x: np.ndarray, earlier: bool) -> np.ndarray:
        lin = ay[idx] + slope[idx] * (x - ax[idx])
        cap = ymax[idx] if earlier else ymin[idx]
        return np.where(vertical[idx], cap, lin)

    block = 512
    for l0 in range(1, m, block):
        l1 = min(m, l0 + block)
        ls = np.arange(l0, l1)
        # shared x-range of each later piece against all earlier pieces e < l
        lo = np.maximum(x0[ls, None], x0[None, :l1])
        hi = np.minimum(x1[ls, None], x1[None, :l1])
        tri = np.arange(l1)[None, :] < ls[:, None]
        cand = (lo <= hi + pad) & tri
        r, e = np.nonzero(cand)
        if len(r) == 0:
            continue
        l = ls[r]
        xl = np.maximum(x0[e], x0[l])
        xh = np.minimum(x1[e], x1[l])
        d1 = vals_at(e, xl, True) - vals_at(l, xl, False)
        d2 = vals_at(e, xh, True) - vals_at(l, xh, False)
        flagged = np.maximum(d1, d2) > -pad
        for k in np.nonzero(flagged)[0]:
            ee, ll = int(e[k]), int(l[k])
            # Pieces that touch at an exactly shared point sit at difference 0
            # there; if the other end of the shared range is clearly below,
            # linearity rules out a violation without exact arithmetic.
            pe, pl = pieces[ee], pieces[ll]
            shared_xs = {float(p[0]) for p in pe if p in pl}
            ok1 = d1[k] <= -pad or (abs(d1[k]) <= pad and xl[k] in shared_xs)
            ok2 = d2[k] <= -pad or (abs(d2[k]) <= pad and xh[k] in shared_xs)
            if ok1 and ok2 and not (vertical[ee] or vertical[ll]):
                continue
            witness = exact_pair_violates(ee, ll)
            if witness is not None:
                return UphillResult(
                    False, {"piece": ll, "blocked_by": ee, "at": witness}
                )
    return UphillResult(True)


def count_bends(drawing: PolylineDrawing) -> dict[Hashable, int]:
    """Per-edge bend counts: interior vertices with turn angle > 1e-9 rad."""
    out: dict[Hashable, int] = {}
    thresh = math.sin(BEND_ANGLE_EPS) ** 2
    for key, pts in drawing.chains.items():
        bends = 0
        for i in range(1, len(pts) - 1):
            ux = frac(pts[i][0]) - frac(pts[i - 1][0])
            uy = frac(pts[i][1]) - frac(pts[i - 1][1])
            vx = frac(pts[i + 1][0]) - frac(pts[i][0])
            vy = frac(pts[i + 1][1]) - frac(pts[i][1])
            cross = ux * vy - uy * vx
            if cross == 0:
                dot = ux * vx + uy * vy
                if dot < 0:
                    bends += 1  # exact reversal is a (degenerate) bend
                continue
            # sin^2(theta) = cross^2 / (|u|^2 |v|^2) compared exactly.
            lhs = cross * cross
            rhs = (ux * ux + uy * uy) * (vx * vx + vy * vy)
            if lhs > Fraction(thresh) * rhs:
                bends += 1
        out[key] = bends
    return out


def max_bends(drawing: PolylineDrawing) -> int:
    counts = count_bends(drawing)
    return max(counts.values(), default=0)


def bound_report(mld, bounds: Optional[list[dict]] = None) -> dict:
    """Summarize a MultiLayerDrawing: per-layer crossings and bends plus
    pass/fail for every declared bound formula."""
    layers = []
    for layer in mld.layers:
        rep = count_crossings(layer)
        counts = count_bends(layer)
        layers.append(
            {
                "crossings": rep.count,
                "maxBends": max(counts.values(), default=0),
                "perEdge": [
                    {"edge": _key_str(k), "bends": counts[k]}
                    for k in sorted(counts.keys(), key=_key_sort)
                ],
            }
        )
    declared = list(mld.bounds)
    if bounds:
        declared.extend(bounds)
    bound_rows = []
    for b in declared:
        name = b["name"]
        value = b["value"]
        measured = b.get("measured")
        if measured is None:
            kind = b.get("kind", "maxBends")
            if kind == "maxBends":
                measured = max((l["maxBends"] for l in layers), default=0)
            elif kind == "crossings":
                measured = sum(l["crossings"] for l in layers)
        bound_rows.append(
            {
                "name": name,
                "value": float(value),
                "measured": float(measured),
                "pass": bool(float(measured) <= float(value)),
            }
        )
    crossings_ok = all(l["crossings"] == 0 for l in layers)
    return {
        "layers": layers,
        "bounds": bound_rows,
        "crossingFree": crossings_ok,
        "pass": crossings_ok and all(r["pass"] for r in bound_rows),
    }


def _key_str(k) -> str:
    if isinstance(k, tuple):
        return ":".join(str(x) for x in k)
    return str(k)


def _key_sort(k):
    return _key_str(k)
