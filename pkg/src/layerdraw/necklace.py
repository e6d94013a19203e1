"""Necklace drawings over grouped point sets and the sublinear-bend t-layer
construction.

Points sit in contiguous x-groups separated by wide gaps. A smart labelling
makes each group's labels increase (rightward) or decrease (leftward) in x,
so at any moment of the incremental construction the placed points of a
group form one run at its directional end. Every chain travels between two
bands per group: a high band just above the group's points (over placed
columns) and a low band just below (under unplaced columns), switching bands
in the single boundary gap of the group through a private corridor strip.
Band heights and corridor positions are ordered by the chains' insertion
keys, which keeps distinct chains disjoint at every abscissa; anchor
connections fan out of their point, and arrivals approach from strictly
below. Passing one intermediate group costs at most four bends.

Edges of a layer that do not lie on its spinal path are routed through left
or right terminal ports exactly as in the arc construction, and spine
crossing edges travel terminal-to-terminal as bridge chains inserted between
the events of their crossing slot. The scaffolding path edge they cross is
never emitted as a real edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Optional

from .bookembed import BookEmbedding, monotone_book_embedding, spinal_path
from .drawing import MultiLayerDrawing, PolylineDrawing, transpose_drawing
from .geometry import Point, frac
from .graph import Graph, LayerDecomposition, VertexOrdering, validate_layer_decomposition
from .monoseq import (
    MonotonePartition,
    build_kn_group,
    partition_monotone_capped,
    partition_tuples,
    tuple_part_bound,
)
from .arc import InvalidDecomposition

# Documented additive constants (see README): necklace path edges stay within
# 4(k-2) + C3 bends; full edges of the sublinear construction stay within
# C4 * max(k_x, k_y) + C5.
C3_NECKLACE = 8
C4_SUBLINEAR = 12
C5_SUBLINEAR = 40

TERM_LEFT = 0
TERM_RIGHT = 1


class NotANecklace(ValueError):
    pass


@dataclass(frozen=True)
class GroupedPointSet:
    """Columns in increasing x, partitioned into contiguous groups."""

    points: tuple[Point, ...]
    ranges: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def k(self) -> int:
        return len(self.ranges)

    def group_of(self, col: int) -> int:
        for gi, (a, b) in enumerate(self.ranges):
            if a <= col < b:
                return gi
        raise IndexError(col)


def group_directions(gps: GroupedPointSet, label_of_col: list[int]) -> list[str]:
    dirs = []
    for a, b in gps.ranges:
        labs = [label_of_col[c] for c in range(a, b)]
        if labs == sorted(labs):
            dirs.append("rightward")
        elif labs == sorted(labs, reverse=True):
            dirs.append("leftward")
        else:
            raise NotANecklace(f"labels {labs} not monotone within a group")
    return dirs


@dataclass
class _Chain:
    key: tuple
    cutoff: int
    end_a: tuple  # ("col", idx) | ("term", side)
    end_b: tuple
    ident: Hashable
    points: list[Point] = field(default_factory=list)
    ports: dict[int, int] = field(default_factory=dict)


class _NecklaceSchedule:
    """Band/corridor scheduler shared by path, terminal and bridge chains."""

    def __init__(self, gps: GroupedPointSet, label_of_col: list[int]):
        self.gps = gps
        self.lab = list(label_of_col)
        self.dirs = group_directions(gps, self.lab)
        self.chains: list[_Chain] = []
        n = gps.n
        xs = [frac(p[0]) for p in gps.points]
        self.xs = xs
        gapw = max(Fraction(n), Fraction(1))
        self.term_x = {TERM_LEFT: xs[0] - gapw, TERM_RIGHT: xs[-1] + gapw}
        ys = [frac(p[1]) for p in gps.points]
        self.ymin_all = min(ys)
        self.gband: list[tuple[Fraction, Fraction]] = []
        for a, b in gps.ranges:
            gy = [ys[c] for c in range(a, b)]
            self.gband.append((min(gy), max(gy)))

    def _end_x(self, end) -> Fraction:
        if end[0] == "col":
            return self.xs[end[1]]
        return self.term_x[end[1]]

    def add(self, c: _Chain) -> None:
        self.chains.append(c)

    # -- band levels ------------------------------------------------------

    def _H(self, gi: int, rank: int) -> Fraction:
        return self.gband[gi][1] + 1 + Fraction(rank + 1, self.nchains + 1)

    def _L(self, gi: int, rank: int) -> Fraction:
        return self.gband[gi][0] - 2 + Fraction(rank + 1, self.nchains + 1)

    def _Y(self, gi: int, rank: int) -> Fraction:
        # approach level: strictly between the low band and the group's points
        return self.gband[gi][0] - 1 + Fraction(rank + 1, self.nchains + 1)

    def _band(self, c: "_Chain", col: int) -> str:
        return "H" if self.lab[col] <= c.cutoff else "L"

    def run(self) -> None:
        self.chains.sort(key=lambda c: c.key)
        self.nchains = len(self.chains)
        self.rank_of = {id(c): i for i, c in enumerate(self.chains)}

        # Terminal ports ordered by key.
        per_term: dict[int, list[_Chain]] = {TERM_LEFT: [], TERM_RIGHT: []}
        for c in self.chains:
            for end in (c.end_a, c.end_b):
                if end[0] == "term":
                    per_term[end[1]].append(c)
        self.port_points: dict[tuple[int, int], Point] = {}
        self.port_count = {side: len(per_term[side]) for side in per_term}
        for side, lst in per_term.items():
            J = len(lst)
            if J == 0:
                continue
            eta = Fraction(1, J + 1)
            base = self.ymin_all - 3
            for kk, c in enumerate(lst, start=1):
                c.ports[side] = kk
                self.port_points[(side, kk)] = (self.term_x[side], base + kk * eta)

        # Pass 1: corridor users per gap, in key order.
        plans = [self._plan(c) for c in self.chains]
        self.users: dict[tuple, list[int]] = {}
        for ci, plan in enumerate(plans):
            for step in plan:
                if step[0] == "corridor":
                    self.users.setdefault(step[1], []).append(ci)

        # Pass 2: emit geometry.
        for ci, (c, plan) in enumerate(zip(self.chains, plans)):
            c.points = self._emit(c, ci, plan)

    # -- planning -----------------------------------------------------------

    def _plan(self, c: _Chain) -> list[tuple]:
        """Symbolic left-to-right plan: a list of steps among
        ("anchor", end, side_of_journey), ("wall", gi, which, col),
        ("corridor", gap_key, shape), ("port", side)."""
        xa, xb = self._end_x(c.end_a), self._end_x(c.end_b)
        if xa <= xb:
            left_end, right_end = c.end_a, c.end_b
        else:
            left_end, right_end = c.end_b, c.end_a
        steps: list[tuple] = []

        if left_end[0] == "term":
            steps.append(("port", left_end[1]))
        else:
            steps.extend(self._anchor_steps(c, left_end[1], going="right"))

        lo_x = self._end_x(left_end)
        hi_x = self._end_x(right_end)
        for gi, (a, b) in enumerate(self.gps.ranges):
            cols = [
                col
                for col in range(a, b)
                if lo_x < self.xs[col] < hi_x
            ]
            if not cols:
                continue
            steps.append(("wall", gi, "in", cols[0]))
            # at most one band change inside the covered run
            for idx in range(len(cols) - 1):
                b1 = self._band(c, cols[idx])
                b2 = self._band(c, cols[idx + 1])
                if b1 != b2:
                    steps.append(
                        ("corridor", (cols[idx], cols[idx + 1]), (b1, b2, gi))
                    )
            steps.append(("wall", gi, "out", cols[-1]))

        if right_end[0] == "term":
            steps.append(("port", right_end[1]))
        else:
            steps.extend(self._anchor_steps(c, right_end[1], going="left"))
        return steps

    def _anchor_steps(self, c: _Chain, col: int, going: str) -> list[tuple]:
        """Connection between an anchor column and the rest of the journey.
        ``going`` is the direction of travel away from the anchor."""
        gi = self.gps.group_of(col)
        a, b = self.gps.ranges[gi]
        if going == "right":
            run = list(range(col + 1, b))
            gap = (col, col + 1) if run else None
        else:
            run = list(range(a, col))
            gap = (col - 1, col) if run else None
        steps: list[tuple] = [("anchor", col)]
        if not run:
            return steps
        placed = self._band(c, run[0]) == "H"
        # By the prefix property the whole side run shares one placement.
        steps.append(("corridor", gap, ("anchor", going, placed, gi)))
        return steps

    # -- emission -----------------------------------------------------------

    def _corridor_x(self, gap_key: tuple, ci: int, gi: int) -> tuple[Fraction, Fraction]:
        lst = self.users[gap_key]
        u = lst.index(ci)
        U = len(lst)
        xl = self.xs[gap_key[0]]
        xr = self.xs[gap_key[1]]
        w = xr - xl
        if self.dirs[gi] == "rightward":
            xc = xl + w * Fraction(u + 1, U + 1)
        else:
            xc = xr - w * Fraction(u + 1, U + 1)
        gamma = w / (4 * (U + 1))
        return xc, gamma

    def _emit(self, c: _Chain, ci: int, plan: list[tuple]) -> list[Point]:
        pts: list[Point] = []
        rank = ci
        pending_anchor: Optional[int] = None

        def push(p: Point) -> None:
            if not pts or pts[-1] != p:
                pts.append(p)

        i = 0
        while i < len(plan):
            step = plan[i]
            if step[0] == "port":
                side = step[1]
                push(self.port_points[(side, c.ports[side])])
            elif step[0] == "anchor":
                col = step[1]
                p = self.gps.points[col]
                push((frac(p[0]), frac(p[1])))
            elif step[0] == "wall":
                _, gi, which, col = step
                lv = self._H(gi, rank) if self._band(c, col) == "H" else self._L(gi, rank)
                a, b = self.gps.ranges[gi]
                if which == "in":
                    prev_x = self.xs[a - 1] if a > 0 else self.term_x[TERM_LEFT]
                    wall_x = self.xs[a] - (self.xs[a] - prev_x) / 3
                else:
                    nxt_x = (
                        self.xs[b] if b < self.gps.n else self.term_x[TERM_RIGHT]
                    )
                    wall_x = self.xs[b - 1] + (nxt_x - self.xs[b - 1]) / 3
                push((wall_x, lv))
            elif step[0] == "corridor":
                gap_key, shape = step[1], step[2]
                if shape[0] == "anchor":
                    _, going, placed, gi = shape
                    xc, gamma = self._corridor_x(gap_key, ci, gi)
                    ystar = self._Y(gi, rank)
                    if placed:
                        # single corner up to the high band
                        push((xc, self._H(gi, rank)))
                    else:
                        if going == "right":
                            push((xc - gamma, ystar))
                            push((xc + gamma, self._L(gi, rank)))
                        else:
                            push((xc + gamma, self._L(gi, rank)))
                            push((xc - gamma, ystar))
                else:
                    b1, b2, gi = shape
                    xc, gamma = self._corridor_x(gap_key, ci, gi)
                    l1 = self._H(gi, rank) if b1 == "H" else self._L(gi, rank)
                    l2 = self._H(gi, rank) if b2 == "H" else self._L(gi, rank)
                    push((xc - gamma, l1))
                    push((xc + gamma, l2))
            i += 1

        # orient the polyline from end_a to end_b
        xa = self._end_x(c.end_a)
        if pts and frac(pts[0][0]) != frac(xa):
            pts.reverse()
        return pts


# ---------------------------------------------------------------------------
# Lemma-level operation
# ---------------------------------------------------------------------------


def draw_necklace(
    gps: GroupedPointSet, labelling: VertexOrdering, axis: str = "x"
) -> PolylineDrawing:
    """Uphill drawing of the necklace p_1..p_n of a smart labelling.

    ``labelling.order[i]`` is the column holding label i. Bends per edge stay
    within 4(k-2) + C3_NECKLACE. Raises NotANecklace when some group's labels
    are not monotone. axis="y" draws the transposed problem and transposes
    the output back, giving exact coordinate equality with the x-axis case.
    """
    if axis == "y":
        tps = GroupedPointSet(
            tuple((p[1], p[0]) for p in gps.points), gps.ranges
        )
        out = draw_necklace(tps, labelling, "x")
        return transpose_drawing(out)
    if axis != "x":
        raise ValueError("axis must be 'x' or 'y'")

    n = gps.n
    label_of_col = [0] * n
    for lab, col in enumerate(labelling.order):
        label_of_col[col] = lab
    sched = _NecklaceSchedule(gps, label_of_col)
    for i in range(n - 1):
        sched.add(
            _Chain(
                key=(i + 1, 0, 0),
                cutoff=i,
                end_a=("col", labelling.order[i]),
                end_b=("col", labelling.order[i + 1]),
                ident=("path", i),
            )
        )
    sched.run()
    d = PolylineDrawing()
    for i in range(n):
        d.points[("node", i)] = gps.points[labelling.order[i]]
    for c in sched.chains:
        d.add_chain(c.ident, ("node", c.ident[1]), ("node", c.ident[1] + 1), c.points)
    d.meta["gps"] = gps
    return d


# ---------------------------------------------------------------------------
# Vertex placement for the t-layer construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlacedVertices:
    points: dict[int, Point]  # vertex -> position
    x_gps: GroupedPointSet
    x_col_of_vertex: dict[int, int]
    y_gps: Optional[GroupedPointSet]
    y_col_of_vertex: Optional[dict[int, int]]
    k_x: int
    k_y: int
    kappa_x: int
    kappa_y: int


def _half_group(paths: list[VertexOrdering], n: int):
    """Group a half's vertices: the first path supplies the free ordering, the
    remaining paths the tuple dimensions for the monotone partition."""
    free = paths[0]
    seq_vertices = list(free.order)
    if len(paths) == 1:
        parts = MonotonePartition(tuple(range(n)), (tuple(range(n)),))
    else:
        rows = [
            tuple(p.pos[v] for p in paths[1:])
            for v in seq_vertices
        ]
        parts = partition_tuples(rows)
    # Parts index into the free-path sequence; keep that indexing and
    # re-express the tracked paths in sequence space.
    tracked = []
    for p in paths:
        seq_sorted = sorted(range(n), key=lambda i: p.pos[seq_vertices[i]])
        tracked.append(VertexOrdering.from_order(seq_sorted))
    kn, slot_of_seq = build_kn_group(parts, tracked)
    col_of_vertex = {seq_vertices[i]: slot_of_seq[i] for i in range(n)}
    return kn, col_of_vertex, parts


def place_vertices(paths: list[VertexOrdering], t: int) -> PlacedVertices:
    """Shared vertex locations for t >= 3 spinal paths.

    The first ceil(t/2) paths shape the x-axis grouping, the rest the y-axis;
    with t = 3 the single y path is drawn straight, so y-coordinates follow
    its positions directly.
    """
    if t < 3 or len(paths) != t:
        raise ValueError("need t >= 3 paths")
    n = len(paths[0].order)
    hx = math.ceil(t / 2)
    xps, yps = paths[:hx], paths[hx:]
    kn_x, xcol, _ = _half_group(xps, n)

    def col_to_coord(kn, col: int) -> int:
        gi = None
        for g, (a, b) in enumerate(kn.ranges):
            if a <= col < b:
                gi = g
                break
        a, b = kn.ranges[gi]
        return 2 * gi * n + (col - a)

    xs = {v: col_to_coord(kn_x, xcol[v]) for v in xcol}

    if t == 3:
        ys = {v: yps[0].pos[v] for v in range(n)}
        y_gps = None
        ycol = None
        k_y = 1
        kappa_y = 0
    else:
        kn_y, ycol, _ = _half_group(yps, n)
        ys = {v: col_to_coord(kn_y, ycol[v]) for v in ycol}
        k_y = kn_y.k
        kappa_y = len(yps) - 1

    points = {v: (Fraction(xs[v]), Fraction(ys[v])) for v in range(n)}

    def build_gps(kn, col_of, coord_index: int) -> GroupedPointSet:
        cols = sorted(col_of.values())
        pts = []
        inv = {c: v for v, c in col_of.items()}
        for c in range(len(cols)):
            v = inv[c]
            pts.append(points[v] if coord_index == 0 else (points[v][1], points[v][0]))
        return GroupedPointSet(tuple(pts), kn.ranges)

    x_gps = build_gps(kn_x, xcol, 0)
    y_gps = build_gps(kn_y, ycol, 1) if t >= 4 else None
    return PlacedVertices(
        points=points,
        x_gps=x_gps,
        x_col_of_vertex=xcol,
        y_gps=y_gps,
        y_col_of_vertex=ycol,
        k_x=kn_x.k,
        k_y=k_y,
        kappa_x=hx - 1,
        kappa_y=kappa_y,
    )


# ---------------------------------------------------------------------------
# Full layers on a grouped point set
# ---------------------------------------------------------------------------


def _draw_grouped_layer(
    be: BookEmbedding, gps: GroupedPointSet, col_of_vertex: dict[int, int]
) -> PolylineDrawing:
    """One layer drawn with the necklace machinery: spinal path chains,
    terminal routes for page edges, bridge chains for crossings."""
    g = be.graph
    n = g.n
    spine = be.spine
    label_of_col = [0] * n
    for v, col in col_of_vertex.items():
        label_of_col[col] = spine.pos[v]
    sched = _NecklaceSchedule(gps, label_of_col)

    crossing_slots = {pg.slot for pg in be.pages if pg.page == "cross"}
    eidx = g.edge_index()
    col_of_label = [0] * n
    for col, lab in enumerate(label_of_col):
        col_of_label[lab] = col

    path_edge_real: dict[int, int] = {}
    for i in range(n - 1):
        u, v = spine.order[i], spine.order[i + 1]
        ei = eidx.get((min(u, v), max(u, v)))
        sched.add(
            _Chain(
                key=(i + 1, 0, 0),
                cutoff=i,
                end_a=("col", col_of_label[i]),
                end_b=("col", col_of_label[i + 1]),
                ident=("scaffold", i),
            )
        )
        if ei is not None and i not in crossing_slots:
            path_edge_real[i] = ei

    pending_at: dict[tuple[int, int], list[tuple]] = {}

    def queue_chain(anchor_pos, side, partner, edge_id, role):
        pending_at.setdefault((anchor_pos, side), []).append((partner, edge_id, role))

    spine_consecutive_real = set(path_edge_real.values())
    bridges: list[tuple[int, int]] = []
    for ei, (u, v) in enumerate(g.edges):
        if ei in spine_consecutive_real:
            continue
        pg = be.pages[ei]
        pu, pv = sorted((spine.pos[u], spine.pos[v]))
        if pg.page == "above":
            queue_chain(pu, TERM_LEFT, pv, ei, "a")
            queue_chain(pv, TERM_LEFT, pu, ei, "b")
        elif pg.page == "below":
            queue_chain(pu, TERM_RIGHT, pv, ei, "a")
            queue_chain(pv, TERM_RIGHT, pu, ei, "b")
        else:
            r = pg.slot
            queue_chain(pu, TERM_LEFT, r + Fraction(1, 2), ei, "a")
            queue_chain(pv, TERM_RIGHT, r + Fraction(1, 2), ei, "b")
            bridges.append((r, ei))

    chain_by_role: dict[tuple[int, str], _Chain] = {}
    for (anchor_pos, side), items in pending_at.items():
        incoming = [it for it in items if it[0] < anchor_pos]
        outgoing = [it for it in items if it[0] > anchor_pos]
        ordered = sorted(incoming, key=lambda it: (-it[0], it[1])) + sorted(
            outgoing, key=lambda it: (-it[0], it[1])
        )
        for seq, (partner, ei, role) in enumerate(ordered):
            ch = _Chain(
                key=(anchor_pos, 1, seq),
                cutoff=anchor_pos,
                end_a=("col", col_of_label[anchor_pos]),
                end_b=("term", side),
                ident=("term", ei, role),
            )
            sched.add(ch)
            chain_by_role[(ei, role)] = ch

    for seq, (r, ei) in enumerate(sorted(bridges)):
        ch = _Chain(
            key=(r, 2, seq),
            cutoff=r,
            end_a=("term", TERM_LEFT),
            end_b=("term", TERM_RIGHT),
            ident=("bridge", ei),
        )
        sched.add(ch)
        chain_by_role[(ei, "bridge")] = ch

    sched.run()
    by_ident = {c.ident: c for c in sched.chains}

    def staple(side: int, ka: int, kb: int) -> list[Point]:
        J = sched.port_count[side]
        eta = Fraction(1, J + 1)
        depth = abs(kb - ka) * eta / 2
        pa = sched.port_points[(side, ka)]
        pb = sched.port_points[(side, kb)]
        xo = sched.term_x[side] + (-depth if side == TERM_LEFT else depth)
        return [pa, (xo, pa[1]), (xo, pb[1]), pb]

    d = PolylineDrawing()
    for v in range(n):
        d.points[v] = gps.points[col_of_vertex[v]]
    emitted: set[int] = set()
    for i, ei in path_edge_real.items():
        d.add_chain(ei, *g.edges[ei], by_ident[("scaffold", i)].points)
        emitted.add(ei)
    for ei, (u, v) in enumerate(g.edges):
        if ei in emitted:
            continue
        pg = be.pages[ei]
        a = chain_by_role[(ei, "a")]
        b = chain_by_role[(ei, "b")]
        pts: list[Point] = list(a.points)
        if pg.page in ("above", "below"):
            side = TERM_LEFT if pg.page == "above" else TERM_RIGHT
            seg = staple(side, a.ports[side], b.ports[side])
            pts.extend(seg[1:])
            bb = list(b.points)
            bb.reverse()
            pts.extend(bb[1:])
        else:
            br = chain_by_role[(ei, "bridge")]
            seg = staple(TERM_LEFT, a.ports[TERM_LEFT], br.ports[TERM_LEFT])
            pts.extend(seg[1:])
            pts.extend(br.points[1:])
            seg = staple(TERM_RIGHT, br.ports[TERM_RIGHT], b.ports[TERM_RIGHT])
            pts.extend(seg[1:])
            bb = list(b.points)
            bb.reverse()
            pts.extend(bb[1:])
        if pts[0] != d.points[u] and pts[0] == d.points[v]:
            pts.reverse()
        d.add_chain(ei, u, v, pts)
    return d


# ---------------------------------------------------------------------------
# t = 3 third layer: straight y-monotone spinal path plus one-bend combs
# ---------------------------------------------------------------------------


def _draw_comb_layer(
    be: BookEmbedding, points: dict[int, Point]
) -> PolylineDrawing:
    """Layer whose spinal path is drawn straight and y-monotone; page edges
    bulge left or right with one bend, crossing edges pass through their own
    dummy point on the path with one bend per half."""
    g = be.graph
    spine = be.spine
    sp = spinal_path(be)

    node_pts: list[Point] = []
    for nd in sp.nodes:
        if nd.kind == "vertex":
            node_pts.append(points[nd.vertex])
        else:
            node_pts.append(None)  # filled below (midpoint of neighbors)
    for i, nd in enumerate(sp.nodes):
        if nd.kind == "dummy":
            a = node_pts[i - 1]
            b = node_pts[i + 1]
            node_pts[i] = ((frac(a[0]) + frac(b[0])) / 2, (frac(a[1]) + frac(b[1])) / 2)

    node_index_of_vertex = {
        nd.vertex: i for i, nd in enumerate(sp.nodes) if nd.kind == "vertex"
    }
    dummy_index_of_edge = {
        nd.edge: i for i, nd in enumerate(sp.nodes) if nd.kind == "dummy"
    }

    d = PolylineDrawing()
    for v in range(g.n):
        d.points[v] = points[v]

    crossing_slots = {pg.slot for pg in be.pages if pg.page == "cross"}
    emitted: set[int] = set()
    for li, (kind, ei) in enumerate(sp.links):
        if kind != "real":
            continue
        u, v = g.edges[ei]
        if min(spine.pos[u], spine.pos[v]) in crossing_slots:
            continue  # a crossing threads this slot; page-route the edge
        d.add_chain(ei, u, v, [node_pts[li], node_pts[li + 1]])
        emitted.add(ei)

    xs_all = [frac(p[0]) for p in node_pts]
    ys_all = [frac(p[1]) for p in node_pts]
    # Pages map to sides of the y-monotone path: above = left (-1), below =
    # right (+1). placed[side] collects bend points for outer obstructions.
    placed: dict[int, list[tuple[Point, int, int]]] = {-1: [], 1: []}

    def bend_bound(lo: int, hi: int, sign: int):
        """Farthest-needed bulge abscissa for a one-bend arc over node span
        [lo, hi]: every strictly inner path node and inner same-side bend must
        end up strictly on the path side of both segments."""
        obstructions = [(xs_all[j], ys_all[j]) for j in range(lo + 1, hi)]
        obstructions += [
            bp for bp, blo, bhi in placed[sign] if lo <= blo and bhi <= hi
        ]
        pa = (xs_all[lo], ys_all[lo])
        pb = (xs_all[hi], ys_all[hi])
        ymid = (ys_all[lo] + ys_all[hi]) / 2
        cand = [frac(pa[0]), frac(pb[0])] + [frac(o[0]) for o in obstructions]
        need = (max(cand) if sign > 0 else min(cand)) + sign
        for ox, oy in obstructions:
            for axx, ayy in (pa, pb):
                if oy == ayy or ymid == ayy:
                    continue
                tt = (frac(oy) - ayy) / (ymid - ayy)
                if tt <= 0 or tt > 1:
                    continue
                bound = axx + (frac(ox) + sign - axx) / tt
                need = max(need, bound) if sign > 0 else min(need, bound)
        return need, ymid

    # Inner spans first; a crossing edge is handled when its wider half comes
    # up so that both of its bends can be aligned through the dummy point.
    jobs = []
    for ei, (u, v) in enumerate(g.edges):
        if ei in emitted:
            continue
        pg = be.pages[ei]
        iu, iv = node_index_of_vertex[u], node_index_of_vertex[v]
        if spine.pos[u] > spine.pos[v]:
            iu, iv = iv, iu
        if pg.page in ("above", "below"):
            lo, hi = min(iu, iv), max(iu, iv)
            jobs.append((hi - lo, lo, hi, ei, "pure", pg.page))
        else:
            idm = dummy_index_of_edge[ei]
            w = max(idm - iu, iv - idm)
            jobs.append((w, iu, iv, ei, "cross", idm))
    jobs.sort(key=lambda j: (j[0], j[1], j[2]))

    for _, iu, iv, ei, kind, info in jobs:
        u, v = g.edges[ei]
        if kind == "pure":
            sign = -1 if info == "above" else 1
            lo, hi = iu, iv
            need, ymid = bend_bound(lo, hi, sign)
            bend = (need, ymid)
            placed[sign].append((bend, lo, hi))
            pts = [(xs_all[lo], ys_all[lo]), bend, (xs_all[hi], ys_all[hi])]
            if spine.pos[u] > spine.pos[v]:
                pts.reverse()
            d.add_chain(ei, u, v, pts)
        else:
            idm = info
            dx, dy = xs_all[idm], ys_all[idm]
            la, _yma = bend_bound(iu, idm, -1)  # above half bulges left
            rb, _ymb = bend_bound(idm, iv, 1)  # below half bulges right
            yma = (ys_all[iu] + dy) / 2
            ymb = (dy + ys_all[iv]) / 2
            r = (ymb - dy) / (dy - yma)
            xa = min(la, dx - (rb - dx) / r)
            xb = dx + (dx - xa) * r
            bend_a = (xa, yma)
            bend_b = (xb, ymb)
            placed[-1].append((bend_a, iu, idm))
            placed[1].append((bend_b, idm, iv))
            pts = [
                (xs_all[iu], ys_all[iu]),
                bend_a,
                (dx, dy),
                bend_b,
                (xs_all[iv], ys_all[iv]),
            ]
            d.add_chain(ei, u, v, pts)
    return d


# ---------------------------------------------------------------------------
# Theorem-level construction
# ---------------------------------------------------------------------------


def draw_sublinear(g: Graph, d: LayerDecomposition) -> MultiLayerDrawing:
    """t-layer drawing whose bend complexity scales with the group counts of
    the two axes rather than with n."""
    violations = validate_layer_decomposition(d)
    if violations:
        raise InvalidDecomposition("; ".join(violations))
    t = d.t
    if t < 3:
        raise InvalidDecomposition("sublinear construction needs t >= 3")
    n = g.n
    bes = [monotone_book_embedding(d.layer_graph(i)) for i in range(t)]
    paths = [be.spine for be in bes]
    placed = place_vertices(paths, t)

    hx = math.ceil(t / 2)
    layers: list[PolylineDrawing] = []
    for li in range(t):
        be = bes[li]
        if li < hx:
            layer = _draw_grouped_layer(be, placed.x_gps, placed.x_col_of_vertex)
        elif t == 3:
            layer = _draw_comb_layer(be, placed.points)
        else:
            tp = _draw_grouped_layer(be, placed.y_gps, placed.y_col_of_vertex)
            layer = transpose_drawing(tp)
        global_ids = sorted(d.layers[li])
        layer.chains = {global_ids[k]: pts for k, pts in layer.chains.items()}
        layer.edge_nodes = {global_ids[k]: uv for k, uv in layer.edge_nodes.items()}
        layers.append(layer)

    mld = MultiLayerDrawing(dict(placed.points), layers)
    kmax = max(placed.k_x, placed.k_y)
    mld.bounds.append(
        {
            "name": f"perEdgeBends<={C4_SUBLINEAR}*max(kx,ky)+{C5_SUBLINEAR}",
            "value": C4_SUBLINEAR * kmax + C5_SUBLINEAR,
            "kind": "maxBends",
        }
    )
    mld.meta.update(
        {
            "construction": "sublinear",
            "k_x": placed.k_x,
            "k_y": placed.k_y,
            "kx_bound": tuple_part_bound(n, placed.kappa_x) if placed.kappa_x else 1,
            "ky_bound": tuple_part_bound(n, placed.kappa_y) if placed.kappa_y else 1,
        }
    )
    return mld
