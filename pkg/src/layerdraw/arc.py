"""Uphill path drawings on a concave arc and the t-layer construction built
from them.

Geometry. Slots 0..n+1 sit at integer abscissae on the strictly concave
profile y = 2x(n+1-x); slot 0 and slot n+1 are the left and right terminals,
slots 1..n host the path nodes in an arbitrary order. Every chain hugs the
arc: it bends just above each already-placed slot it passes, inside the
anchor band of height eps above the point. eps is certified so that the
chord between any two points raised by at most eps keeps all intermediate
arc points strictly above it; consequently chains pass below unplaced points
and above placed ones, and chains inserted later run strictly above chains
inserted earlier at every shared abscissa.

Chains are scheduled by a total insertion key (position, phase, sequence):
the path edge into node p, then terminal chains anchored at p, then bridge
chains crossing the spine between p and p+1. Per-slot stack ranks and
per-terminal ports both follow this key, which makes the whole arrangement
planar except for the deliberate contact of each bridge chain with the
scaffolding path edge it crosses; that path edge is never emitted as a real
edge in that case.

Bend reduction replaces the interior of every maximal run of bends over
consecutive slots by a single apex placed steeply enough to clear the anchor
band (slopes one eps beyond the boundary arc increments); runs on wider
intervals produce apexes that strictly enclose those on nested intervals, so
the replacement preserves planarity without any coordination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Hashable, Optional

from .bookembed import BookEmbedding, monotone_book_embedding
from .drawing import MultiLayerDrawing, PolylineDrawing
from .geometry import Point
from .graph import Graph, GraphError, LayerDecomposition, VertexOrdering, validate_layer_decomposition

# Documented additive constants (see README): path edges stay within
# ceil(3*alpha/4) + C1 bends, terminal chains within ceil(3*alpha/4) + C2,
# and full edges of the t-layer construction within 2.25*n + C_SIMPLE.
C1_PATH = 2
C2_TERMINAL = 6
C_SIMPLE = 24


class InvalidDecomposition(GraphError):
    pass


@dataclass(frozen=True)
class ArcPointSet:
    n: int
    points: tuple[Point, ...]  # slots 0..n+1
    eps: Fraction
    slot_of: tuple[int, ...]  # path node i (0-based) -> slot in 1..n

    @property
    def left(self) -> Point:
        return self.points[0]

    @property
    def right(self) -> Point:
        return self.points[-1]


def make_arc_points(n: int, assignment: Optional[list[int]] = None) -> ArcPointSet:
    """Arc slots with a certified anchor offset.

    ``assignment`` maps path node i (0-based) to a slot in 1..n; identity by
    default. eps is half the minimum concavity gap of the profile and is then
    certified by the exact all-pairs anchor-chord check.
    """
    if n < 1:
        raise ValueError("need at least one path node")
    L = n + 1
    pts: list[Point] = [(x, 2 * x * (L - x)) for x in range(L + 1)]
    if assignment is None:
        slot_of = tuple(range(1, n + 1))
    else:
        slot_of = tuple(int(s) for s in assignment)
        if sorted(slot_of) != list(range(1, n + 1)):
            raise ValueError("assignment must be a permutation of 1..n")
    min_gap = None
    for m in range(1, L):
        gap = Fraction(2 * pts[m][1] - pts[m - 1][1] - pts[m + 1][1], 2)
        min_gap = gap if min_gap is None else min(min_gap, gap)
    eps = (min_gap or Fraction(1)) / 2
    aps = ArcPointSet(n, tuple(pts), eps, slot_of)
    certify_anchors(aps)
    return aps


def certify_anchors(aps: ArcPointSet) -> None:
    """Exact certification of the anchor-chord condition over all slot pairs.

    Concavity is checked first; for a concave profile the chord clearance of
    a pair (i, j) is minimized at the slots adjacent to i and j, so the
    all-pairs condition reduces to two exact checks per pair.
    """
    pts, eps, L = aps.points, aps.eps, aps.n + 1
    for m in range(1, L):
        if 2 * pts[m][1] - pts[m - 1][1] - pts[m + 1][1] <= 0:
            raise AssertionError(f"profile not strictly concave at slot {m}")

    # Integer form of: clearance of slot m above the chord (i, j) exceeds eps,
    # i.e. (ym - yi)(xj - xi) - (xm - xi)(yj - yi) > eps * (xj - xi).
    ep, eq = eps.numerator, eps.denominator
    xs = [int(p[0]) for p in pts]
    ys = [int(p[1]) for p in pts]

    def clear(i: int, m: int, j: int) -> bool:
        dx = xs[j] - xs[i]
        lhs = (ys[m] - ys[i]) * dx - (xs[m] - xs[i]) * (ys[j] - ys[i])
        return lhs * eq > ep * dx

    for i in range(0, L + 1):
        for j in range(i + 2, L + 1):
            if not (clear(i, i + 1, j) and clear(i, j - 1, j)):
                raise AssertionError(f"anchor condition fails for pair ({i},{j})")


# ---------------------------------------------------------------------------
# Chain scheduling
# ---------------------------------------------------------------------------

TERM_LEFT = 0
TERM_RIGHT = 1


@dataclass
class _Chain:
    key: tuple  # (position, phase, seq) -- total insertion order
    cutoff: int  # bends allowed above nodes with position <= cutoff
    end_a: tuple  # ("slot", s) | ("term", side)
    end_b: tuple
    tag: str  # "path" | "terminal" | "bridge"
    ident: Hashable  # caller handle
    bend_slots: list[int] = field(default_factory=list)
    points: list[Point] = field(default_factory=list)
    ports: dict[int, int] = field(default_factory=dict)  # side -> port index


class _ArcSchedule:
    def __init__(self, aps: ArcPointSet):
        self.aps = aps
        self.pos_at_slot: dict[int, int] = {
            s: i for i, s in enumerate(aps.slot_of)
        }
        self.chains: list[_Chain] = []

    def _end_x(self, end) -> int:
        if end[0] == "slot":
            return end[1]
        return 0 if end[1] == TERM_LEFT else self.aps.n + 1

    def add(self, chain: _Chain) -> None:
        self.chains.append(chain)

    def run(self) -> None:
        aps = self.aps
        self.chains.sort(key=lambda c: c.key)
        per_slot: dict[int, list[_Chain]] = {}
        per_term: dict[int, list[_Chain]] = {TERM_LEFT: [], TERM_RIGHT: []}
        for c in self.chains:
            xa, xb = self._end_x(c.end_a), self._end_x(c.end_b)
            lo, hi = min(xa, xb), max(xa, xb)
            slots = []
            for s in range(lo + 1, hi):
                p = self.pos_at_slot.get(s)
                if p is not None and p <= c.cutoff:
                    slots.append(s)
            c.bend_slots = slots
            for s in slots:
                per_slot.setdefault(s, []).append(c)
            for end in (c.end_a, c.end_b):
                if end[0] == "term":
                    per_term[end[1]].append(c)

        heights: dict[tuple[int, int], Fraction] = {}
        for s, lst in per_slot.items():
            d = len(lst)
            y = Fraction(aps.points[s][1])
            for rank, c in enumerate(lst, start=1):
                heights[(id(c), s)] = y + aps.eps * Fraction(rank, d + 1)

        self.port_points: dict[tuple[int, int], Point] = {}
        self.port_count = {side: len(per_term[side]) for side in per_term}
        for side, lst in per_term.items():
            J = len(lst)
            if J == 0:
                continue
            eta = aps.eps / (J + 1)
            xt, yt = aps.points[0] if side == TERM_LEFT else aps.points[-1]
            for k, c in enumerate(lst, start=1):
                c.ports[side] = k
                self.port_points[(side, k)] = (Fraction(xt), Fraction(yt) + k * eta)

        for c in self.chains:
            pts: list[Point] = []

            def end_point(end) -> Point:
                if end[0] == "slot":
                    p = aps.points[end[1]]
                    return (Fraction(p[0]), Fraction(p[1]))
                return self.port_points[(end[1], c.ports[end[1]])]

            pa, pb = end_point(c.end_a), end_point(c.end_b)
            xa, xb = self._end_x(c.end_a), self._end_x(c.end_b)
            slots = sorted(c.bend_slots) if xa <= xb else sorted(c.bend_slots, reverse=True)
            pts.append(pa)
            for s in slots:
                pts.append((Fraction(aps.points[s][0]), heights[(id(c), s)]))
            pts.append(pb)
            c.points = self._compress(c, pts, heights)

    def _compress(
        self, c: _Chain, pts: list[Point], heights: dict[tuple[int, int], Fraction]
    ) -> list[Point]:
        """Replace the interior of every bend run over >= 3 consecutive slots
        by one apex with slope-safe sides."""
        aps = self.aps
        if len(c.bend_slots) < 3:
            return pts
        slots_sorted = sorted(c.bend_slots)
        runs: list[tuple[int, int]] = []
        start = prev = slots_sorted[0]
        for s in slots_sorted[1:]:
            if s == prev + 1:
                prev = s
                continue
            runs.append((start, prev))
            start = prev = s
        runs.append((start, prev))

        keep: set[int] = set()
        apex: dict[tuple[int, int], Point] = {}
        drop: set[int] = set()
        for sa, sb in runs:
            if sb - sa + 1 < 3:
                continue
            ya, yb = aps.points[sa][1], aps.points[sb][1]
            ha = heights[(id(c), sa)]
            hb = heights[(id(c), sb)]
            ml = Fraction(aps.points[sa + 1][1] - ya) + aps.eps
            mr = Fraction(aps.points[sb - 1][1] - yb) + aps.eps
            xa, xb2 = Fraction(aps.points[sa][0]), Fraction(aps.points[sb][0])
            xstar = (hb - ha + ml * xa + mr * xb2) / (ml + mr)
            ystar = ha + ml * (xstar - xa)
            apex[(sa, sb)] = (xstar, ystar)
            for s in range(sa + 1, sb):
                drop.add(s)

        if not apex:
            return pts
        out: list[Point] = [pts[0]]
        interior = pts[1:-1]
        slot_list = sorted(c.bend_slots)
        ordered = slot_list if interior and interior[0][0] <= interior[-1][0] else list(reversed(slot_list))
        emitted_apex: set[tuple[int, int]] = set()
        for p, s in zip(interior, ordered):
            if s in drop:
                run = next(r for r in apex if r[0] < s < r[1])
                if run not in emitted_apex:
                    emitted_apex.add(run)
                    out.append(apex[run])
                continue
            out.append(p)
        out.append(pts[-1])
        return out


def _staple(
    sched: _ArcSchedule, side: int, ka: int, kb: int
) -> list[Point]:
    """Connector between two ports of the same terminal: out, across, back."""
    aps = sched.aps
    J = sched.port_count[side]
    eta = aps.eps / (J + 1)
    depth = abs(kb - ka) * eta / 2
    pa = sched.port_points[(side, ka)]
    pb = sched.port_points[(side, kb)]
    if side == TERM_LEFT:
        xo = Fraction(aps.points[0][0]) - depth
    else:
        xo = Fraction(aps.points[-1][0]) + depth
    return [pa, (xo, pa[1]), (xo, pb[1]), pb]


# ---------------------------------------------------------------------------
# Lemma-level operations
# ---------------------------------------------------------------------------


def draw_uphill_path(
    aps: ArcPointSet, path: Optional[VertexOrdering] = None
) -> PolylineDrawing:
    """Uphill drawing of the path whose node i sits at slot ``aps.slot_of[i]``.

    Chains are keyed ("path", i); node points are keyed ("node", i). The
    optional ``path`` only relabels node identities in ``points``.
    """
    n = aps.n
    sched = _ArcSchedule(aps)
    for i in range(n - 1):
        sched.add(
            _Chain(
                key=(i + 1, 0, 0),
                cutoff=i,
                end_a=("slot", aps.slot_of[i]),
                end_b=("slot", aps.slot_of[i + 1]),
                tag="path",
                ident=("path", i),
            )
        )
    sched.run()
    d = PolylineDrawing()
    for i in range(n):
        d.points[("node", i)] = aps.points[aps.slot_of[i]]
    if path is not None:
        for i in range(n):
            d.points[("vertex", path.order[i])] = aps.points[aps.slot_of[i]]
    for c in sched.chains:
        d.add_chain(c.ident, ("node", c.ident[1]), ("node", c.ident[1] + 1), c.points)
    d.meta["aps"] = aps
    d.meta["schedule_chains"] = len(sched.chains)
    return d


def route_via_terminal(
    drawing: PolylineDrawing, i: int, side: str
) -> tuple[Point, ...]:
    """An x-monotone chain from path node i to the left or right terminal
    that touches the path drawing only at node i.

    The chain is rebuilt against the drawing's own arc schedule: it is
    inserted just after node i's placement, so it stays above everything
    drawn up to node i and below all later chains and unplaced points.
    """
    aps: ArcPointSet = drawing.meta["aps"]
    n = aps.n
    if not (0 <= i < n):
        raise ValueError("path node out of range")
    term = TERM_LEFT if side == "left" else TERM_RIGHT
    sched = _ArcSchedule(aps)
    for j in range(n - 1):
        sched.add(
            _Chain(
                key=(j + 1, 0, 0),
                cutoff=j,
                end_a=("slot", aps.slot_of[j]),
                end_b=("slot", aps.slot_of[j + 1]),
                tag="path",
                ident=("path", j),
            )
        )
    probe = _Chain(
        key=(i, 1, 0),
        cutoff=i,
        end_a=("slot", aps.slot_of[i]),
        end_b=("term", term),
        tag="terminal",
        ident=("probe",),
    )
    sched.add(probe)
    sched.run()
    pts = list(probe.points)
    # End exactly at the terminal point: the single port is private here.
    target = aps.points[0] if term == TERM_LEFT else aps.points[-1]
    pts[-1] = (Fraction(target[0]), Fraction(target[1]))
    return tuple(pts)


# ---------------------------------------------------------------------------
# Theorem-level construction: t layers, one shared placement
# ---------------------------------------------------------------------------


def _layer_chains(
    be: BookEmbedding, aps: ArcPointSet
) -> tuple[_ArcSchedule, dict[Hashable, list], set[int]]:
    """Build the chain schedule of one layer.

    Returns the schedule, a map edge-id -> list of polyline parts (chain
    idents and staples, in traversal order), and the set of edge ids drawn
    as scaffolding path chains.
    """
    g = be.graph
    spine = be.spine
    n = g.n
    sched = _ArcSchedule(aps)

    crossing_slots = {pg.slot for pg in be.pages if pg.page == "cross"}
    eidx = g.edge_index()

    # Scaffolding path chains; real and kept when the spine-consecutive edge
    # exists and no crossing threads its slot.
    path_edge_real: dict[int, int] = {}
    for i in range(n - 1):
        u, v = spine.order[i], spine.order[i + 1]
        key = (min(u, v), max(u, v))
        ei = eidx.get(key)
        chain = _Chain(
            key=(i + 1, 0, 0),
            cutoff=i,
            end_a=("slot", aps.slot_of[i]),
            end_b=("slot", aps.slot_of[i + 1]),
            tag="path",
            ident=("scaffold", i),
        )
        sched.add(chain)
        if ei is not None and i not in crossing_slots:
            path_edge_real[i] = ei

    # Terminal chains for page and crossing edges.
    pending_at: dict[tuple[int, int], list[tuple]] = {}

    def queue_chain(anchor_pos: int, side: int, partner, edge_id: int, role: str):
        pending_at.setdefault((anchor_pos, side), []).append(
            (partner, edge_id, role)
        )

    spine_consecutive_real = set(path_edge_real.values())
    bridge_chains: list[tuple[int, int]] = []  # (slot r, edge id)
    for ei, (u, v) in enumerate(g.edges):
        if ei in spine_consecutive_real:
            continue
        pg = be.pages[ei]
        pu, pv = spine.pos[u], spine.pos[v]
        if pu > pv:
            pu, pv = pv, pu
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
            bridge_chains.append((r, ei))

    chain_by_role: dict[tuple[int, str], _Chain] = {}
    for (anchor_pos, side), items in pending_at.items():
        incoming = [it for it in items if it[0] < anchor_pos]
        outgoing = [it for it in items if it[0] > anchor_pos]
        ordered = sorted(incoming, key=lambda it: (-it[0], it[1])) + sorted(
            outgoing, key=lambda it: (-it[0], it[1])
        )
        for seq, (partner, ei, role) in enumerate(ordered):
            chain = _Chain(
                key=(anchor_pos, 1, seq),
                cutoff=anchor_pos,
                end_a=("slot", aps.slot_of[anchor_pos]),
                end_b=("term", side),
                tag="terminal",
                ident=("term", ei, role),
            )
            sched.add(chain)
            chain_by_role[(ei, role)] = chain

    for seq, (r, ei) in enumerate(sorted(bridge_chains)):
        chain = _Chain(
            key=(r, 2, seq),
            cutoff=r,
            end_a=("term", TERM_LEFT),
            end_b=("term", TERM_RIGHT),
            tag="bridge",
            ident=("bridge", ei),
        )
        sched.add(chain)
        chain_by_role[(ei, "bridge")] = chain

    sched.run()

    parts: dict[Hashable, list] = {}
    for i, ei in path_edge_real.items():
        parts[ei] = [("chain", ("scaffold", i), False)]
    for ei, (u, v) in enumerate(g.edges):
        if ei in parts:
            continue
        pg = be.pages[ei]
        a = chain_by_role[(ei, "a")]
        b = chain_by_role[(ei, "b")]
        if pg.page in ("above", "below"):
            side = TERM_LEFT if pg.page == "above" else TERM_RIGHT
            parts[ei] = [
                ("chain", a.ident, False),
                ("staple", side, a.ports[side], b.ports[side]),
                ("chain", b.ident, True),
            ]
        else:
            br = chain_by_role[(ei, "bridge")]
            parts[ei] = [
                ("chain", a.ident, False),
                ("staple", TERM_LEFT, a.ports[TERM_LEFT], br.ports[TERM_LEFT]),
                ("chain", br.ident, False),
                ("staple", TERM_RIGHT, br.ports[TERM_RIGHT], b.ports[TERM_RIGHT]),
                ("chain", b.ident, True),
            ]
    return sched, parts, set(path_edge_real.values())


def _assemble_layer(
    be: BookEmbedding, aps: ArcPointSet, sched: _ArcSchedule, parts: dict
) -> PolylineDrawing:
    g = be.graph
    by_ident = {c.ident: c for c in sched.chains}
    d = PolylineDrawing()
    for v in range(g.n):
        d.points[v] = aps.points[aps.slot_of[be.spine.pos[v]]]
    for ei, plan in parts.items():
        pts: list[Point] = []
        for part in plan:
            if part[0] == "chain":
                cpts = list(by_ident[part[1]].points)
                if part[2]:
                    cpts.reverse()
                if pts and pts[-1] == cpts[0]:
                    cpts = cpts[1:]
                pts.extend(cpts)
            else:
                _, side, ka, kb = part
                seg = _staple(sched, side, ka, kb)
                if pts and pts[-1] == seg[0]:
                    seg = seg[1:]
                pts.extend(seg)
        u, v = g.edges[ei]
        first, last = pts[0], pts[-1]
        if first != d.points[u] and first == d.points[v]:
            pts.reverse()
        d.add_chain(ei, u, v, pts)
    return d


def draw_simple(g: Graph, d: LayerDecomposition) -> MultiLayerDrawing:
    """Draw every planar layer on one shared arc placement; per-edge bends
    stay within 2.25 n + C_SIMPLE and every layer is crossing-free."""
    violations = validate_layer_decomposition(d)
    if violations:
        raise InvalidDecomposition("; ".join(violations))
    n = g.n
    if n == 0:
        return MultiLayerDrawing({}, [PolylineDrawing() for _ in d.layers])
    bes = [monotone_book_embedding(d.layer_graph(i)) for i in range(d.t)]
    base = make_arc_points(max(n, 1))
    vertex_slot = {v: bes[0].spine.pos[v] + 1 for v in range(n)}
    layers: list[PolylineDrawing] = []
    for li, be in enumerate(bes):
        slot_of = tuple(vertex_slot[be.spine.order[i]] for i in range(n))
        aps = replace(base, slot_of=slot_of)
        sched, parts, _ = _layer_chains(be, aps)
        layer = _assemble_layer(be, aps, sched, parts)
        # Layer subgraphs renumber edges; translate back to global edge ids.
        global_ids = sorted(d.layers[li])
        layer.chains = {global_ids[k]: pts for k, pts in layer.chains.items()}
        layer.edge_nodes = {global_ids[k]: uv for k, uv in layer.edge_nodes.items()}
        layers.append(layer)
    vertex_points = {v: base.points[vertex_slot[v]] for v in range(n)}
    mld = MultiLayerDrawing(vertex_points, layers)
    mld.bounds.append(
        {
            "name": f"perEdgeBends<=2.25n+{C_SIMPLE}",
            "value": 2.25 * n + C_SIMPLE,
            "kind": "maxBends",
        }
    )
    mld.meta["construction"] = "simple"
    return mld
