"""Monotone topological book embeddings: construction, validation, spinal paths.

A book embedding here is a spine order plus, per edge, one of
``above`` / ``below`` / ``cross``. A crossing edge (u, v) with u before v on
the spine dips through the spine exactly once at an integer slot r
(geometrically r + 1/2, strictly between the endpoints' positions); its
u-side arc lies above the spine and its v-side arc below. After splitting
crossing edges at their slots, no two arcs on the same page may interleave,
and each slot hosts at most one crossing.

The free-spine constructor looks for a spine order whose interval conflict
graph is bipartite (then two pure pages suffice). Such orders are obtained
from Hamiltonian cycles of planar supergraphs: a cycle order of any planar
supergraph splits that supergraph's edges into non-interleaving inside and
outside families, and the property is inherited by subgraphs and by vertex
restrictions. Tree-like components use a DFS preorder, whose tree-edge
intervals are always laminar. A complete assignment search (with crossing
slots) backs fixed-spine requests and the small-n oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .graph import Graph, GraphError, VertexOrdering
from .planarity import is_planar


class SizeExceeded(ValueError):
    pass


class BookEmbeddingSearchError(RuntimeError):
    """The heuristic spine-order cascade ran out of candidates."""


@dataclass(frozen=True)
class EdgePage:
    page: str  # "above" | "below" | "cross"
    slot: Optional[int] = None


@dataclass(frozen=True)
class BookEmbedding:
    graph: Graph
    spine: VertexOrdering
    pages: tuple[EdgePage, ...]


@dataclass(frozen=True)
class SpinalNode:
    kind: str  # "vertex" | "dummy"
    vertex: Optional[int] = None
    edge: Optional[int] = None
    slot: Optional[int] = None


@dataclass(frozen=True)
class SpinalPath:
    nodes: tuple[SpinalNode, ...]
    # per consecutive pair: ("real", edge index) or ("virtual", None) or
    # ("half", edge index) for the two halves of a crossing edge.
    links: tuple[tuple[str, Optional[int]], ...]


# ---------------------------------------------------------------------------
# Arc model and validation
# ---------------------------------------------------------------------------


def _arcs(be: BookEmbedding):
    """Yield (page, lo, hi, edge) arcs in doubled coordinates: vertex at
    position p sits at 2p, a crossing slot r at 2r + 1."""
    pos = be.spine.pos
    for ei, (u, v) in enumerate(be.graph.edges):
        pu, pv = pos[u], pos[v]
        if pu > pv:
            pu, pv = pv, pu
        pg = be.pages[ei]
        if pg.page == "above" or pg.page == "below":
            yield pg.page, 2 * pu, 2 * pv, ei
        elif pg.page == "cross":
            c = 2 * pg.slot + 1
            yield "above", 2 * pu, c, ei
            yield "below", c, 2 * pv, ei


def _interleave(a1: int, b1: int, a2: int, b2: int) -> bool:
    return (a1 < a2 < b1 < b2) or (a2 < a1 < b2 < b1)


def validate_book_embedding(be: BookEmbedding) -> list[str]:
    """Empty report iff the embedding satisfies the spine/page invariants."""
    report: list[str] = []
    g = be.graph
    if sorted(be.spine.order) != list(range(g.n)):
        report.append("P1: spine is not a permutation of the vertices")
        return report
    if len(be.pages) != g.m:
        report.append("P1: page assignment size mismatch")
        return report
    pos = be.spine.pos
    used_slots: dict[int, int] = {}
    for ei, (u, v) in enumerate(g.edges):
        pg = be.pages[ei]
        if pg.page not in ("above", "below", "cross"):
            report.append(f"edge {ei}: unknown page {pg.page!r}")
            continue
        if pg.page == "cross":
            if pg.slot is None:
                report.append(f"P2: edge {ei} crossing without a slot")
                continue
            lo, hi = sorted((pos[u], pos[v]))
            if not (lo <= pg.slot < hi):
                report.append(
                    f"P3: edge {ei} slot {pg.slot} not strictly between its endpoints"
                )
            if pg.slot in used_slots:
                report.append(
                    f"P2: slot {pg.slot} hosts crossings of edges {used_slots[pg.slot]} and {ei}"
                )
            used_slots.setdefault(pg.slot, ei)
        elif pg.slot is not None:
            report.append(f"edge {ei}: non-crossing edge carries a slot")
    arcs = list(_arcs(be))
    by_page: dict[str, list] = {"above": [], "below": []}
    for page, lo, hi, ei in arcs:
        by_page[page].append((lo, hi, ei))
    for page, lst in by_page.items():
        lst.sort()
        for i in range(len(lst)):
            for j in range(i + 1, len(lst)):
                a1, b1, e1 = lst[i]
                a2, b2, e2 = lst[j]
                if a2 >= b1:
                    break
                if _interleave(a1, b1, a2, b2):
                    report.append(
                        f"interleaving on page {page}: edges {e1} and {e2}"
                    )
    return report


# ---------------------------------------------------------------------------
# Spinal path extraction
# ---------------------------------------------------------------------------


def spinal_path(be: BookEmbedding) -> SpinalPath:
    """The path through all spine vertices and crossing dummies in spine
    order, with each link flagged real (a graph edge), half (one side of a
    crossing edge), or virtual."""
    g = be.graph
    order = be.spine.order
    dummies_at: dict[int, SpinalNode] = {}
    for ei, pg in enumerate(be.pages):
        if pg.page == "cross":
            dummies_at[pg.slot] = SpinalNode("dummy", edge=ei, slot=pg.slot)
    nodes: list[SpinalNode] = []
    for p, v in enumerate(order):
        nodes.append(SpinalNode("vertex", vertex=v))
        if p in dummies_at:
            nodes.append(dummies_at[p])
    eidx = g.edge_index()
    links: list[tuple[str, Optional[int]]] = []
    for i in range(len(nodes) - 1):
        a, b = nodes[i], nodes[i + 1]
        if a.kind == "vertex" and b.kind == "vertex":
            key = (min(a.vertex, b.vertex), max(a.vertex, b.vertex))
            if key in eidx:
                links.append(("real", eidx[key]))
            else:
                links.append(("virtual", None))
        else:
            dummy = a if a.kind == "dummy" else b
            links.append(("half", dummy.edge))
    return SpinalPath(tuple(nodes), tuple(links))


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def _strict_conflicts(intervals: list[tuple[int, int]]) -> list[list[int]]:
    m = len(intervals)
    adj: list[list[int]] = [[] for _ in range(m)]
    for i in range(m):
        a1, b1 = intervals[i]
        for j in range(i + 1, m):
            a2, b2 = intervals[j]
            if _interleave(a1, b1, a2, b2):
                adj[i].append(j)
                adj[j].append(i)
    return adj


def _two_color(adj: list[list[int]]) -> Optional[list[int]]:
    color = [-1] * len(adj)
    for s in range(len(adj)):
        if color[s] != -1:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if color[y] == -1:
                    color[y] = 1 - color[x]
                    stack.append(y)
                elif color[y] == color[x]:
                    return None
    return color


def _pure_embedding_for_spine(g: Graph, spine: VertexOrdering) -> Optional[BookEmbedding]:
    intervals = []
    for u, v in g.edges:
        pu, pv = spine.pos[u], spine.pos[v]
        intervals.append((min(pu, pv), max(pu, pv)))
    colors = _two_color(_strict_conflicts(intervals))
    if colors is None:
        return None
    pages = tuple(EdgePage("above" if c == 0 else "below") for c in colors)
    return BookEmbedding(g, spine, pages)


def _search_assignment(
    g: Graph, spine: VertexOrdering, node_budget: int = 400_000
) -> Optional[BookEmbedding]:
    """Complete backtracking over page/crossing assignments for a fixed spine.

    Exponential in the worst case; intended for small instances (the oracle
    and fixed-spine requests).
    """
    pos = spine.pos
    edges = list(range(g.m))
    spans = []
    for ei in edges:
        u, v = g.edges[ei]
        pu, pv = sorted((pos[u], pos[v]))
        spans.append((pu, pv))
    edges.sort(key=lambda ei: spans[ei][0] - spans[ei][1])  # widest first

    above: list[tuple[int, int]] = []
    below: list[tuple[int, int]] = []
    used_slots: set[int] = set()
    chosen: dict[int, EdgePage] = {}
    budget = [node_budget]

    def compatible(fam: list[tuple[int, int]], lo: int, hi: int) -> bool:
        for a, b in fam:
            if _interleave(a, b, lo, hi):
                return False
        return True

    def options(ei: int):
        pu, pv = spans[ei]
        lo, hi = 2 * pu, 2 * pv
        if compatible(above, lo, hi):
            yield EdgePage("above"), (lo, hi), None
        if compatible(below, lo, hi):
            yield EdgePage("below"), None, (lo, hi)
        for r in range(pu, pv):
            if r in used_slots:
                continue
            c = 2 * r + 1
            if compatible(above, lo, c) and compatible(below, c, hi):
                yield EdgePage("cross", r), (lo, c), (c, hi)

    def rec(k: int) -> bool:
        if budget[0] <= 0:
            return False
        budget[0] -= 1
        if k == len(edges):
            return True
        ei = edges[k]
        for page, up, dn in options(ei):
            chosen[ei] = page
            if up:
                above.append(up)
            if dn:
                below.append(dn)
            if page.page == "cross":
                used_slots.add(page.slot)
            if rec(k + 1):
                return True
            if page.page == "cross":
                used_slots.discard(page.slot)
            if up:
                above.pop()
            if dn:
                below.pop()
            del chosen[ei]
        return False

    if rec(0):
        pages = tuple(chosen[ei] for ei in range(g.m))
        return BookEmbedding(g, spine, pages)
    return None


def _hamiltonian_cycle(
    n: int, adj: list[set[int]], rng: random.Random, step_budget: int = 400_000
) -> Optional[list[int]]:
    """Randomized Posa-rotation search for a Hamiltonian cycle."""
    if n == 0:
        return None
    if n == 1:
        return [0]
    if n == 2:
        return [0, 1] if 1 in adj[0] else None
    if any(len(a) < 2 for a in adj):
        return None

    path = [rng.randrange(n)]
    on_path = [False] * n
    pos_in = [-1] * n
    on_path[path[0]] = True
    pos_in[path[0]] = 0
    steps = 0

    def rebuild_positions(frm: int) -> None:
        for i in range(frm, len(path)):
            pos_in[path[i]] = i

    while steps < step_budget:
        steps += 1
        end = path[-1]
        nbrs = list(adj[end])
        fresh = [w for w in nbrs if not on_path[w]]
        if fresh:
            w = rng.choice(fresh)
            path.append(w)
            on_path[w] = True
            pos_in[w] = len(path) - 1
            continue
        if len(path) == n and path[0] in adj[end]:
            return list(path)
        # Rotate: edge (end, w) with w inside the path flips the tail.
        w = nbrs[rng.randrange(len(nbrs))]
        i = pos_in[w]
        if i >= len(path) - 2:
            continue
        path[i + 1 :] = reversed(path[i + 1 :])
        rebuild_positions(i + 1)
    return None


def _triangulation_adjacency(g: Graph) -> list[set[int]]:
    """A planar triangulation on the same vertex set containing g (isolated
    vertices and components get connected in the process)."""
    import networkx as nx
    from networkx.algorithms.planar_drawing import triangulate_embedding

    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges)
    ok, emb = nx.check_planarity(nxg, counterexample=False)
    if not ok:
        raise GraphError("graph is not planar")
    t_emb, _outer = triangulate_embedding(emb, True)
    adj: list[set[int]] = [set() for _ in range(g.n)]
    for u, v in t_emb.edges():
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _component_vertex_sets(g: Graph) -> list[list[int]]:
    adj = g.adjacency()
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def _spine_candidates(g: Graph, rng: random.Random):
    """Yield candidate spine orders for a planar graph.

    A DFS preorder settles forests immediately (tree-edge preorder intervals
    are always laminar). The workhorse is a Hamiltonian cycle of a planar
    triangulation containing g: the cycle splits the triangulation's edges
    into non-interleaving inside/outside families, so the induced conflict
    graph of g is bipartite whenever the cycle search succeeds.
    """
    n = g.n
    adj = g.adjacency()

    pre: list[int] = []
    seen = [False] * n
    for s in range(n):
        if seen[s]:
            continue
        stack = [s]
        while stack:
            x = stack.pop()
            if seen[x]:
                continue
            seen[x] = True
            pre.append(x)
            for y in sorted(adj[x], reverse=True):
                if not seen[y]:
                    stack.append(y)
    yield pre

    if n >= 3:
        tri = _triangulation_adjacency(g)
        for _ in range(12):
            cyc = _hamiltonian_cycle(n, tri, rng)
            if cyc:
                yield cyc

    base = list(range(n))
    for _ in range(32):
        rng.shuffle(base)
        yield list(base)


def monotone_book_embedding(
    g: Graph,
    embedding: Optional[dict[int, list[int]]] = None,
    spine: Optional[VertexOrdering] = None,
    seed: int = 0,
) -> BookEmbedding:
    """Construct a valid book embedding of a planar graph.

    With ``spine`` fixed, a complete assignment search (pages plus crossing
    slots) is run for that order. Otherwise candidate spine orders are tried
    per connected component until one admits a two-page assignment; component
    spines are concatenated, so pages never conflict across components.
    """
    res = is_planar(g)
    if not res.planar:
        raise GraphError("monotone_book_embedding requires a planar graph")
    if spine is not None:
        be = _pure_embedding_for_spine(g, spine)
        if be is None:
            be = _search_assignment(g, spine)
        if be is None:
            raise BookEmbeddingSearchError(
                "no assignment found for the requested spine order"
            )
        return be

    rng = random.Random(seed)
    for cand in _spine_candidates(g, rng):
        be = _pure_embedding_for_spine(g, VertexOrdering.from_order(cand))
        if be is not None:
            return be
    if g.n <= 9:
        for cand in _spine_candidates(g, rng):
            be = _search_assignment(g, VertexOrdering.from_order(cand))
            if be is not None:
                return be
    raise BookEmbeddingSearchError(
        f"spine-order cascade exhausted for a graph with {g.n} vertices"
    )


def brute_force_book_embedding(
    g: Graph, spine: Optional[VertexOrdering] = None, node_budget: int = 400_000
) -> Optional[BookEmbedding]:
    """Exhaustive oracle over spine orders, page assignments and crossing
    slots for graphs with at most 8 vertices. Returns None when no embedding
    exists (e.g. for non-planar inputs)."""
    if g.n > 8:
        raise SizeExceeded("brute_force_book_embedding is limited to n <= 8")
    if spine is not None:
        return _search_assignment(g, spine, node_budget)
    import itertools

    first = list(range(g.n))
    for perm in itertools.permutations(first):
        be = _search_assignment(g, VertexOrdering.from_order(perm), node_budget)
        if be is not None:
            return be
    return None
