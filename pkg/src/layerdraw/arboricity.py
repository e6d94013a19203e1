"""Bandwidth-bounded vertex orderings from spanning-path unions, and the
k-layer drawing for graphs of linear arboricity k.

The ordering sigma places the first x vertices of the first path, then for
each further path its neighbors of that prefix in prefix order, then the
remaining first-path vertices in order. With x = ceil(n / (2k-1)) the
bandwidth of the union is at most max(n - x, 2x(k-1)). Each spanning path is
then drawn uphill on one shared arc whose slots follow sigma, so an edge at
positional distance b needs at most ceil(3(b-1)/4) + C1 bends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .arc import C1_PATH, InvalidDecomposition, draw_uphill_path, make_arc_points
from .drawing import MultiLayerDrawing, PolylineDrawing
from .graph import (
    Graph,
    LinearForestDecomposition,
    VertexOrdering,
    forests_to_spanning_paths,
    validate_linear_forest_decomposition,
)


@dataclass(frozen=True)
class SigmaOrdering:
    ordering: VertexOrdering
    x: int
    blocks: tuple[tuple[int, ...], ...]  # sigma_1 .. sigma_{k+1}


def sigma_ordering(paths: list[VertexOrdering], n: int) -> SigmaOrdering:
    """Block ordering sigma_1 .. sigma_{k+1} over k spanning paths."""
    k = len(paths)
    if k < 1:
        raise ValueError("need at least one path")
    for p in paths:
        if len(p.order) != n:
            raise ValueError("every path must span all n vertices")
    x = math.ceil(n / (2 * k - 1))
    placed: set[int] = set()
    blocks: list[tuple[int, ...]] = []

    sigma1 = list(paths[0].order[:x])
    placed.update(sigma1)
    blocks.append(tuple(sigma1))

    def path_neighbors(path: VertexOrdering, v: int) -> list[int]:
        i = path.pos[v]
        out = []
        if i > 0:
            out.append(path.order[i - 1])
        if i + 1 < n:
            out.append(path.order[i + 1])
        return out

    for t in range(1, k):
        block: list[int] = []
        for v in sigma1:
            for w in path_neighbors(paths[t], v):
                if w not in placed:
                    placed.add(w)
                    block.append(w)
        blocks.append(tuple(block))

    tail = [v for v in paths[0].order if v not in placed]
    blocks.append(tuple(tail))
    order: list[int] = [v for block in blocks for v in block]
    sigma = VertexOrdering.from_order(order)

    assert len(blocks[0]) <= x
    for t in range(1, k):
        assert len(blocks[t]) <= 2 * x
    return SigmaOrdering(sigma, x, tuple(blocks))


def sigma_bandwidth_bound(n: int, k: int) -> int:
    x = math.ceil(n / (2 * k - 1))
    return max(n - x, 2 * x * (k - 1)) if k > 1 else 1


def bandwidth(g: Graph, ordering: VertexOrdering) -> int:
    """Maximum positional distance over the graph's edges; 0 if edgeless."""
    if len(ordering.order) != g.n:
        raise ValueError("ordering must cover the graph's vertices")
    best = 0
    for u, v in g.edges:
        best = max(best, abs(ordering.pos[u] - ordering.pos[v]))
    return best


def draw_arboricity(g: Graph, d: LinearForestDecomposition) -> MultiLayerDrawing:
    """One layer per linear forest: complete each forest to a spanning path,
    place all vertices on a shared arc in sigma order, draw each spanning
    path uphill, and delete the virtual connector edges."""
    report = validate_linear_forest_decomposition(d)
    if report:
        raise InvalidDecomposition("; ".join(report))
    n = g.n
    if n == 0:
        return MultiLayerDrawing({}, [PolylineDrawing() for _ in d.forests])
    paths, virtuals = forests_to_spanning_paths(d)
    sigma = sigma_ordering(paths, n)

    union_edges: set[tuple[int, int]] = set(g.edges)
    for vs in virtuals:
        union_edges |= vs
    union = Graph.from_edges(n, sorted(union_edges))
    bw = bandwidth(union, sigma.ordering)

    base = make_arc_points(n)
    edge_index = g.edge_index()
    layers: list[PolylineDrawing] = []
    for fi, path in enumerate(paths):
        slot_of = tuple(sigma.ordering.pos[path.order[i]] + 1 for i in range(n))
        aps = replace(base, slot_of=slot_of)
        raw = draw_uphill_path(aps, path)
        layer = PolylineDrawing()
        for v in range(n):
            layer.points[v] = raw.points[("node", path.pos[v])]
        for i in range(n - 1):
            u, v = path.order[i], path.order[i + 1]
            key = (min(u, v), max(u, v))
            if key in virtuals[fi] or key not in edge_index:
                continue
            layer.add_chain(edge_index[key], u, v, raw.chains[("path", i)])
        layer.meta["path"] = path
        layer.meta["virtual_edges"] = sorted(virtuals[fi])
        layers.append(layer)

    vertex_points = {v: base.points[sigma.ordering.pos[v] + 1] for v in range(n)}
    mld = MultiLayerDrawing(vertex_points, layers)
    k = d.k
    mld.bounds.append(
        {
            "name": f"perEdgeBends<=ceil(0.75*bandwidth)+{C1_PATH}",
            "value": math.ceil(0.75 * bw) + C1_PATH,
            "kind": "maxBends",
        }
    )
    if k >= 2:
        mld.bounds.append(
            {
                "name": "perEdgeBends<=3(k-1)n/(4k-2)+6",
                "value": 3 * (k - 1) * n / (4 * k - 2) + 6,
                "kind": "maxBends",
            }
        )
    mld.meta.update(
        {"construction": "arboricity", "bandwidth": bw, "x": sigma.x, "k": k}
    )
    return mld
