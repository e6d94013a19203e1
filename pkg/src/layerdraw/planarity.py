"""Planarity testing with a combinatorial embedding on success.

Backed by networkx's LR-planarity implementation; the embedding is returned
as a rotation system (counterclockwise neighbor order per vertex) and checked
for Euler consistency before being handed to callers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import networkx as nx


@dataclass(frozen=True)
class PlanarityResult:
    planar: bool
    embedding: Optional[dict[int, list[int]]] = None


def _to_nx(graph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    g.add_edges_from(graph.edges)
    return g


def count_faces(embedding: dict[int, list[int]]) -> int:
    """Number of faces of the rotation system (connected components add one
    shared outer face each; the caller accounts for that via Euler's formula).
    """
    succ: dict[tuple[int, int], tuple[int, int]] = {}
    for v, ring in embedding.items():
        for i, w in enumerate(ring):
            # Next half-edge along the face to the left of (v, w).
            ring_w = embedding[w]
            j = ring_w.index(v)
            nxt = ring_w[(j - 1) % len(ring_w)]
            succ[(v, w)] = (w, nxt)
    faces = 0
    seen: set[tuple[int, int]] = set()
    for he in succ:
        if he in seen:
            continue
        faces += 1
        cur = he
        while cur not in seen:
            seen.add(cur)
            cur = succ[cur]
    return faces


def embedding_is_euler_consistent(graph, embedding: dict[int, list[int]]) -> bool:
    """faces - edges + vertices == 1 + number of connected components."""
    nxg = _to_nx(graph)
    comps = nx.number_connected_components(nxg) if graph.n else 0
    m = graph.m
    isolated = sum(1 for v in range(graph.n) if not embedding.get(v))
    if m == 0:
        return True
    faces = count_faces({v: r for v, r in embedding.items() if r})
    # Each component with at least one edge contributes its own outer face in
    # the traversal count; Euler per component: n_c - m_c + f_c = 2.
    edge_comp_nodes = graph.n - isolated
    edge_comps = comps - isolated
    return faces - m + edge_comp_nodes == 2 * edge_comps


def is_planar(graph) -> PlanarityResult:
    """Planarity test; on success also returns a combinatorial embedding
    (ccw cyclic neighbor order per vertex) satisfying Euler consistency.
    """
    if graph.m > max(0, 3 * graph.n - 6) and graph.n >= 3:
        return PlanarityResult(False)
    ok, emb = nx.check_planarity(_to_nx(graph), counterexample=False)
    if not ok:
        return PlanarityResult(False)
    rotation: dict[int, list[int]] = {}
    for v in range(graph.n):
        ring: list[int] = []
        first = None
        for w in emb.neighbors_cw_order(v):
            if first is None:
                first = w
            ring.append(w)
        rotation[v] = ring
    return PlanarityResult(True, rotation)
