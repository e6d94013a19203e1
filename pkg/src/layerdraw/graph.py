"""Graph and decomposition data model plus decomposition plumbing.

Vertices are integer indices 0..n-1. Edges are stored normalized (u < v) and
referred to elsewhere by their index into ``Graph.edges``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .planarity import is_planar


class GraphError(ValueError):
    """Invalid graph or decomposition input."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    @staticmethod
    def from_edges(n: int, edges) -> "Graph":
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        norm: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        return Graph(n, tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def subgraph_edges(self, edge_ids) -> "Graph":
        """Graph on the same vertex set containing only the given edges."""
        return Graph(self.n, tuple(self.edges[i] for i in sorted(edge_ids)))


@dataclass(frozen=True)
class VertexOrdering:
    """A permutation of 0..n-1 together with its inverse."""

    order: tuple[int, ...]
    pos: tuple[int, ...] = field(default=())

    @staticmethod
    def from_order(order) -> "VertexOrdering":
        order = tuple(int(v) for v in order)
        n = len(order)
        if sorted(order) != list(range(n)):
            raise GraphError("ordering is not a permutation of 0..n-1")
        pos = [0] * n
        for i, v in enumerate(order):
            pos[v] = i
        return VertexOrdering(order, tuple(pos))

    def __len__(self) -> int:
        return len(self.order)

    def position(self, v: int) -> int:
        return self.pos[v]


@dataclass(frozen=True)
class LayerDecomposition:
    graph: Graph
    layers: tuple[frozenset[int], ...]

    @property
    def t(self) -> int:
        return len(self.layers)

    def layer_graph(self, i: int) -> Graph:
        return self.graph.subgraph_edges(self.layers[i])


@dataclass(frozen=True)
class LinearForestDecomposition:
    graph: Graph
    forests: tuple[frozenset[int], ...]

    @property
    def k(self) -> int:
        return len(self.forests)


def _partition_violations(graph: Graph, parts) -> list[str]:
    report: list[str] = []
    seen: dict[int, int] = {}
    for li, part in enumerate(parts):
        for ei in part:
            if not (0 <= ei < graph.m):
                report.append(f"part {li}: edge index {ei} out of range")
            elif ei in seen:
                report.append(f"parts not disjoint: edge {ei} in parts {seen[ei]} and {li}")
            else:
                seen[ei] = li
    missing = [ei for ei in range(graph.m) if ei not in seen]
    if missing:
        report.append(f"edges not covered by any part: {missing}")
    return report


def validate_layer_decomposition(d: LayerDecomposition) -> list[str]:
    """Empty list iff the decomposition is a partition into planar layers."""
    report = _partition_violations(d.graph, d.layers)
    for li in range(d.t):
        if any(f"part {li}:" in r for r in report):
            continue
        if not is_planar(d.layer_graph(li)).planar:
            report.append(f"layer {li} not planar")
    return report


def validate_linear_forest_decomposition(d: LinearForestDecomposition) -> list[str]:
    """Empty list iff every forest is a disjoint union of paths covering E once."""
    report = _partition_violations(d.graph, d.forests)
    for fi, part in enumerate(d.forests):
        deg = [0] * d.graph.n
        parent = list(range(d.graph.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for ei in sorted(part):
            if not (0 <= ei < d.graph.m):
                continue
            u, v = d.graph.edges[ei]
            deg[u] += 1
            deg[v] += 1
            ru, rv = find(u), find(v)
            if ru == rv:
                report.append(f"forest {fi} contains a cycle through edge {ei}")
            else:
                parent[ru] = rv
        bad = [v for v in range(d.graph.n) if deg[v] > 2]
        if bad:
            report.append(f"forest {fi} has vertices of degree > 2: {bad}")
    return report


def greedy_planar_decomposition(g: Graph) -> LayerDecomposition:
    """First-fit planar layering: scan edges in input order, place each edge in
    the first layer that stays planar, opening a new layer when none accepts it.

    Deterministic given the edge order; no optimality claim on the layer count.
    """
    layers: list[list[int]] = []
    for ei in range(g.m):
        placed = False
        for layer in layers:
            candidate = g.subgraph_edges(layer + [ei])
            if is_planar(candidate).planar:
                layer.append(ei)
                placed = True
                break
        if not placed:
            layers.append([ei])
    if not layers:
        layers.append([])
    return LayerDecomposition(g, tuple(frozenset(l) for l in layers))


def forests_to_spanning_paths(
    d: LinearForestDecomposition,
) -> tuple[list[VertexOrdering], list[set[tuple[int, int]]]]:
    """Complete every linear forest to a spanning path over all n vertices.

    Returns one vertex ordering per forest plus, per forest, the set of virtual
    connector edges (as normalized vertex pairs) that were added between
    component endpoints. Components are chained in ascending order of their
    smallest vertex; each path component is traversed starting from its
    lower-labelled endpoint, so the result is deterministic.
    """
    report = validate_linear_forest_decomposition(d)
    if report:
        raise GraphError("; ".join(report))
    g = d.graph
    orderings: list[VertexOrdering] = []
    virtuals: list[set[tuple[int, int]]] = []
    for part in d.forests:
        adj: dict[int, list[int]] = {v: [] for v in range(g.n)}
        for ei in sorted(part):
            u, v = g.edges[ei]
            adj[u].append(v)
            adj[v].append(u)
        seen = [False] * g.n
        components: list[list[int]] = []
        for v in range(g.n):
            if seen[v]:
                continue
            comp = {v}
            stack = [v]
            seen[v] = True
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.add(y)
                        stack.append(y)
            ends = sorted(x for x in comp if len(adj[x]) <= 1)
            start = ends[0]
            walk = [start]
            prev = -1
            cur = start
            while True:
                nxt = [y for y in adj[cur] if y != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                walk.append(cur)
            components.append(walk)
        components.sort(key=lambda w: min(w))
        order: list[int] = []
        virt: set[tuple[int, int]] = set()
        for comp in components:
            if order:
                a, b = order[-1], comp[0]
                virt.add((min(a, b), max(a, b)))
            order.extend(comp)
        orderings.append(VertexOrdering.from_order(order))
        virtuals.append(virt)
    return orderings, virtuals
