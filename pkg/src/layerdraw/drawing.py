"""Polyline drawing containers shared by all layout constructions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Optional

from .geometry import Point


@dataclass
class PolylineDrawing:
    """A set of node points plus one polyline per edge.

    ``edge_nodes`` records each polyline's two graph endpoints so the
    validator can exempt contacts at shared endpoints. Keys are arbitrary
    hashables (edge indices, path steps, ...).
    """

    points: dict[Hashable, Point] = field(default_factory=dict)
    chains: dict[Hashable, tuple[Point, ...]] = field(default_factory=dict)
    edge_nodes: dict[Hashable, tuple[Hashable, Hashable]] = field(default_factory=dict)
    meta: dict[str, Any] = field(default_factory=dict)

    def add_chain(self, key, a, b, pts) -> None:
        self.chains[key] = tuple(pts)
        self.edge_nodes[key] = (a, b)

    def segments(self):
        for key, pts in self.chains.items():
            for i in range(len(pts) - 1):
                yield key, pts[i], pts[i + 1]


@dataclass
class MultiLayerDrawing:
    """Shared vertex placement plus one crossing-free drawing per layer."""

    vertex_points: dict[int, Point]
    layers: list[PolylineDrawing]
    bounds: list[dict] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def t(self) -> int:
        return len(self.layers)

    def edge_keys(self) -> set:
        keys: set = set()
        for layer in self.layers:
            keys |= set(layer.chains.keys())
        return keys


def transpose_point(p: Point) -> Point:
    return (p[1], p[0])


def transpose_drawing(d: PolylineDrawing) -> PolylineDrawing:
    out = PolylineDrawing(
        points={k: transpose_point(p) for k, p in d.points.items()},
        chains={k: tuple(transpose_point(p) for p in pts) for k, pts in d.chains.items()},
        edge_nodes=dict(d.edge_nodes),
        meta=dict(d.meta),
    )
    return out


def as_fraction_point(p) -> Point:
    return (Fraction(p[0]), Fraction(p[1]))
