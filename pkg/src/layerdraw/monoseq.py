"""Monotone-subsequence partitions (1-D and multi-dimensional) and the
grouped, smartly-labelled point sets built from them.

A partition here is always a partition of *indices* of the input sequence;
each part is an increasing list of indices whose values are non-decreasing or
non-increasing (ties broken by index, so "distinct values" is never actually
required of callers).
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass

from .graph import VertexOrdering


class NonMonotonePart(ValueError):
    pass


@dataclass(frozen=True)
class MonotonePartition:
    values: tuple
    parts: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.parts)


def _keyed(seq) -> list[tuple]:
    # Lexicographic (value, index) keys make all comparisons strict.
    return [(v, i) for i, v in enumerate(seq)]


def is_monotone(values) -> bool:
    vals = list(values)
    return vals == sorted(vals) or vals == sorted(vals, reverse=True)


def _patience_piles(keys: list[tuple]) -> tuple[list[list[int]], list[int], list[int]]:
    """Patience piles over (value, index) keys.

    Returns (piles of positions-into-keys, pile tops, back-links) where the
    number of piles equals the length of the longest strictly increasing
    subsequence and every pile is a strictly decreasing subsequence.
    """
    tops: list[tuple] = []
    piles: list[list[int]] = []
    back: list[int] = [-1] * len(keys)
    pile_of: list[int] = [0] * len(keys)
    for p, key in enumerate(keys):
        j = bisect_left(tops, key)
        if j == len(tops):
            tops.append(key)
            piles.append([p])
        else:
            tops[j] = key
            piles[j].append(p)
        pile_of[p] = j
        if j > 0:
            back[p] = piles[j - 1][-1]
    return piles, pile_of, back


def _longest_increasing(keys: list[tuple]) -> list[int]:
    piles, _, back = _patience_piles(keys)
    if not piles:
        return []
    p = piles[-1][-1]
    out = []
    while p != -1:
        out.append(p)
        p = back[p]
    out.reverse()
    return out


def _extract_round(keys: list[tuple], positions: list[int], cap: int) -> list[int]:
    """One extraction round: a longest non-decreasing or non-increasing run,
    optionally truncated to ``cap``, as positions into ``positions``."""
    sub = [keys[p] for p in positions]
    inc = _longest_increasing(sub)
    dec = _longest_increasing([(-k[0], k[1]) for k in sub])
    best = inc if len(inc) >= len(dec) else dec
    return best[:cap] if cap else best


def partition_monotone(seq) -> MonotonePartition:
    """Partition into at most 2*ceil(sqrt(n)) monotone subsequences by
    repeatedly extracting a longest monotone subsequence."""
    values = tuple(seq)
    n = len(values)
    keys = _keyed(values)
    remaining = list(range(n))
    parts: list[tuple[int, ...]] = []
    while remaining:
        local = _extract_round(keys, remaining, cap=0)
        chosen = [remaining[j] for j in local]
        parts.append(tuple(chosen))
        chosen_set = set(chosen)
        remaining = [p for p in remaining if p not in chosen_set]
    return MonotonePartition(values, tuple(parts))


def partition_monotone_capped(seq) -> MonotonePartition:
    """As partition_monotone but every part has length <= ceil(sqrt(n)).

    Two phases: while more than (c-1)^2 elements remain (c = ceil(sqrt n)),
    a monotone run of length exactly c exists and is extracted; afterwards a
    longest-run extraction finishes within the 2c overall part budget. The
    final part of a round may be shorter than c.
    """
    values = tuple(seq)
    n = len(values)
    if n == 0:
        return MonotonePartition(values, ())
    c = math.isqrt(n)
    if c * c < n:
        c += 1
    keys = _keyed(values)
    remaining = list(range(n))
    parts: list[tuple[int, ...]] = []
    while remaining:
        local = _extract_round(keys, remaining, cap=c)
        chosen = [remaining[j] for j in local]
        parts.append(tuple(chosen))
        chosen_set = set(chosen)
        remaining = [p for p in remaining if p not in chosen_set]
    return MonotonePartition(values, tuple(parts))


def partition_tuples(rows) -> MonotonePartition:
    """Partition kappa-tuples into subsequences monotone in every dimension.

    Cap-partition on dimension 1, then recurse per part on the remaining
    dimensions; the part count stays within ceil(2^kappa * n^(1 - 1/2^kappa)).
    """
    rows = [tuple(r) for r in rows]
    if not rows:
        return MonotonePartition((), ())
    kappa = len(rows[0])
    if any(len(r) != kappa for r in rows):
        raise ValueError("all tuples must have the same dimension")
    if kappa < 1:
        raise ValueError("tuples must have at least one dimension")

    def rec(indices: list[int], dim: int) -> list[tuple[int, ...]]:
        sub = partition_monotone_capped([rows[i][dim] for i in indices])
        mapped = [tuple(indices[j] for j in part) for part in sub.parts]
        if dim == kappa - 1:
            return mapped
        out: list[tuple[int, ...]] = []
        for part in mapped:
            out.extend(rec(list(part), dim + 1))
        return out

    parts = rec(list(range(len(rows))), 0)
    return MonotonePartition(tuple(rows), tuple(parts))


def tuple_part_bound(n: int, kappa: int) -> int:
    lam = 2 ** kappa
    return math.ceil((2 ** kappa) * (n ** (1 - 1 / lam))) if n else 0


# ---------------------------------------------------------------------------
# (k, n)-groups and smart labellings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KNGroup:
    """Partition of n x-ordered slots into k contiguous groups, together with,
    per tracked path, a direction flag per group and the labelling order."""

    n: int
    ranges: tuple[tuple[int, int], ...]  # half-open slot ranges covering 0..n-1
    directions: tuple[tuple[str, ...], ...]  # per tracked path, per group
    labellings: tuple[tuple[int, ...], ...]  # per tracked path: slot of label i

    @property
    def k(self) -> int:
        return len(self.ranges)

    def group_of_slot(self, s: int) -> int:
        for gi, (a, b) in enumerate(self.ranges):
            if a <= s < b:
                return gi
        raise IndexError(s)


def _direction_of(labels_in_group: list[int]) -> str:
    if labels_in_group == sorted(labels_in_group):
        return "rightward"
    if labels_in_group == sorted(labels_in_group, reverse=True):
        return "leftward"
    raise NonMonotonePart(f"group labels {labels_in_group} are not monotone")


def build_kn_group(
    parts: MonotonePartition, tracked: list[VertexOrdering]
) -> tuple[KNGroup, dict[int, int]]:
    """Lay the parts out left to right as contiguous slot groups and derive,
    for every tracked path, per-group direction flags and the labelling.

    Points within a group sit in increasing order of the first tracked path's
    positions. Raises NonMonotonePart if some part is not monotone in one of
    the tracked position dimensions. Returns the KNGroup and the slot
    assignment (original point index -> slot).
    """
    if not tracked:
        raise ValueError("at least one tracked path required")
    n = len(parts.values)
    slot_of_point: dict[int, int] = {}
    ranges: list[tuple[int, int]] = []
    cursor = 0
    for part in parts.parts:
        ordered = sorted(part, key=lambda p: tracked[0].pos[p])
        ranges.append((cursor, cursor + len(ordered)))
        for p in ordered:
            slot_of_point[p] = cursor
            cursor += 1
    directions: list[tuple[str, ...]] = []
    labellings: list[tuple[int, ...]] = []
    for path in tracked:
        # Label i is the slot of the point with position i on this path.
        by_pos = sorted(range(n), key=lambda p: path.pos[p])
        labelling = tuple(slot_of_point[p] for p in by_pos)
        label_of_slot = [0] * n
        for lab, s in enumerate(labelling):
            label_of_slot[s] = lab
        dirs = []
        for a, b in ranges:
            dirs.append(_direction_of([label_of_slot[s] for s in range(a, b)]))
        directions.append(tuple(dirs))
        labellings.append(labelling)
    return (
        KNGroup(n, tuple(ranges), tuple(directions), tuple(labellings)),
        slot_of_point,
    )


def smart_labelling_prefix_ok(kn: KNGroup, path_id: int, upto: int) -> bool:
    """Check the prefix property: the first ``upto`` labels of a tracked path
    occupy a contiguous run at each group's directional end."""
    labelling = kn.labellings[path_id]
    placed = set(labelling[:upto])
    for gi, (a, b) in enumerate(kn.ranges):
        slots = list(range(a, b))
        inside = [s in placed for s in slots]
        if kn.directions[path_id][gi] == "rightward":
            run = True
            for i, f in enumerate(inside):
                if not f:
                    run = False
                elif not run:
                    return False
        else:
            run = True
            for i, f in enumerate(reversed(inside)):
                if not f:
                    run = False
                elif not run:
                    return False
    return True
