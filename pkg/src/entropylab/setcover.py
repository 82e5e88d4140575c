"""Exact minimum set cover: branch and bound with a greedy incumbent.

The instance is a universe of points 0..m-1 and candidate sets given as int
bitmasks.  Branching picks the uncovered point lying in the fewest candidate
sets and tries its covering sets ordered by descending fresh coverage; the
lower bound is ceil(uncovered / max fresh coverage).  All tie-breaks go by
set index, so the result (size and witness) is deterministic.
"""

from __future__ import annotations

import math
import sys

from .errors import ResourceLimitError, ValidationError

UNIVERSE_LIMIT = 10**6
SETS_LIMIT = 10**5
NODE_LIMIT = 10**6


def check_instance_budget(universe_size: int, set_count: int):
    if universe_size > UNIVERSE_LIMIT:
        raise ResourceLimitError(
            f"set-cover universe of {universe_size} points exceeds the {UNIVERSE_LIMIT} budget"
        )
    if set_count > SETS_LIMIT:
        raise ResourceLimitError(
            f"{set_count} candidate sets exceed the {SETS_LIMIT} budget"
        )


def min_set_cover(universe_size: int, sets: list, node_budget=NODE_LIMIT) -> tuple:
    """Return (minimum cover size, sorted indices of one minimum cover).

    Raises :class:`ResourceLimitError` once the search tree exceeds
    ``node_budget`` nodes: the answer is exact or absent, never approximate.
    """
    check_instance_budget(universe_size, len(sets))
    if universe_size == 0:
        return 0, []
    full = (1 << universe_size) - 1
    useful = [(i, s & full) for i, s in enumerate(sets) if s & full]
    union = 0
    for _, s in useful:
        union |= s
    if union != full:
        raise ValidationError("the candidate sets do not cover the universe")

    # greedy incumbent; sets scanned by descending size with an early break
    # (a set's fresh gain never exceeds its size)
    sizes = {i: s.bit_count() for i, s in useful}
    order = sorted((i for i, _ in useful), key=lambda i: (-sizes[i], i))
    alive = list(order)
    uncovered = full
    greedy = []
    while uncovered:
        best_i, best_gain = -1, 0
        for i in alive:
            if sizes[i] <= best_gain:
                break
            gain = (sets[i] & uncovered).bit_count()
            if gain > best_gain:
                best_i, best_gain = i, gain
        greedy.append(best_i)
        alive.remove(best_i)
        uncovered &= ~sets[best_i]

    point_sets = [[] for _ in range(universe_size)]
    for i, s in useful:
        bits = s
        while bits:
            low = bits & -bits
            point_sets[low.bit_length() - 1].append(i)
            bits ^= low
    if any(not c for c in point_sets):
        raise ValidationError("the candidate sets do not cover the universe")

    best = {"size": len(greedy), "picks": list(greedy), "nodes": 0}
    sys.setrecursionlimit(max(sys.getrecursionlimit(), universe_size + 1000))

    def search(uncovered, picks):
        best["nodes"] += 1
        if best["nodes"] > node_budget:
            raise ResourceLimitError(
                f"exact set-cover search exceeded {node_budget} nodes"
            )
        if not uncovered:
            if len(picks) < best["size"]:
                best["size"] = len(picks)
                best["picks"] = list(picks)
            return
        max_gain = 0
        for i in order:
            if sizes[i] <= max_gain:
                break
            gain = (sets[i] & uncovered).bit_count()
            if gain > max_gain:
                max_gain = gain
        bound = len(picks) + math.ceil(uncovered.bit_count() / max_gain)
        if bound >= best["size"]:
            return
        # rarest uncovered point
        point, rarity = -1, None
        bits = uncovered
        while bits:
            low = bits & -bits
            p = low.bit_length() - 1
            r = len(point_sets[p])
            if rarity is None or r < rarity:
                point, rarity = p, r
            bits ^= low
        candidates = sorted(
            point_sets[point], key=lambda i: (-(sets[i] & uncovered).bit_count(), i)
        )
        for i in candidates:
            picks.append(i)
            search(uncovered & ~sets[i], picks)
            picks.pop()

    search(full, [])
    return best["size"], sorted(best["picks"])
