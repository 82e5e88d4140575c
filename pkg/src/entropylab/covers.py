"""k-cover machinery over finite group subsets.

A k-cover of a base set is a multiset of finite subsets (repeats counted
separately) such that every base element lies in at least k parts.  Parts
need not be contained in the base: shifted covers use whole translates and
count coverage on the base only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import BudgetExceededError, ValidationError
from .groups import (
    FiniteSubset,
    _require_same_group,
    enumerate_subsets,
    inverse_set,
    product_set,
    translate,
)


def _part_key(part: FiniteSubset):
    key = part.group.sort_key
    return (len(part.elements), tuple(key(g) for g in part.elements))


@dataclass(frozen=True, eq=False)
class KCover:
    """Base set plus a canonically sorted multiset of nonempty parts."""

    base: FiniteSubset
    parts: tuple

    def __post_init__(self):
        if self.base.is_empty:
            raise ValidationError("the base of a cover must be nonempty")
        for p in self.parts:
            _require_same_group(self.base, p)
            if p.is_empty:
                raise ValidationError("cover parts must be nonempty")
        for f in self.base.elements:
            if not any(f in p for p in self.parts):
                raise ValidationError(f"base element {f!r} is uncovered")

    @staticmethod
    def of(base: FiniteSubset, parts) -> "KCover":
        return KCover(base, tuple(sorted(parts, key=_part_key)))

    @cached_property
    def k(self) -> int:
        return coverage_count(self)

    def encode(self):
        return {
            "base": self.base.encode(),
            "parts": [p.encode() for p in self.parts],
        }

    def __repr__(self):
        return f"KCover(base={self.base!r}, parts={list(self.parts)!r})"


def coverage_count(cover: KCover) -> int:
    """min over base elements of the multiplicity-counted membership count."""
    return min(sum(1 for p in cover.parts if f in p) for f in cover.base.elements)


def shifted_cover(F: FiniteSubset, E: FiniteSubset) -> KCover:
    """The multiset {Fg : g in F^-1 E} over base E.  Distinct shifts give
    distinct parts even when equal as sets; every element of E lies in
    exactly |F| parts, so the coverage count is |F|."""
    _require_same_group(F, E)
    if F.is_empty or E.is_empty:
        raise ValidationError("shifted covers need nonempty F and E")
    shifts = product_set(inverse_set(F), E)
    parts = [translate(F, g) for g in shifts.elements]
    return KCover.of(E, parts)


def enumerate_kcovers(F: FiniteSubset, k: int, max_parts: int, max_mult: int,
                      budget=None):
    """All multisets of at most ``max_parts`` nonempty subsets of F (per-part
    multiplicity at most ``max_mult``) whose coverage count is at least k,
    each exactly once, ordered by part count then lexicographically.  Raises
    :class:`BudgetExceededError` past ``budget`` emitted covers."""
    if k < 1 or max_parts < 1 or max_mult < 1:
        raise ValidationError("k, max_parts and max_mult must be positive")
    subsets = list(enumerate_subsets(F, len(F)))
    masks = []
    pos = {g: i for i, g in enumerate(F.elements)}
    for sub in subsets:
        m = 0
        for g in sub.elements:
            m |= 1 << pos[g]
        masks.append(m)
    npts = len(F)
    emitted = 0
    for r in range(1, max_parts + 1):
        for combo in itertools.combinations_with_replacement(range(len(subsets)), r):
            if any(
                sum(1 for c in combo if c == i) > max_mult for i in set(combo)
            ):
                continue
            counts = [0] * npts
            for i in combo:
                bits = masks[i]
                while bits:
                    low = bits & -bits
                    counts[low.bit_length() - 1] += 1
                    bits ^= low
            if min(counts) < k:
                continue
            if budget is not None and emitted >= budget:
                raise BudgetExceededError(
                    f"k-cover enumeration exceeded the budget of {budget}"
                )
            emitted += 1
            yield KCover(F, tuple(subsets[i] for i in combo))


def is_splitting(cover: KCover):
    """Whether the multiset splits into k sub-multisets that are each a
    1-cover of the base; returns (flag, one decomposition or None).

    Exact backtracking: groups are built one at a time, always extending with
    a part that covers the least uncovered base point; parts left over once
    every group covers the base are appended to the last group.
    """
    k = cover.k
    parts = cover.parts
    if k == 1:
        return True, [list(parts)]
    base = cover.base.elements
    npts = len(base)
    full = (1 << npts) - 1
    pos = {g: i for i, g in enumerate(base)}
    masks = []
    for p in parts:
        m = 0
        for g in p.elements:
            i = pos.get(g)
            if i is not None:
                m |= 1 << i
        masks.append(m)
    r = len(parts)
    unused = [True] * r
    avail = [0] * npts
    for m in masks:
        bits = m
        while bits:
            low = bits & -bits
            avail[low.bit_length() - 1] += 1
            bits ^= low
    groups = [[] for _ in range(k)]

    def feasible(gi, cur_mask):
        future = k - gi - 1
        for q in range(npts):
            need = future + (0 if (cur_mask >> q) & 1 else 1)
            if avail[q] < need:
                return False
        return True

    def take(idx):
        unused[idx] = False
        bits = masks[idx]
        while bits:
            low = bits & -bits
            avail[low.bit_length() - 1] -= 1
            bits ^= low

    def give_back(idx):
        unused[idx] = True
        bits = masks[idx]
        while bits:
            low = bits & -bits
            avail[low.bit_length() - 1] += 1
            bits ^= low

    def search(gi, cur_mask, anchor_floor):
        if cur_mask == full:
            if gi == k - 1:
                return True
            return search(gi + 1, 0, anchors[gi])
        uncovered = (~cur_mask) & full
        point = (uncovered & -uncovered).bit_length() - 1
        tried = set()
        starting = cur_mask == 0
        for idx in range(r):
            if not unused[idx]:
                continue
            if not (masks[idx] >> point) & 1:
                continue
            if starting and idx <= anchor_floor:
                continue
            sig = parts[idx]
            if sig in tried:
                continue
            tried.add(sig)
            take(idx)
            groups[gi].append(idx)
            if starting:
                anchors[gi] = idx
            if feasible(gi, cur_mask | masks[idx]) and search(
                gi, cur_mask | masks[idx], anchor_floor
            ):
                return True
            groups[gi].pop()
            give_back(idx)
        return False

    anchors = [-1] * k
    if not search(0, 0, -1):
        return False, None
    decomposition = [[parts[i] for i in grp] for grp in groups]
    leftovers = [parts[i] for i in range(r) if unused[i]]
    decomposition[-1].extend(leftovers)
    return True, decomposition


@dataclass(frozen=True)
class ShearerReport:
    lhs: float
    rhs: float
    k: int
    margin: float
    violated: bool
    tolerance: float

    def to_dict(self):
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "k": self.k,
            "margin": self.margin,
            "violated": self.violated,
            "tolerance": self.tolerance,
        }


def shearer_check(H, cover: KCover, tolerance=1e-9) -> ShearerReport:
    """Evaluate H(base) against (1/k) sum of H over the parts."""
    lhs = H(cover.base)
    rhs = sum(H(p) for p in cover.parts) / cover.k
    margin = lhs - rhs
    return ShearerReport(
        lhs=lhs,
        rhs=rhs,
        k=cover.k,
        margin=margin,
        violated=margin > tolerance,
        tolerance=tolerance,
    )
