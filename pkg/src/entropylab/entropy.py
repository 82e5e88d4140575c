"""Entropy set functions over the finite subsets of the acting group.

Topological entropy of a refined cover is log of the exact minimum subcover
cardinality; Shannon entropy wraps the measure module.  Both flavors are
served through a memoizing :class:`EntropyFunction` handle with the
convention H(empty) = 0, plus conditional and normalized values.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property

from .errors import ResourceLimitError, ValidationError
from .groups import FiniteSubset, product_set
from .measures import Observable, shannon_entropy
from .setcover import SETS_LIMIT, check_instance_budget, min_set_cover
from .symbolic import Subshift


@dataclass(frozen=True, eq=False)
class CoverSpec:
    """Cover of the system by cylinder cells on a finite support: each cell is
    a set of value tuples on the support.  Cells may overlap; the ``disjoint``
    flag is derived."""

    support: FiniteSubset
    cells: tuple
    names: tuple

    def __post_init__(self):
        cells = tuple(frozenset(c) for c in self.cells)
        object.__setattr__(self, "cells", cells)
        if not cells:
            raise ValidationError("a cover needs at least one cell")
        if any(not c for c in cells):
            raise ValidationError("cover cells must be nonempty")
        names = tuple(str(n) for n in self.names)
        if len(names) != len(cells):
            raise ValidationError("one name per cell required")
        object.__setattr__(self, "names", names)

    @cached_property
    def disjoint(self) -> bool:
        for a, b in itertools.combinations(self.cells, 2):
            if a & b:
                return False
        return True

    @staticmethod
    def time_zero(group, alphabet, symbol_cells, names=None) -> "CoverSpec":
        """Cover by the symbol at the identity: each cell is a set of symbols."""
        support = FiniteSubset.of(group, [group.identity()])
        cells = []
        for cell in symbol_cells:
            for s in cell:
                alphabet.index(s)
            cells.append(frozenset((s,) for s in cell))
        if names is None:
            names = [f"C{i}" for i in range(len(cells))]
        return CoverSpec(support, tuple(cells), tuple(names))

    @staticmethod
    def from_partition(observable: Observable) -> "CoverSpec":
        """The (disjoint) cover whose cells are the label fibers."""
        fibers = {}
        for values, label in observable.labels.items():
            fibers.setdefault(label, set()).add(values)
        labels = sorted(fibers, key=repr)
        cells = tuple(frozenset(fibers[l]) for l in labels)
        return CoverSpec(observable.support, cells, tuple(str(l) for l in labels))

    def validate_against(self, subshift: Subshift):
        covered = frozenset().union(*self.cells)
        for v in subshift.language_values(self.support):
            if v not in covered:
                raise ValidationError(
                    f"cells do not cover the window language (missing {v!r})"
                )


@dataclass(frozen=True)
class RefinedElement:
    """One element of the refined cover: a cell index per element of F plus
    the language patterns it covers (value tuples on the union support)."""

    index: tuple
    patterns: tuple

    @property
    def empty(self) -> bool:
        return not self.patterns


def _membership_maps(cover: CoverSpec, F: FiniteSubset, subshift: Subshift):
    """For each language pattern on SF, the list (per F element) of cell
    indices containing its back-translated restriction."""
    S = cover.support
    SF = product_set(S, F)
    group = SF.group
    lang = subshift.language_values(SF)
    pos = {g: i for i, g in enumerate(SF.elements)}
    index_maps = [[pos[group.op(s, g)] for s in S.elements] for g in F.elements]
    memberships = []
    for values in lang:
        per_g = []
        for idx in index_maps:
            restricted = tuple(values[i] for i in idx)
            hits = [ci for ci, cell in enumerate(cover.cells) if restricted in cell]
            per_g.append(hits)
        memberships.append(per_g)
    return lang, memberships


def refined_cover_elements(cover: CoverSpec, F: FiniteSubset, subshift: Subshift):
    """All index tuples of the refined cover with the pattern sets they cover;
    empty elements are retained (flagged through ``RefinedElement.empty``)."""
    if F.is_empty:
        raise ValidationError("F must be nonempty")
    total = len(cover.cells) ** len(F)
    if total > SETS_LIMIT:
        raise ResourceLimitError(
            f"{total} refined cover elements exceed the {SETS_LIMIT} budget"
        )
    lang, memberships = _membership_maps(cover, F, subshift)
    buckets = {}
    for values, per_g in zip(lang, memberships):
        for combo in itertools.product(*per_g):
            buckets.setdefault(combo, []).append(values)
    out = []
    for combo in itertools.product(range(len(cover.cells)), repeat=len(F)):
        out.append(RefinedElement(combo, tuple(buckets.get(combo, ()))))
    return out


@dataclass(frozen=True)
class SubcoverResult:
    size: int
    witness: tuple
    universe: int
    total_elements: int
    nonempty_elements: int


def min_subcover(cover: CoverSpec, F: FiniteSubset, subshift: Subshift,
                 node_budget=None) -> SubcoverResult:
    """Exact minimum number of refined-cover elements covering the window
    language, with one witness.  Empty refined elements cannot help and are
    excluded from the instance (but counted in the diagnostics)."""
    if F.is_empty:
        raise ValidationError("F must be nonempty")
    total = len(cover.cells) ** len(F)
    lang, memberships = _membership_maps(cover, F, subshift)
    for values, per_g in zip(lang, memberships):
        if any(not hits for hits in per_g):
            raise ValidationError(
                f"cover condition violated: pattern {values!r} is uncovered"
            )
    buckets = {}
    for i, per_g in enumerate(memberships):
        for combo in itertools.product(*per_g):
            buckets[combo] = buckets.get(combo, 0) | (1 << i)
    check_instance_budget(len(lang), len(buckets))
    keys = sorted(buckets)
    masks = [buckets[k] for k in keys]
    if node_budget is None:
        size, picks = min_set_cover(len(lang), masks)
    else:
        size, picks = min_set_cover(len(lang), masks, node_budget=node_budget)
    witness = tuple(keys[i] for i in picks)
    return SubcoverResult(
        size=size,
        witness=witness,
        universe=len(lang),
        total_elements=total,
        nonempty_elements=len(keys),
    )


def htop(cover: CoverSpec, F: FiniteSubset, subshift: Subshift,
         node_budget=None) -> float:
    """log N of the minimum subcover of the refined cover over F."""
    return math.log(min_subcover(cover, F, subshift, node_budget=node_budget).size)


class EntropyFunction:
    """Memoizing handle for F -> H(F) with H(empty) = 0.

    Cached values are deterministic: recomputation reproduces the cached
    value bit for bit, and concurrent cache writes are idempotent (identical
    values for identical keys).
    """

    def __init__(self, group, evaluator, flavor, *, system=None, observable=None,
                 measure=None, label=""):
        self.group = group
        self.flavor = flavor
        self.system = system
        self.observable = observable
        self.measure = measure
        self.label = label or flavor
        self._evaluator = evaluator
        self.cache = {}

    @staticmethod
    def topological(subshift: Subshift, cover: CoverSpec, label="",
                    node_budget=None) -> "EntropyFunction":
        cover.validate_against(subshift)
        return EntropyFunction(
            subshift.group,
            lambda F: htop(cover, F, subshift, node_budget=node_budget),
            "topological",
            system=subshift,
            observable=cover,
            label=label,
        )

    @staticmethod
    def shannon(measure, observable: Observable, label="") -> "EntropyFunction":
        return EntropyFunction(
            observable.support.group,
            lambda F: shannon_entropy(measure, observable, F),
            "shannon",
            observable=observable,
            measure=measure,
            label=label,
        )

    def value(self, F: FiniteSubset) -> float:
        if F.is_empty:
            return 0.0
        key = F.elements
        got = self.cache.get(key)
        if got is None:
            got = float(self._evaluator(F))
            self.cache[key] = got
        return got

    def __call__(self, F: FiniteSubset) -> float:
        return self.value(F)

    def normalized(self, F: FiniteSubset) -> float:
        if F.is_empty:
            raise ValidationError("normalized value needs a nonempty subset")
        return self.value(F) / len(F)

    def conditional(self, F: FiniteSubset, Fprime=None) -> float:
        """H(F | F') = H(F union F') - H(F'); empty F' gives H(F)."""
        if Fprime is None or Fprime.is_empty:
            return self.value(F)
        return self.value(F.union(Fprime)) - self.value(Fprime)

    # cache persistence ----------------------------------------------------
    def _encode_key(self, key):
        return json.dumps([self.group.encode(g) for g in key], separators=(",", ":"))

    def dump_cache(self) -> dict:
        return {self._encode_key(k): v for k, v in sorted(self.cache.items(), key=str)}

    def load_cache(self, entries: dict):
        decode = {}
        for raw, value in entries.items():
            try:
                elems = json.loads(raw)
                subset = FiniteSubset.of(self.group, (self.group.parse(e) for e in elems))
            except (ValueError, ValidationError):
                continue
            decode[subset.elements] = float(value)
        self.cache.update(decode)


def conditional_value(H: EntropyFunction, F: FiniteSubset, Fprime=None) -> float:
    return H.conditional(F, Fprime)


def normalized(H: EntropyFunction, F: FiniteSubset) -> float:
    return H.normalized(F)
