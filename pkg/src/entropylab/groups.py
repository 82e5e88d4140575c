"""Acting groups, canonical elements, and finite subsets.

Elements are plain hashable values in a canonical form fixed per group kind:
residues for cyclic groups, integers or integer vectors for Z^d, indices for
explicit finite groups, reduced words (tuples of signed generator indices)
for free groups.  The group object owns arithmetic, validation, ordering and
encoding of its elements; a :class:`FiniteSubset` pairs a group with a
duplicate-free, canonically sorted element tuple.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .errors import GroupError, ValidationError


class Group:
    """Base class for acting groups.  Subclasses are frozen dataclasses and
    compare equal exactly when they describe the same group."""

    kind = "abstract"

    def identity(self):
        raise NotImplementedError

    def op(self, g, h):
        raise NotImplementedError

    def inverse(self, g):
        raise NotImplementedError

    def canonical(self, g):
        """Validate ``g`` and return its canonical form."""
        raise NotImplementedError

    def sort_key(self, g):
        return g

    def encode(self, g):
        """JSON-friendly encoding of a canonical element."""
        return g

    def parse(self, token):
        """Inverse of :meth:`encode` (accepts canonical forms too)."""
        return self.canonical(token)

    def is_finite(self):
        return False

    def elements(self):
        raise GroupError(f"{self.kind} group is not finite")

    def describe(self) -> dict:
        raise NotImplementedError


def _require_int(x, what):
    if isinstance(x, bool) or not isinstance(x, int):
        raise GroupError(f"{what} must be an integer, got {x!r}")
    return x


@dataclass(frozen=True)
class CyclicGroup(Group):
    """Z/nZ with elements 0..n-1."""

    n: int
    kind = "cyclic"

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"cyclic group order must be a positive integer, got {self.n!r}")

    def identity(self):
        return 0

    def op(self, g, h):
        return (g + h) % self.n

    def inverse(self, g):
        return (-g) % self.n

    def canonical(self, g):
        _require_int(g, "cyclic element")
        if not 0 <= g < self.n:
            raise GroupError(f"not a residue mod {self.n}: {g!r}")
        return g

    def is_finite(self):
        return True

    def elements(self):
        return list(range(self.n))

    def describe(self):
        return {"kind": "cyclic", "n": self.n}


@dataclass(frozen=True)
class ZPowerGroup(Group):
    """Z^d; elements are plain ints for d=1, integer d-tuples otherwise."""

    d: int
    kind = "z_power"

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, int) or self.d < 1:
            raise ValidationError(f"z_power dimension must be a positive integer, got {self.d!r}")

    def identity(self):
        return 0 if self.d == 1 else (0,) * self.d

    def op(self, g, h):
        if self.d == 1:
            return g + h
        return tuple(a + b for a, b in zip(g, h))

    def inverse(self, g):
        if self.d == 1:
            return -g
        return tuple(-a for a in g)

    def canonical(self, g):
        if self.d == 1:
            if isinstance(g, (list, tuple)) and len(g) == 1:
                g = g[0]
            return _require_int(g, "Z element")
        if not isinstance(g, (list, tuple)) or len(g) != self.d:
            raise GroupError(f"Z^{self.d} element must be a length-{self.d} integer vector, got {g!r}")
        return tuple(_require_int(x, "Z^d coordinate") for x in g)

    def encode(self, g):
        return g if self.d == 1 else list(g)

    def describe(self):
        return {"kind": "z_power", "d": self.d}


@dataclass(frozen=True)
class CayleyTableGroup(Group):
    """Finite group given by its multiplication table over 0..m-1.

    The table is validated on construction: closure, a two-sided identity,
    inverses, and associativity.
    """

    table: tuple
    kind = "finite_explicit"

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.table)
        object.__setattr__(self, "table", rows)
        m = len(rows)
        if m == 0:
            raise ValidationError("empty multiplication table")
        for row in rows:
            if len(row) != m:
                raise ValidationError("multiplication table must be square")
            for x in row:
                if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < m:
                    raise ValidationError(f"table entry out of range: {x!r}")
        ident = None
        for e in range(m):
            if all(rows[e][a] == a and rows[a][e] == a for a in range(m)):
                ident = e
                break
        if ident is None:
            raise ValidationError("multiplication table has no identity")
        inv = [None] * m
        for a in range(m):
            for b in range(m):
                if rows[a][b] == ident and rows[b][a] == ident:
                    inv[a] = b
                    break
            if inv[a] is None:
                raise ValidationError(f"element {a} has no inverse")
        for a in range(m):
            for b in range(m):
                for c in range(m):
                    if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
                        raise ValidationError(f"table is not associative at ({a},{b},{c})")
        object.__setattr__(self, "_identity", ident)
        object.__setattr__(self, "_inverses", tuple(inv))

    def __repr__(self):
        return f"CayleyTableGroup(order={len(self.table)})"

    def identity(self):
        return self._identity

    def op(self, g, h):
        return self.table[g][h]

    def inverse(self, g):
        return self._inverses[g]

    def canonical(self, g):
        _require_int(g, "group element index")
        if not 0 <= g < len(self.table):
            raise GroupError(f"element index out of range: {g!r}")
        return g

    def is_finite(self):
        return True

    def elements(self):
        return list(range(len(self.table)))

    def describe(self):
        return {"kind": "finite_explicit", "table": [list(row) for row in self.table]}


_MAX_FREE_RANK = len(string.ascii_lowercase)


@dataclass(frozen=True)
class FreeGroup(Group):
    """Free group of the given rank.  Elements are reduced words stored as
    tuples of nonzero ints: +i is the i-th generator, -i its inverse.
    Encoded form uses letters, e.g. ``"aB"`` for a*b^-1 and ``"e"`` for the
    identity.  Word length is capped; exceeding the cap is an error, never a
    silent truncation."""

    rank: int
    max_word_len: int = 32
    kind = "free"

    def __post_init__(self):
        if isinstance(self.rank, bool) or not isinstance(self.rank, int) or self.rank < 1:
            raise ValidationError(f"free group rank must be a positive integer, got {self.rank!r}")
        if self.rank > _MAX_FREE_RANK:
            raise ValidationError(f"free group rank capped at {_MAX_FREE_RANK}")
        if not isinstance(self.max_word_len, int) or self.max_word_len < 1:
            raise ValidationError("max_word_len must be a positive integer")

    def identity(self):
        return ()

    def op(self, g, h):
        word = list(g)
        for x in h:
            if word and word[-1] == -x:
                word.pop()
            else:
                word.append(x)
        if len(word) > self.max_word_len:
            raise GroupError(
                f"reduced word length {len(word)} exceeds the cap {self.max_word_len}"
            )
        return tuple(word)

    def inverse(self, g):
        return tuple(-x for x in reversed(g))

    def canonical(self, g):
        if isinstance(g, str):
            return self._parse_word(g)
        if not isinstance(g, (list, tuple)):
            raise GroupError(f"free-group element must be a word, got {g!r}")
        word = []
        for x in g:
            _require_int(x, "generator index")
            if x == 0 or abs(x) > self.rank:
                raise GroupError(f"generator index out of range: {x!r}")
            if word and word[-1] == -x:
                word.pop()
            else:
                word.append(x)
        if len(word) > self.max_word_len:
            raise GroupError(f"word longer than the cap {self.max_word_len}")
        return tuple(word)

    def _parse_word(self, s):
        if s in ("e", ""):
            return ()
        word = []
        for ch in s:
            if ch in string.ascii_lowercase:
                x = ord(ch) - ord("a") + 1
            elif ch in string.ascii_uppercase:
                x = -(ord(ch) - ord("A") + 1)
            else:
                raise GroupError(f"bad character {ch!r} in word {s!r}")
            if abs(x) > self.rank:
                raise GroupError(f"letter {ch!r} outside rank-{self.rank} alphabet")
            if word and word[-1] == -x:
                word.pop()
            else:
                word.append(x)
        if len(word) > self.max_word_len:
            raise GroupError(f"word longer than the cap {self.max_word_len}")
        return tuple(word)

    def sort_key(self, g):
        return (len(g), g)

    def encode(self, g):
        if not g:
            return "e"
        out = []
        for x in g:
            letter = string.ascii_lowercase[abs(x) - 1]
            out.append(letter if x > 0 else letter.upper())
        return "".join(out)

    def generators(self):
        return [(i,) for i in range(1, self.rank + 1)]

    def ball(self, radius):
        """All reduced words of length <= radius, as a FiniteSubset."""
        if radius < 0:
            raise ValidationError("radius must be nonnegative")
        current = {()}
        seen = {()}
        steps = [(i,) for i in range(1, self.rank + 1)]
        steps += [(-i,) for i in range(1, self.rank + 1)]
        for _ in range(radius):
            nxt = set()
            for w in current:
                for s in steps:
                    nxt.add(self.op(w, s))
            current = nxt - seen
            seen |= nxt
        return FiniteSubset.of(self, seen)

    def describe(self):
        d = {"kind": "free", "rank": self.rank}
        if self.max_word_len != 32:
            d["max_word_len"] = self.max_word_len
        return d


@dataclass(frozen=True)
class FiniteSubset:
    """A duplicate-free, canonically sorted finite subset of a group.

    May be empty (the empty condition H(F|empty)=H(F) needs it); construct
    through :meth:`of`, which canonicalizes and sorts.
    """

    group: Group
    elements: tuple = ()

    @staticmethod
    def of(group, elems) -> "FiniteSubset":
        canon = {group.canonical(g) for g in elems}
        return FiniteSubset(group, tuple(sorted(canon, key=group.sort_key)))

    @cached_property
    def _as_set(self):
        return frozenset(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self._as_set

    @property
    def is_empty(self):
        return not self.elements

    def union(self, other):
        _require_same_group(self, other)
        merged = sorted(self._as_set | other._as_set, key=self.group.sort_key)
        return FiniteSubset(self.group, tuple(merged))

    def intersection(self, other):
        _require_same_group(self, other)
        kept = sorted(self._as_set & other._as_set, key=self.group.sort_key)
        return FiniteSubset(self.group, tuple(kept))

    def encode(self):
        return [self.group.encode(g) for g in self.elements]

    def __repr__(self):
        inner = ", ".join(str(self.group.encode(g)) for g in self.elements)
        return "{" + inner + "}"


def _require_same_group(a: FiniteSubset, b: FiniteSubset):
    if a.group != b.group:
        raise GroupError("mixed-group operands")


def empty_subset(group) -> FiniteSubset:
    return FiniteSubset(group, ())


def translate(F: FiniteSubset, g) -> FiniteSubset:
    """Right translate Fg = {fg : f in F}."""
    group = F.group
    g = group.canonical(g)
    return FiniteSubset.of(group, (group.op(f, g) for f in F.elements))


def product_set(E: FiniteSubset, F: FiniteSubset) -> FiniteSubset:
    """EF = {ef : e in E, f in F}, duplicate-free."""
    _require_same_group(E, F)
    group = E.group
    return FiniteSubset.of(group, (group.op(e, f) for e in E.elements for f in F.elements))


def inverse_set(F: FiniteSubset) -> FiniteSubset:
    return FiniteSubset.of(F.group, (F.group.inverse(f) for f in F.elements))


def folner(group, n) -> FiniteSubset:
    """Canonical Folner set: the box [0,n)^d for Z^d, the whole group for
    finite groups (for any n).  Rejected for free groups."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError(f"Folner index must be a positive integer, got {n!r}")
    if isinstance(group, ZPowerGroup):
        if group.d == 1:
            return FiniteSubset(group, tuple(range(n)))
        return FiniteSubset(group, tuple(itertools.product(range(n), repeat=group.d)))
    if group.is_finite():
        return FiniteSubset.of(group, group.elements())
    raise GroupError(f"no canonical Folner sequence for {group.kind} groups")


def enumerate_subsets(window: FiniteSubset, max_size) -> Iterator[FiniteSubset]:
    """All nonempty subsets of ``window`` of cardinality <= max_size, each
    exactly once, ordered by size then lexicographically."""
    if isinstance(max_size, bool) or not isinstance(max_size, int) or max_size < 1:
        raise ValidationError(f"max_size must be a positive integer, got {max_size!r}")
    if max_size > len(window):
        raise ValidationError(
            f"max_size {max_size} exceeds the window size {len(window)}"
        )
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(window.elements, size):
            yield FiniteSubset(window.group, combo)
