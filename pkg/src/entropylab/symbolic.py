"""Subshift descriptions, finite patterns, window languages and projections.

A window language is the set of restrictions of points of the subshift to a
finite subset of the group.  For Z-subshifts of finite type the language is
computed on the convex hull through a De Bruijn transition graph trimmed to
its bi-infinitely extendable part, then projected to the requested (possibly
gapped) support.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import GroupError, ResourceLimitError, ValidationError
from .groups import FiniteSubset, Group, ZPowerGroup, _require_same_group

LANGUAGE_LIMIT = 10**6


@dataclass(frozen=True)
class Alphabet:
    """Ordered finite list of distinct symbols."""

    symbols: tuple

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise ValidationError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValidationError("alphabet symbols must be distinct")

    @cached_property
    def _index(self):
        return {s: i for i, s in enumerate(self.symbols)}

    def index(self, symbol):
        try:
            return self._index[symbol]
        except KeyError:
            raise ValidationError(f"symbol {symbol!r} outside the alphabet") from None

    def value_key(self, values):
        """Sort key for a value tuple: alphabet indices."""
        return tuple(self._index[v] for v in values)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol):
        return symbol in self._index


@dataclass(frozen=True)
class Pattern:
    """A finite configuration: one symbol per element of its support.
    ``values`` is aligned with the canonical order of ``support``."""

    support: FiniteSubset
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != len(self.support):
            raise ValidationError("pattern values must match the support 1-1")

    @cached_property
    def _positions(self):
        return {g: i for i, g in enumerate(self.support.elements)}

    def value_at(self, g):
        try:
            return self.values[self._positions[g]]
        except KeyError:
            raise ValidationError(f"{g!r} outside the pattern support") from None

    def restrict(self, K: FiniteSubset) -> "Pattern":
        _require_same_group(self.support, K)
        pos = self._positions
        try:
            vals = tuple(self.values[pos[g]] for g in K.elements)
        except KeyError:
            raise ValidationError("restriction target not contained in the support") from None
        return Pattern(K, vals)

    def as_dict(self):
        enc = self.support.group.encode
        return {str(enc(g)): v for g, v in zip(self.support.elements, self.values)}

    def __repr__(self):
        return f"Pattern({self.as_dict()})"


class Subshift:
    """Base class; concrete kinds implement ``language_values``."""

    group: Group
    alphabet: Alphabet

    def language_values(self, F: FiniteSubset) -> list:
        """Value tuples (aligned with F's canonical order) of all patterns of
        the subshift on F, in deterministic order."""
        raise NotImplementedError

    def language(self, F: FiniteSubset) -> frozenset:
        return frozenset(Pattern(F, v) for v in self.language_values(F))

    def count(self, F: FiniteSubset) -> int:
        return len(self.language_values(F))

    def describe(self) -> dict:
        raise NotImplementedError

    def _check_window(self, F: FiniteSubset):
        if F.group != self.group:
            raise GroupError("window belongs to a different group")
        if F.is_empty:
            raise ValidationError("window must be nonempty")


@dataclass(frozen=True, eq=False)
class FullShift(Subshift):
    group: Group
    alphabet: Alphabet

    def language_values(self, F):
        self._check_window(F)
        if len(self.alphabet) ** len(F) > LANGUAGE_LIMIT:
            raise ResourceLimitError(
                f"full-shift language on {len(F)} coordinates exceeds {LANGUAGE_LIMIT} patterns"
            )
        return list(itertools.product(self.alphabet.symbols, repeat=len(F)))

    def describe(self):
        return {"kind": "full_shift", "alphabet": list(self.alphabet.symbols)}


@dataclass(frozen=True, eq=False)
class ExplicitFiniteSubshift(Subshift):
    """A subshift over a finite group given by listing every configuration.
    Configurations are tuples aligned with the canonical element order of the
    whole group; the list must be closed under all translates."""

    group: Group
    alphabet: Alphabet
    configurations: tuple

    def __post_init__(self):
        if not self.group.is_finite():
            raise ValidationError("explicit subshifts need a finite group")
        confs = tuple(tuple(c) for c in self.configurations)
        object.__setattr__(self, "configurations", confs)
        if not confs:
            raise ValidationError("configuration list must be nonempty")
        order = len(self.group.elements())
        for c in confs:
            if len(c) != order:
                raise ValidationError("configuration length must equal the group order")
            for s in c:
                self.alphabet.index(s)
        if len(set(confs)) != len(confs):
            raise ValidationError("duplicate configurations listed")
        listed = set(confs)
        for c in confs:
            for g in self.group.elements():
                if self._translate_config(c, g) not in listed:
                    raise ValidationError(
                        "configuration list is not closed under group translates"
                    )

    @cached_property
    def _positions(self):
        return {g: i for i, g in enumerate(self.group.elements())}

    def _translate_config(self, config, g):
        # (g.x)_h = x_{hg}
        pos = {h: i for i, h in enumerate(self.group.elements())}
        return tuple(config[pos[self.group.op(h, g)]] for h in self.group.elements())

    def language_values(self, F):
        self._check_window(F)
        pos = self._positions
        idx = [pos[f] for f in F.elements]
        vals = {tuple(c[i] for i in idx) for c in self.configurations}
        return sorted(vals, key=self.alphabet.value_key)

    def describe(self):
        return {
            "kind": "explicit_finite",
            "alphabet": list(self.alphabet.symbols),
            "configurations": [list(c) for c in self.configurations],
        }


@dataclass(frozen=True, eq=False)
class ZSft(Subshift):
    """Z-subshift of finite type: all bi-infinite sequences avoiding every
    forbidden word.  Window patterns are restrictions of such sequences, so
    the transition graph is trimmed to states lying on bi-infinite walks."""

    alphabet: Alphabet
    forbidden: tuple

    def __post_init__(self):
        words = tuple(tuple(w) for w in self.forbidden)
        object.__setattr__(self, "forbidden", words)
        for w in words:
            if not w:
                raise ValidationError("forbidden words must be nonempty")
            for s in w:
                self.alphabet.index(s)
        maxlen = max((len(w) for w in words), default=1)
        span = max(2, maxlen)
        order = span - 1

        def allowed(word):
            for w in words:
                lw = len(w)
                if lw <= len(word):
                    for i in range(len(word) - lw + 1):
                        if word[i : i + lw] == w:
                            return False
            return True

        states = {w for w in itertools.product(self.alphabet.symbols, repeat=order) if allowed(w)}
        succ = {}
        for u in states:
            for s in self.alphabet.symbols:
                word = u + (s,)
                if allowed(word):
                    succ.setdefault(u, []).append((s, word[1:]))
        # keep only states with arbitrarily long walks in and out
        while True:
            with_out = {u for u in states if any(v in states for _, v in succ.get(u, []))}
            with_in = {v for u in with_out for _, v in succ.get(u, []) if v in states}
            kept = with_out & with_in
            if kept == states:
                break
            states = kept
        if not states:
            raise ValidationError("the forbidden words leave an empty subshift")
        trimmed = {
            u: [(s, v) for s, v in succ.get(u, []) if v in states] for u in states
        }
        object.__setattr__(self, "_order", order)
        object.__setattr__(self, "_states", tuple(sorted(states, key=self.alphabet.value_key)))
        object.__setattr__(self, "_succ", trimmed)
        object.__setattr__(self, "_interval_cache", {})

    @property
    def group(self):
        return ZPowerGroup(1)

    def _interval_words(self, n):
        cached = self._interval_cache.get(n)
        if cached is not None:
            return cached
        if n <= self._order:
            words = sorted({st[:n] for st in self._states}, key=self.alphabet.value_key)
        else:
            if len(self.alphabet) ** n > LANGUAGE_LIMIT:
                raise ResourceLimitError(
                    f"window of length {n} may exceed {LANGUAGE_LIMIT} patterns"
                )
            words = []

            def walk(word, state, steps):
                if steps == 0:
                    words.append(tuple(word))
                    return
                for s, nxt in self._succ[state]:
                    word.append(s)
                    walk(word, nxt, steps - 1)
                    word.pop()

            for st in self._states:
                walk(list(st), st, n - self._order)
            words.sort(key=self.alphabet.value_key)
        self._interval_cache[n] = words
        return words

    def language_values(self, F):
        self._check_window(F)
        lo = F.elements[0]
        hi = F.elements[-1]
        words = self._interval_words(hi - lo + 1)
        pos = [f - lo for f in F.elements]
        vals = {tuple(w[p] for p in pos) for w in words}
        return sorted(vals, key=self.alphabet.value_key)

    def describe(self):
        return {
            "kind": "z_sft",
            "alphabet": list(self.alphabet.symbols),
            "forbidden": [_encode_word(w) for w in self.forbidden],
        }

    @staticmethod
    def of(symbols, forbidden_words):
        """Convenience constructor; string forbidden words are split into
        single-character symbols."""
        alphabet = Alphabet(tuple(symbols))
        return ZSft(alphabet, tuple(tuple(w) for w in forbidden_words))


def _encode_word(word):
    if all(isinstance(s, str) and len(s) == 1 for s in word):
        return "".join(word)
    return list(word)


def language(spec: Subshift, F: FiniteSubset) -> frozenset:
    return spec.language(F)


def count_language(spec: Subshift, F: FiniteSubset) -> int:
    return spec.count(F)


def project(patterns, K: FiniteSubset) -> frozenset:
    """Restrictions to K of a set of patterns (duplicates collapsed)."""
    pats = list(patterns)
    if not pats:
        raise ValidationError("cannot project an empty pattern set")
    return frozenset(p.restrict(K) for p in pats)
