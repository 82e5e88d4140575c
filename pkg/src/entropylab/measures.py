"""Invariant measure models and Shannon entropy of refined partitions.

Three measure kinds are supported: Bernoulli product measures over any group,
stationary Markov measures on Z (including the max-entropy Parry measure of a
one-step SFT), and explicit measures on finite-group subshifts given
configuration by configuration.

The refined partition of an observable with support S over a finite set F has
cells determined by the coordinates SF = union of the translates Sg, g in F;
``shannon_entropy`` aggregates cylinder probabilities by label tuple and
returns -sum p log p (natural log, 0 log 0 = 0).
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GroupError, ValidationError
from .groups import FiniteSubset, ZPowerGroup, product_set
from .symbolic import Alphabet, ExplicitFiniteSubshift, Pattern, Subshift, ZSft

PROB_ATOL = 1e-12
STATIONARY_ATOL = 1e-10


def _check_prob_vector(probs, what, atol=PROB_ATOL):
    probs = tuple(float(p) for p in probs)
    for p in probs:
        if p < -atol:
            raise ValidationError(f"{what} has a negative entry: {p!r}")
    if abs(sum(probs) - 1.0) > atol:
        raise ValidationError(f"{what} must sum to 1, got {sum(probs)!r}")
    return tuple(max(p, 0.0) for p in probs)


@dataclass(frozen=True, eq=False)
class Observable:
    """Partition observable with finite support: a total labeling of the
    patterns on its support.  ``labels`` maps value tuples (aligned with the
    canonical order of the support) to hashable cell labels."""

    support: FiniteSubset
    labels: dict

    def __post_init__(self):
        if self.support.is_empty:
            raise ValidationError("observable support must be nonempty")

    def label_of(self, values):
        try:
            return self.labels[values]
        except KeyError:
            raise ValidationError(
                f"label map undefined on the realized pattern {values!r}"
            ) from None

    @property
    def label_set(self):
        return set(self.labels.values())

    @staticmethod
    def time_zero(group, alphabet: Alphabet) -> "Observable":
        """The partition by the symbol at the group identity."""
        support = FiniteSubset.of(group, [group.identity()])
        return Observable(support, {(s,): s for s in alphabet.symbols})

    @staticmethod
    def identity_partition(subshift: Subshift, support: FiniteSubset) -> "Observable":
        """Each pattern on the support is its own cell (the refinement of the
        time-zero partition by the support)."""
        return Observable(support, {v: v for v in subshift.language_values(support)})

    @staticmethod
    def from_function(subshift: Subshift, support: FiniteSubset, fn) -> "Observable":
        """Label every pattern of the window language with ``fn(mapping)``,
        where mapping sends support elements to symbols."""
        labels = {}
        for v in subshift.language_values(support):
            labels[v] = fn(dict(zip(support.elements, v)))
        return Observable(support, labels)


@dataclass(frozen=True)
class BernoulliMeasure:
    """Product measure with one-coordinate marginal ``probs`` (aligned with
    the alphabet order) over the full shift on ``group``."""

    group: object
    alphabet: Alphabet
    probs: tuple

    kind = "bernoulli"

    def __post_init__(self):
        probs = _check_prob_vector(self.probs, "Bernoulli probability vector")
        if len(probs) != len(self.alphabet):
            raise ValidationError("one probability per alphabet symbol required")
        object.__setattr__(self, "probs", probs)

    def symbol_prob(self, symbol):
        return self.probs[self.alphabet.index(symbol)]


@dataclass(frozen=True, eq=False)
class MarkovMeasure:
    """Stationary Markov measure on Z: row-stochastic transition matrix plus
    its stationary row vector (pi P = pi)."""

    alphabet: Alphabet
    matrix: tuple
    stationary: tuple

    kind = "markov_z"

    def __post_init__(self):
        m = len(self.alphabet)
        rows = tuple(tuple(float(x) for x in row) for row in self.matrix)
        if len(rows) != m or any(len(r) != m for r in rows):
            raise ValidationError("transition matrix must be square over the alphabet")
        for r in rows:
            for x in r:
                if x < -PROB_ATOL:
                    raise ValidationError("transition probabilities must be nonnegative")
            if abs(sum(r) - 1.0) > 1e-9:
                raise ValidationError(f"matrix row sums to {sum(r)!r}, not 1")
        pi = _check_prob_vector(self.stationary, "stationary vector")
        if len(pi) != m:
            raise ValidationError("stationary vector length must match the alphabet")
        flow = [sum(pi[i] * rows[i][j] for i in range(m)) for j in range(m)]
        if max(abs(flow[j] - pi[j]) for j in range(m)) > STATIONARY_ATOL:
            raise ValidationError("vector is not stationary for the matrix (pi P != pi)")
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "stationary", pi)
        object.__setattr__(self, "_interval_cache", {})
        object.__setattr__(self, "_power_cache", {})

    @property
    def group(self):
        return ZPowerGroup(1)

    @cached_property
    def _np_matrix(self):
        return np.array(self.matrix, dtype=float)

    def _matrix_power(self, k):
        got = self._power_cache.get(k)
        if got is None:
            got = np.linalg.matrix_power(self._np_matrix, k)
            self._power_cache[k] = got
        return got

    def _interval_words(self, n):
        """Positive-probability words of length n with their probabilities,
        in alphabet-lexicographic order."""
        cached = self._interval_cache.get(n)
        if cached is not None:
            return cached
        syms = self.alphabet.symbols
        out = []

        def walk(word, prob, row):
            if len(word) == n:
                out.append((tuple(word), prob))
                return
            for j, s in enumerate(syms):
                p = self.matrix[row][j] if row is not None else self.stationary[j]
                if p > 0.0:
                    word.append(s)
                    walk(word, prob * p, j)
                    word.pop()

        walk([], 1.0, None)
        self._interval_cache[n] = out
        return out

    @staticmethod
    def from_matrix(alphabet: Alphabet, matrix, stationary=None) -> "MarkovMeasure":
        rows = [[float(x) for x in row] for row in matrix]
        if stationary is None:
            P = np.array(rows, dtype=float)
            m = P.shape[0]
            A = np.vstack([P.T - np.eye(m), np.ones((1, m))])
            b = np.zeros(m + 1)
            b[-1] = 1.0
            pi, *_ = np.linalg.lstsq(A, b, rcond=None)
            stationary = [max(float(x), 0.0) for x in pi]
            total = sum(stationary)
            stationary = [x / total for x in stationary]
        return MarkovMeasure(alphabet, tuple(tuple(r) for r in rows), tuple(stationary))

    @staticmethod
    def parry(sft: ZSft, tol=1e-12) -> "MarkovMeasure":
        """Max-entropy Markov measure of a one-step Z-SFT, computed by power
        iteration on the symbol adjacency matrix."""
        if any(len(w) > 2 for w in sft.forbidden):
            raise ValidationError(
                "Parry measure needs a one-step SFT (forbidden words of length <= 2)"
            )
        if any(len(w) == 1 for w in sft.forbidden):
            raise ValidationError(
                "remove banned symbols from the alphabet before building the Parry measure"
            )
        m = len(sft.alphabet)
        A = np.ones((m, m))
        for w in sft.forbidden:
            A[sft.alphabet.index(w[0]), sft.alphabet.index(w[1])] = 0.0

        def perron(M):
            v = np.ones(m) / m
            for _ in range(200000):
                w = M @ v
                norm = w.sum()
                if norm <= 0:
                    raise ValidationError("adjacency matrix is not irreducible")
                w /= norm
                if np.max(np.abs(w - v)) < tol:
                    return w
                v = w
            raise ValidationError("power iteration did not converge; adjacency not primitive")

        v = perron(A)
        u = perron(A.T)
        lam = float(v @ (A @ v)) / float(v @ v)
        P = (A * v[None, :]) / (lam * v[:, None])
        P /= P.sum(axis=1, keepdims=True)
        pi = u * v
        pi /= pi.sum()
        return MarkovMeasure(
            sft.alphabet,
            tuple(tuple(float(x) for x in row) for row in P),
            tuple(float(x) for x in pi),
        )


@dataclass(frozen=True, eq=False)
class ExplicitFiniteMeasure:
    """One probability per listed configuration of an explicit finite-group
    subshift; must be invariant under every group translate."""

    subshift: ExplicitFiniteSubshift
    probs: tuple

    kind = "explicit_finite"

    def __post_init__(self):
        probs = _check_prob_vector(self.probs, "configuration probability vector")
        confs = self.subshift.configurations
        if len(probs) != len(confs):
            raise ValidationError("one probability per configuration required")
        object.__setattr__(self, "probs", probs)
        weight = dict(zip(confs, probs))
        for c in confs:
            for g in self.subshift.group.elements():
                moved = self.subshift._translate_config(c, g)
                if abs(weight[c] - weight[moved]) > PROB_ATOL:
                    raise ValidationError("measure is not invariant under translates")

    @property
    def group(self):
        return self.subshift.group

    @property
    def alphabet(self):
        return self.subshift.alphabet


def pattern_prob(measure, pattern: Pattern) -> float:
    """Probability of the cylinder {x : x agrees with the pattern}."""
    support = pattern.support
    if isinstance(measure, BernoulliMeasure):
        if support.group != measure.group:
            raise GroupError("pattern group does not match the measure")
        p = 1.0
        for v in pattern.values:
            p *= measure.symbol_prob(v)
        return p
    if isinstance(measure, MarkovMeasure):
        if support.group != measure.group:
            raise GroupError("Markov measures live on Z")
        idx = [measure.alphabet.index(v) for v in pattern.values]
        coords = support.elements
        p = measure.stationary[idx[0]]
        for a in range(len(coords) - 1):
            gap = coords[a + 1] - coords[a]
            step = measure._matrix_power(gap)
            p *= float(step[idx[a], idx[a + 1]])
        return p
    if isinstance(measure, ExplicitFiniteMeasure):
        if support.group != measure.group:
            raise GroupError("pattern group does not match the measure")
        pos = measure.subshift._positions
        idx = [pos[g] for g in support.elements]
        total = 0.0
        for c, p in zip(measure.subshift.configurations, measure.probs):
            if all(c[i] == v for i, v in zip(idx, pattern.values)):
                total += p
        return total
    raise ValidationError(f"unknown measure kind: {measure!r}")


def iter_support_patterns(measure, coords: FiniteSubset):
    """Yield (value tuple on coords, probability) with positive probability;
    Markov marginals may repeat a tuple (callers aggregate)."""
    if isinstance(measure, BernoulliMeasure):
        if coords.group != measure.group:
            raise GroupError("coordinates do not match the measure group")
        charged = [(s, p) for s, p in zip(measure.alphabet.symbols, measure.probs) if p > 0.0]
        for combo in itertools.product(charged, repeat=len(coords)):
            yield tuple(s for s, _ in combo), math.prod(p for _, p in combo)
        return
    if isinstance(measure, MarkovMeasure):
        if coords.group != measure.group:
            raise GroupError("Markov measures live on Z")
        lo = coords.elements[0]
        pos = [f - lo for f in coords.elements]
        n = coords.elements[-1] - lo + 1
        for word, p in measure._interval_words(n):
            yield tuple(word[i] for i in pos), p
        return
    if isinstance(measure, ExplicitFiniteMeasure):
        if coords.group != measure.group:
            raise GroupError("coordinates do not match the measure group")
        gpos = measure.subshift._positions
        idx = [gpos[g] for g in coords.elements]
        for c, p in zip(measure.subshift.configurations, measure.probs):
            if p > 0.0:
                yield tuple(c[i] for i in idx), p
        return
    raise ValidationError(f"unknown measure kind: {measure!r}")


def cell_distribution(measure, observable: Observable, F: FiniteSubset) -> dict:
    """Distribution of the label tuples of the refined partition over F."""
    if F.is_empty:
        raise ValidationError("F must be nonempty")
    S = observable.support
    SF = product_set(S, F)
    group = SF.group
    pos = {g: i for i, g in enumerate(SF.elements)}
    index_maps = [
        [pos[group.op(s, g)] for s in S.elements] for g in F.elements
    ]
    dist = defaultdict(float)
    for values, p in iter_support_patterns(measure, SF):
        if p <= 0.0:
            continue
        key = tuple(
            observable.label_of(tuple(values[i] for i in idx)) for idx in index_maps
        )
        dist[key] += p
    return dict(dist)


def shannon_entropy(measure, observable: Observable, F: FiniteSubset) -> float:
    """H of the refined partition over F, in nats; 0 log 0 = 0."""
    dist = cell_distribution(measure, observable, F)
    h = 0.0
    for p in dist.values():
        if p > 0.0:
            h -= p * math.log(p)
    return max(h, 0.0)


def entropy_of_partition(measure, observable: Observable) -> float:
    group = observable.support.group
    F = FiniteSubset.of(group, [group.identity()])
    return shannon_entropy(measure, observable, F)
