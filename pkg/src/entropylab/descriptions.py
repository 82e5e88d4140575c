"""System descriptions: loading, validation, serialization and presets.

A description bundles a group, a subshift, an observable (a cover or a
partition) and an optional invariant measure.  The on-disk form is a single
JSON document; loading cross-validates the parts (alphabet consistency,
shift invariance, the cover condition, Markov support compatibility) and
serialization round-trips to a fixed point.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .entropy import CoverSpec, EntropyFunction
from .errors import ValidationError
from .groups import (
    CayleyTableGroup,
    CyclicGroup,
    FiniteSubset,
    FreeGroup,
    Group,
    ZPowerGroup,
)
from .measures import (
    BernoulliMeasure,
    ExplicitFiniteMeasure,
    MarkovMeasure,
    Observable,
)
from .symbolic import Alphabet, ExplicitFiniteSubshift, FullShift, Subshift, ZSft

PROB_ATOL = 1e-12


def parse_group(d: dict) -> Group:
    if not isinstance(d, dict) or "kind" not in d:
        raise ValidationError("group description must be an object with a 'kind'")
    kind = d["kind"]
    if kind == "cyclic":
        return CyclicGroup(_field(d, "n"))
    if kind in ("z", "z_power"):
        return ZPowerGroup(d.get("d", 1))
    if kind == "finite_explicit":
        return CayleyTableGroup(tuple(tuple(r) for r in _field(d, "table")))
    if kind == "free":
        return FreeGroup(_field(d, "rank"), d.get("max_word_len", 32))
    raise ValidationError(f"unknown group kind {kind!r}")


def _field(d, name):
    if name not in d:
        raise ValidationError(f"missing field {name!r}")
    return d[name]


def parse_subshift(d: dict, group: Group) -> Subshift:
    if not isinstance(d, dict) or "kind" not in d:
        raise ValidationError("subshift description must be an object with a 'kind'")
    kind = d["kind"]
    alphabet = Alphabet(tuple(_field(d, "alphabet")))
    if kind == "full_shift":
        return FullShift(group, alphabet)
    if kind == "explicit_finite":
        confs = tuple(tuple(c) for c in _field(d, "configurations"))
        return ExplicitFiniteSubshift(group, alphabet, confs)
    if kind == "z_sft":
        if not isinstance(group, ZPowerGroup) or group.d != 1:
            raise ValidationError("z_sft subshifts act on Z (z_power with d=1)")
        forbidden = tuple(tuple(w) for w in _field(d, "forbidden"))
        return ZSft(alphabet, forbidden)
    raise ValidationError(f"unknown subshift kind {kind!r}")


def parse_observable(d: dict, subshift: Subshift):
    """Returns (observable object, normalized form dict).  Partitions come
    back as :class:`Observable`, covers as :class:`CoverSpec`."""
    if not isinstance(d, dict) or "kind" not in d:
        raise ValidationError("observable description must be an object with a 'kind'")
    kind = d["kind"]
    group, alphabet = subshift.group, subshift.alphabet
    if kind == "time_zero_partition":
        return Observable.time_zero(group, alphabet), {"kind": "time_zero_partition"}
    if kind == "time_zero_cover":
        cells = [list(c) for c in _field(d, "cells")]
        names = d.get("names")
        cover = CoverSpec.time_zero(group, alphabet, cells, names)
        form = {"kind": "time_zero_cover", "cells": cells}
        if names is not None:
            form["names"] = list(names)
        return cover, form
    if kind == "pattern_partition":
        support = parse_subset(group, _field(d, "support"))
        obs = Observable.identity_partition(subshift, support)
        return obs, {"kind": "pattern_partition", "support": support.encode()}
    if kind == "sign_products":
        pairs = [[group.parse(u), group.parse(v)] for u, v in _field(d, "pairs")]
        for s in alphabet.symbols:
            if not isinstance(s, (int, float)):
                raise ValidationError("sign_products observables need numeric symbols")
        support = FiniteSubset.of(group, [g for p in pairs for g in p])

        def label(mapping):
            return tuple(mapping[u] * mapping[v] for u, v in pairs)

        obs = Observable.from_function(subshift, support, label)
        form = {"kind": "sign_products",
                "pairs": [[group.encode(u), group.encode(v)] for u, v in pairs]}
        return obs, form
    raise ValidationError(f"unknown observable kind {kind!r}")


def parse_measure(d: dict, subshift: Subshift):
    if not isinstance(d, dict) or "kind" not in d:
        raise ValidationError("measure description must be an object with a 'kind'")
    kind = d["kind"]
    if kind == "bernoulli":
        probs = tuple(float(p) for p in _field(d, "probs"))
        measure = BernoulliMeasure(subshift.group, subshift.alphabet, probs)
        return measure, {"kind": "bernoulli", "probs": list(probs)}
    if kind == "markov":
        matrix = tuple(tuple(float(x) for x in row) for row in _field(d, "matrix"))
        stationary = d.get("stationary")
        measure = MarkovMeasure.from_matrix(subshift.alphabet, matrix, stationary)
        _check_markov_support(measure, subshift)
        form = {"kind": "markov", "matrix": [list(r) for r in matrix]}
        if stationary is not None:
            form["stationary"] = [float(x) for x in stationary]
        return measure, form
    if kind == "parry":
        if not isinstance(subshift, ZSft):
            raise ValidationError("the Parry measure is derived from a z_sft subshift")
        measure = MarkovMeasure.parry(subshift)
        return measure, {"kind": "parry"}
    if kind == "explicit":
        if not isinstance(subshift, ExplicitFiniteSubshift):
            raise ValidationError("explicit measures need an explicit_finite subshift")
        probs = tuple(float(p) for p in _field(d, "probs"))
        measure = ExplicitFiniteMeasure(subshift, probs)
        return measure, {"kind": "explicit", "probs": list(probs)}
    raise ValidationError(f"unknown measure kind {kind!r}")


def _check_markov_support(measure: MarkovMeasure, subshift: Subshift):
    if not isinstance(subshift, ZSft):
        return
    if any(len(w) > 2 for w in subshift.forbidden):
        raise ValidationError(
            "Markov measures pair with one-step SFTs (forbidden words of length <= 2)"
        )
    alpha = subshift.alphabet
    for w in subshift.forbidden:
        if len(w) == 1:
            i = alpha.index(w[0])
            if measure.stationary[i] > PROB_ATOL:
                raise ValidationError(f"measure charges the banned symbol {w[0]!r}")
        else:
            i, j = alpha.index(w[0]), alpha.index(w[1])
            if measure.matrix[i][j] > PROB_ATOL:
                raise ValidationError(
                    f"measure charges the forbidden transition {w[0]!r}->{w[1]!r}"
                )


def parse_subset(group: Group, tokens) -> FiniteSubset:
    if not isinstance(tokens, (list, tuple)):
        raise ValidationError("a subset is encoded as a list of group elements")
    return FiniteSubset.of(group, (group.parse(t) for t in tokens))


@dataclass(frozen=True, eq=False)
class SystemDescription:
    group: Group
    subshift: Subshift
    observable: object           # Observable or CoverSpec
    observable_form: dict
    measure: object = None       # one of the measure kinds, or None
    measure_form: dict = None
    name: str = None

    @property
    def has_cover(self):
        return isinstance(self.observable, CoverSpec)

    def cover(self) -> CoverSpec:
        """The observable as a cover (partitions become disjoint covers)."""
        if isinstance(self.observable, CoverSpec):
            return self.observable
        return CoverSpec.from_partition(self.observable)

    def partition(self, time_zero=False) -> Observable:
        """The observable as a partition.  Non-disjoint covers have no
        partition; pass ``time_zero=True`` to fall back to the time-zero
        partition instead."""
        if time_zero:
            return Observable.time_zero(self.group, self.subshift.alphabet)
        if isinstance(self.observable, Observable):
            return self.observable
        cov = self.observable
        if not cov.disjoint:
            raise ValidationError(
                "the bundled cover is not disjoint; no partition is derived "
                "(use the time-zero partition instead)"
            )
        labels = {}
        for name, cell in zip(cov.names, cov.cells):
            for values in cell:
                labels[values] = name
        return Observable(cov.support, labels)

    def entropy_function(self, flavor, *, time_zero=False) -> EntropyFunction:
        if flavor == "topological":
            return EntropyFunction.topological(self.subshift, self.cover(),
                                               label=self.name or "topological")
        if flavor == "shannon":
            if self.measure is None:
                raise ValidationError("the shannon flavor needs a measure")
            obs = self.partition(time_zero=time_zero)
            return EntropyFunction.shannon(self.measure, obs,
                                           label=self.name or "shannon")
        raise ValidationError(f"unknown flavor {flavor!r}")

    def to_dict(self) -> dict:
        out = {}
        if self.name is not None:
            out["name"] = self.name
        out["group"] = self.group.describe()
        out["subshift"] = self.subshift.describe()
        out["observable"] = self.observable_form
        if self.measure_form is not None:
            out["measure"] = self.measure_form
        return out

    def digest(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()


def from_dict(d: dict) -> SystemDescription:
    if not isinstance(d, dict):
        raise ValidationError("a system description is a JSON object")
    group = parse_group(_field(d, "group"))
    subshift = parse_subshift(_field(d, "subshift"), group)
    observable, obs_form = parse_observable(_field(d, "observable"), subshift)
    measure = measure_form = None
    if d.get("measure") is not None:
        measure, measure_form = parse_measure(d["measure"], subshift)
    desc = SystemDescription(
        group=group,
        subshift=subshift,
        observable=observable,
        observable_form=obs_form,
        measure=measure,
        measure_form=measure_form,
        name=d.get("name"),
    )
    if isinstance(observable, CoverSpec):
        observable.validate_against(subshift)
    return desc


def loads(text: str) -> SystemDescription:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"bad JSON: {e}") from None
    return from_dict(d)


def load_description(path) -> SystemDescription:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e}") from None
    return loads(text)


# presets --------------------------------------------------------------------

def _golden_mean() -> dict:
    return {
        "name": "golden_mean",
        "group": {"kind": "z_power", "d": 1},
        "subshift": {"kind": "z_sft", "alphabet": ["0", "1"], "forbidden": ["11"]},
        "observable": {"kind": "time_zero_partition"},
        "measure": {"kind": "parry"},
    }


_Z3_CONFIGS = [
    ["a", "a", "a"],
    ["b", "b", "b"],
    ["c", "c", "c"],
    ["a", "b", "c"],
    ["b", "c", "a"],
    ["c", "a", "b"],
]


def _z3_example() -> dict:
    return {
        "name": "z3_example",
        "group": {"kind": "cyclic", "n": 3},
        "subshift": {
            "kind": "explicit_finite",
            "alphabet": ["a", "b", "c"],
            "configurations": [list(c) for c in _Z3_CONFIGS],
        },
        "observable": {"kind": "time_zero_cover",
                       "cells": [["a", "b"], ["b", "c"], ["a", "c"]]},
        "measure": {"kind": "explicit", "probs": [1 / 6] * 6},
    }


def _z3_example_5pt() -> dict:
    confs = [c for c in _Z3_CONFIGS if c != ["c", "c", "c"]]
    return {
        "name": "z3_example_5pt",
        "group": {"kind": "cyclic", "n": 3},
        "subshift": {
            "kind": "explicit_finite",
            "alphabet": ["a", "b", "c"],
            "configurations": [list(c) for c in confs],
        },
        "observable": {"kind": "time_zero_cover",
                       "cells": [["a", "b"], ["b", "c"], ["a", "c"]]},
        "measure": {"kind": "explicit", "probs": [1 / 5] * 5},
    }


def _f2_bernoulli() -> dict:
    return {
        "name": "f2_bernoulli",
        "group": {"kind": "free", "rank": 2},
        "subshift": {"kind": "full_shift", "alphabet": [-1, 1]},
        "observable": {"kind": "time_zero_partition"},
        "measure": {"kind": "bernoulli", "probs": [0.5, 0.5]},
    }


PRESETS = {
    "golden_mean": _golden_mean,
    "z3_example": _z3_example,
    "z3_example_5pt": _z3_example_5pt,
    "f2_bernoulli": _f2_bernoulli,
}


def preset(name: str) -> SystemDescription:
    try:
        builder = PRESETS[name]
    except KeyError:
        raise ValidationError(
            f"unknown preset {name!r}; available: {sorted(PRESETS)}"
        ) from None
    return from_dict(builder())
