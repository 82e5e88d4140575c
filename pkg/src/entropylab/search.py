"""Search harness for Shearer / infimum-rule counterexamples.

Candidate systems come from named families (the cyclic presets, seeded random
Z-SFTs with overlapping or disjoint time-zero covers); the target inequality
is evaluated either over all small k-covers of window subsets or over the
shifted covers of {0,1,3}, the smallest subset of Z whose translates form a
non-splitting 3-cover.  Every finding carries a re-verifiable bundle: the
serialized system, the cover, and both sides of the violated inequality.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .covers import enumerate_kcovers, shearer_check, shifted_cover
from .descriptions import SystemDescription, from_dict, preset
from .entropy import EntropyFunction
from .errors import ResourceLimitError, ValidationError
from .groups import FiniteSubset, ZPowerGroup, enumerate_subsets, folner
from .properties import infimum_rule_report

TARGETS = ("Sh", "infimum_rule")
FAMILIES = ("z3", "z3_5pt", "random_zsft", "disjoint_random")


@dataclass
class Candidate:
    name: str
    description: SystemDescription
    window: FiniteSubset
    max_size: int


@dataclass
class Finding:
    family: str
    candidate: str
    target: str
    description: dict
    detail: dict

    def to_dict(self):
        return {
            "family": self.family,
            "candidate": self.candidate,
            "target": self.target,
            "description": self.description,
            "detail": self.detail,
        }


@dataclass
class SearchReport:
    target: str
    family: str
    seed: int
    budget: int
    checked: int
    status: str            # "found" | "none_found" | "inconclusive"
    findings: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    def to_dict(self):
        return {
            "target": self.target,
            "family": self.family,
            "seed": self.seed,
            "budget": self.budget,
            "checked": self.checked,
            "status": self.status,
            "findings": [f.to_dict() for f in self.findings],
            "skipped": list(self.skipped),
        }


def _z3_candidates(name):
    desc = preset(name)
    window = folner(desc.group, 1)
    return [Candidate(name, desc, window, len(window))]


def _random_zsft_description(rng: random.Random, disjoint: bool):
    """One random Z-SFT with a random 3-symbol time-zero cover; retried until
    the subshift is nonempty and the cells cover the alphabet."""
    symbols = ["0", "1", "2"]
    for _ in range(200):
        nwords = rng.randint(1, 2)
        words = set()
        for _ in range(nwords):
            length = rng.randint(2, 3)
            words.add("".join(rng.choice(symbols) for _ in range(length)))
        if disjoint:
            shuffled = symbols[:]
            rng.shuffle(shuffled)
            split = rng.randint(1, 2)
            cells = [sorted(shuffled[:split]), sorted(shuffled[split:])]
        else:
            cells = [["0", "1"], ["1", "2"], ["0", "2"]]
            rng.shuffle(cells)
        doc = {
            "name": "random_zsft",
            "group": {"kind": "z_power", "d": 1},
            "subshift": {"kind": "z_sft", "alphabet": symbols,
                         "forbidden": sorted(words)},
            "observable": {"kind": "time_zero_cover", "cells": cells},
        }
        try:
            return from_dict(doc)
        except ValidationError:
            continue
    raise ValidationError("could not draw a valid random subshift")


def _random_candidates(seed, count, disjoint):
    rng = random.Random(seed)
    group = ZPowerGroup(1)
    window = FiniteSubset.of(group, range(-2, 3))
    out = []
    for i in range(count):
        desc = _random_zsft_description(rng, disjoint)
        out.append(Candidate(f"{desc.name}[{i}]", desc, window, 3))
    return out


def family_candidates(family, seed=0, count=20):
    if family == "z3":
        return _z3_candidates("z3_example")
    if family == "z3_5pt":
        return _z3_candidates("z3_example_5pt")
    if family == "random_zsft":
        return _random_candidates(seed, count, disjoint=False)
    if family == "disjoint_random":
        return _random_candidates(seed, count, disjoint=True)
    raise ValidationError(f"unknown family {family!r}; available: {FAMILIES}")


def _sh_covers(candidate: Candidate, strategy, max_parts, max_mult, n_max):
    if strategy == "shifted013":
        group = candidate.description.group
        if not isinstance(group, ZPowerGroup) or group.d != 1:
            return
        F = FiniteSubset.of(group, [0, 1, 3])
        for n in range(4, n_max + 1):
            yield shifted_cover(F, folner(group, n))
        return
    for F in enumerate_subsets(candidate.window, candidate.max_size):
        yield from enumerate_kcovers(F, 1, max_parts, max_mult)


def search_counterexample(family="z3", target="Sh", budget=10000, seed=0, *,
                          count=20, strategy="all", max_parts=4, max_mult=2,
                          n_max=5, tolerance=1e-9) -> SearchReport:
    """Deterministic search for violations of the target inequality.

    The budget caps the number of inequality evaluations.  A candidate whose
    exact evaluation blows the solver's node budget is skipped and recorded;
    findings are sorted by their canonical encoding, so parallel or re-run
    searches agree.
    """
    if target not in TARGETS:
        raise ValidationError(f"unknown target {target!r}; expected one of {TARGETS}")
    candidates = family_candidates(family, seed=seed, count=count)
    findings = []
    skipped = []
    checked = 0
    exhausted = False
    for cand in candidates:
        if exhausted:
            break
        # a small solver node budget keeps hard exact-cover candidates from
        # stalling the sweep; blown candidates are recorded as skipped
        H = EntropyFunction.topological(
            cand.description.subshift, cand.description.cover(),
            label=cand.name, node_budget=20000,
        )
        if target == "Sh":
            for cover in _sh_covers(cand, strategy, max_parts, max_mult, n_max):
                if checked >= budget:
                    exhausted = True
                    break
                checked += 1
                try:
                    rep = shearer_check(H, cover, tolerance)
                except ResourceLimitError as e:
                    skipped.append({"candidate": cand.name, "reason": str(e)})
                    continue
                if rep.violated:
                    findings.append(Finding(
                        family=family,
                        candidate=cand.name,
                        target=target,
                        description=cand.description.to_dict(),
                        detail={"cover": cover.encode(), **rep.to_dict()},
                    ))
        else:
            if checked >= budget:
                exhausted = True
                break
            checked += 1
            try:
                rep = infimum_rule_report(H, cand.window, cand.max_size, 4,
                                          tolerance=tolerance)
            except ResourceLimitError as e:
                skipped.append({"candidate": cand.name, "reason": str(e)})
                continue
            if rep.violated:
                findings.append(Finding(
                    family=family,
                    candidate=cand.name,
                    target=target,
                    description=cand.description.to_dict(),
                    detail=rep.to_dict(),
                ))
    findings.sort(key=lambda f: repr(sorted(f.to_dict().items())))
    if findings:
        status = "found"
    elif exhausted or skipped:
        status = "inconclusive"
    else:
        status = "none_found"
    return SearchReport(
        target=target,
        family=family,
        seed=seed,
        budget=budget,
        checked=checked,
        status=status,
        findings=findings,
        skipped=skipped,
    )
