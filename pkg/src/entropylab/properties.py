"""Property checkers over enumerated windows, infimum-rule estimation, and
the projection counting inequality.

Six properties of a set function H are checked exhaustively over all
qualifying tuples of subsets of a window (subset sizes capped by max_size):

  M   monotone:                F subset F'          => H(F) <= H(F')
  S   subadditive:             H(F u F') <= H(F) + H(F')
  Sh  Shearer:                 k-cover K of F       => H(F) <= (1/k) sum H(K)
  SS  strongly subadditive:    H(F u F') + H(F n F') <= H(F) + H(F')
  MC  monotone condition:      F' subset F''        => H(F|F') >= H(F|F'')
  CS  conditionally subadd.:   H(F u F'|F'') <= H(F|F'') + H(F'|F'')

Conditional values use H(F|F') = H(F u F') - H(F') with H(empty) = 0.
Budget exhaustion is reported as "inconclusive", never as a pass.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from .covers import KCover, enumerate_kcovers, shearer_check
from .errors import BudgetExceededError, GroupError, ValidationError
from .groups import FiniteSubset, ZPowerGroup, empty_subset, enumerate_subsets, folner
from .symbolic import Pattern

PROPERTIES = ("M", "S", "Sh", "SS", "MC", "CS")
DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Violation:
    prop: str
    roles: tuple          # (name, FiniteSubset or KCover) pairs
    lhs: float
    rhs: float

    @property
    def margin(self):
        return self.lhs - self.rhs

    def to_dict(self):
        sets = {}
        for name, obj in self.roles:
            sets[name] = obj.encode() if hasattr(obj, "encode") else repr(obj)
        return {"property": self.prop, "sets": sets, "lhs": self.lhs,
                "rhs": self.rhs, "margin": self.margin}


@dataclass
class PropertyReport:
    prop: str
    window: FiniteSubset
    max_size: int
    status: str           # "pass" | "fail" | "inconclusive"
    witnesses: list
    tolerance: float
    checked: int
    budget: object = None

    def to_dict(self):
        return {
            "property": self.prop,
            "window": self.window.encode(),
            "max_size": self.max_size,
            "status": self.status,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "tolerance": self.tolerance,
            "checked": self.checked,
            "budget": self.budget,
        }


class _Budget:
    def __init__(self, budget):
        self.budget = budget
        self.checked = 0

    def tick(self):
        if self.budget is not None and self.checked >= self.budget:
            raise BudgetExceededError("property check budget exhausted")
        self.checked += 1


def _conditional(H, F, cond):
    if cond.is_empty:
        return H(F)
    return H(F.union(cond)) - H(cond)


def check_property(H, prop, window, max_size, *, tolerance=DEFAULT_TOLERANCE,
                   budget=None, sh_max_parts=6, sh_max_mult=2,
                   witness_cap=50) -> PropertyReport:
    """Exhaustively check one property of H over subsets of the window."""
    if prop not in PROPERTIES:
        raise ValidationError(f"unknown property {prop!r}; expected one of {PROPERTIES}")
    max_size = min(max_size, len(window))
    subsets = list(enumerate_subsets(window, max_size))
    conds = [empty_subset(window.group)] + subsets
    meter = _Budget(budget)
    witnesses = []

    def record(roles, lhs, rhs):
        if len(witnesses) < witness_cap:
            witnesses.append(Violation(prop, tuple(roles), lhs, rhs))

    status = "pass"
    try:
        if prop == "M":
            for Fp in subsets:
                for size in range(1, len(Fp) + 1):
                    for combo in itertools.combinations(Fp.elements, size):
                        F = FiniteSubset(window.group, combo)
                        meter.tick()
                        if H(F) > H(Fp) + tolerance:
                            record((("F", F), ("Fprime", Fp)), H(F), H(Fp))
        elif prop == "S":
            for i, F in enumerate(subsets):
                for Fp in subsets[i:]:
                    meter.tick()
                    lhs = H(F.union(Fp))
                    rhs = H(F) + H(Fp)
                    if lhs > rhs + tolerance:
                        record((("F", F), ("Fprime", Fp)), lhs, rhs)
        elif prop == "SS":
            for i, F in enumerate(subsets):
                for Fp in subsets[i:]:
                    meter.tick()
                    lhs = H(F.union(Fp)) + H(F.intersection(Fp))
                    rhs = H(F) + H(Fp)
                    if lhs > rhs + tolerance:
                        record((("F", F), ("Fprime", Fp)), lhs, rhs)
        elif prop == "MC":
            for Fc in conds:
                for size in range(len(Fc), -1, -1):
                    for combo in itertools.combinations(Fc.elements, size):
                        Fp = FiniteSubset(window.group, combo)
                        for F in subsets:
                            meter.tick()
                            lhs = _conditional(H, F, Fp)
                            rhs = _conditional(H, F, Fc)
                            if rhs > lhs + tolerance:
                                record(
                                    (("F", F), ("Fprime", Fp), ("Fsecond", Fc)),
                                    rhs, lhs,
                                )
        elif prop == "CS":
            for F in subsets:
                for Fp in subsets:
                    for Fc in conds:
                        meter.tick()
                        lhs = _conditional(H, F.union(Fp), Fc)
                        rhs = _conditional(H, F, Fc) + _conditional(H, Fp, Fc)
                        if lhs > rhs + tolerance:
                            record(
                                (("F", F), ("Fprime", Fp), ("Fsecond", Fc)),
                                lhs, rhs,
                            )
        elif prop == "Sh":
            for F in subsets:
                for cover in enumerate_kcovers(F, 1, sh_max_parts, sh_max_mult):
                    meter.tick()
                    rep = shearer_check(H, cover, tolerance)
                    if rep.violated:
                        record((("F", F), ("cover", cover)), rep.lhs, rep.rhs)
    except BudgetExceededError:
        status = "inconclusive"
    if witnesses:
        status = "fail"
    return PropertyReport(
        prop=prop,
        window=window,
        max_size=max_size,
        status=status,
        witnesses=witnesses,
        tolerance=tolerance,
        checked=meter.checked,
        budget=budget,
    )


def reverify_violation(H, violation: Violation, atol=1e-12) -> bool:
    """Recompute both sides of a reported violation from its stored sets."""
    roles = dict(violation.roles)
    prop = violation.prop
    if prop == "M":
        lhs, rhs = H(roles["F"]), H(roles["Fprime"])
    elif prop == "S":
        lhs = H(roles["F"].union(roles["Fprime"]))
        rhs = H(roles["F"]) + H(roles["Fprime"])
    elif prop == "SS":
        lhs = H(roles["F"].union(roles["Fprime"])) + H(
            roles["F"].intersection(roles["Fprime"])
        )
        rhs = H(roles["F"]) + H(roles["Fprime"])
    elif prop == "MC":
        # stored as the violated inequality H(F|F'') <= H(F|F')
        lhs = _conditional(H, roles["F"], roles["Fsecond"])
        rhs = _conditional(H, roles["F"], roles["Fprime"])
    elif prop == "CS":
        lhs = _conditional(H, roles["F"].union(roles["Fprime"]), roles["Fsecond"])
        rhs = _conditional(H, roles["F"], roles["Fsecond"]) + _conditional(
            H, roles["Fprime"], roles["Fsecond"]
        )
    elif prop == "Sh":
        rep = shearer_check(H, roles["cover"])
        lhs, rhs = rep.lhs, rep.rhs
    else:
        raise ValidationError(f"unknown property {prop!r}")
    return abs(lhs - violation.lhs) <= atol and abs(rhs - violation.rhs) <= atol


@dataclass
class ConsistencyReport:
    reports: dict
    monotone: bool
    consistent: bool
    notes: list = field(default_factory=list)

    def outcome(self, prop):
        return self.reports[prop].status

    def to_dict(self):
        return {
            "outcomes": {p: r.status for p, r in self.reports.items()},
            "monotone": self.monotone,
            "consistent": self.consistent,
            "notes": list(self.notes),
        }


def implication_consistency(H, window, max_size, **kwargs) -> ConsistencyReport:
    """Check that the six property outcomes respect the implication lattice
    for a monotone H: SS => Sh => S, and SS/MC/CS coincide.  Any inconsistency
    is a checker bug and is surfaced in the notes."""
    reports = {p: check_property(H, p, window, max_size, **kwargs) for p in PROPERTIES}
    monotone = reports["M"].status == "pass"
    notes = []
    consistent = True
    conclusive = {p: reports[p].status for p in PROPERTIES}
    if any(s == "inconclusive" for s in conclusive.values()):
        notes.append("some checks were inconclusive; lattice not asserted")
        return ConsistencyReport(reports, monotone, True, notes)
    if not monotone:
        notes.append("H is not monotone on this window; the lattice does not apply")
        return ConsistencyReport(reports, monotone, True, notes)
    ss, sh, s = conclusive["SS"], conclusive["Sh"], conclusive["S"]
    if ss == "pass" and sh != "pass":
        consistent = False
        notes.append("checker bug: SS passed but Sh failed")
    if sh == "pass" and s != "pass":
        consistent = False
        notes.append("checker bug: Sh passed but S failed")
    if not (conclusive["SS"] == conclusive["MC"] == conclusive["CS"]):
        consistent = False
        notes.append("checker bug: SS, MC, CS disagree on a monotone H")
    return ConsistencyReport(reports, monotone, consistent, notes)


def infimum_estimate(H, window, max_size):
    """Minimum of H(F)/|F| over the enumerated subsets of the window, with
    the first attaining subset in canonical order."""
    best_val = None
    best_arg = None
    for F in enumerate_subsets(window, min(max_size, len(window))):
        v = H(F) / len(F)
        if best_val is None or v < best_val:
            best_val, best_arg = v, F
    return best_val, best_arg


def folner_profile(H, n_max, group=None):
    """Normalized values along the canonical Folner sequence up to n_max."""
    group = group if group is not None else H.group
    out = []
    for n in range(1, n_max + 1):
        Fn = folner(group, n)
        out.append((n, H(Fn) / len(Fn)))
    return out


@dataclass
class InfimumReport:
    inf_value: float
    argmin: FiniteSubset
    folner_values: list
    limsup_estimate: float
    gap: float
    stabilized: bool
    violated: bool
    tolerance: float

    def to_dict(self):
        return {
            "inf_value": self.inf_value,
            "argmin": self.argmin.encode(),
            "folner_values": [[n, v] for n, v in self.folner_values],
            "limsup_estimate": self.limsup_estimate,
            "gap": self.gap,
            "stabilized": self.stabilized,
            "violated": self.violated,
            "tolerance": self.tolerance,
        }


def infimum_rule_report(H, window, max_size, n_max, *, tolerance=DEFAULT_TOLERANCE,
                        group=None) -> InfimumReport:
    """Compare the enumerated infimum of H(F)/|F| with the Folner profile.

    The infimum is taken over the enumerated subsets and the Folner sets
    themselves (so it lower-bounds every reported value).  A violation is
    flagged only when the profile has stabilized (last two values within
    tolerance, exact for finite groups) and still exceeds the infimum.
    """
    group = group if group is not None else H.group
    inf_value, argmin = infimum_estimate(H, window, max_size)
    profile = folner_profile(H, n_max, group=group)
    for n, v in profile:
        if v < inf_value:
            inf_value, argmin = v, folner(group, n)
    limsup = profile[-1][1]
    stabilized = len(profile) >= 2 and abs(profile[-1][1] - profile[-2][1]) <= tolerance
    gap = limsup - inf_value
    return InfimumReport(
        inf_value=inf_value,
        argmin=argmin,
        folner_values=profile,
        limsup_estimate=limsup,
        gap=gap,
        stabilized=stabilized,
        violated=bool(stabilized and gap > tolerance),
        tolerance=tolerance,
    )


@dataclass
class LemmaReport:
    total: int
    part_counts: list
    k: int
    lhs_log: float
    rhs_log: float
    holds: bool
    equality: bool

    def to_dict(self):
        return {
            "total": self.total,
            "part_counts": self.part_counts,
            "k": self.k,
            "lhs_log": self.lhs_log,
            "rhs_log": self.rhs_log,
            "holds": self.holds,
            "equality": self.equality,
        }


def counting_lemma_check(patterns, cover: KCover, tolerance=DEFAULT_TOLERANCE) -> LemmaReport:
    """Check |X| <= prod over parts of |X_K|^(1/k) in the log domain, where
    X is a set of patterns on the cover's base and X_K its projections."""
    pats = list(patterns)
    if not pats:
        raise ValidationError("the pattern set must be nonempty")
    support = pats[0].support
    if support != cover.base:
        raise ValidationError("patterns must live on the cover's base")
    pos = {g: i for i, g in enumerate(support.elements)}
    values = {p.values for p in pats}
    if len(values) != len(pats):
        raise ValidationError("duplicate patterns in the set")
    k = cover.k
    lhs = math.log(len(values))
    rhs = 0.0
    part_counts = []
    for part in cover.parts:
        idx = [pos[g] for g in part.elements]
        proj = {tuple(v[i] for i in idx) for v in values}
        part_counts.append(len(proj))
        rhs += math.log(len(proj)) / k
    return LemmaReport(
        total=len(values),
        part_counts=part_counts,
        k=k,
        lhs_log=lhs,
        rhs_log=rhs,
        holds=lhs <= rhs + tolerance,
        equality=abs(lhs - rhs) <= 1e-12,
    )


def tuples_as_patterns(tuples, group=None):
    """View same-length tuples as patterns on the coordinate set {1..n} of Z."""
    rows = [tuple(t) for t in tuples]
    if not rows:
        raise ValidationError("empty tuple set")
    n = len(rows[0])
    if any(len(t) != n for t in rows):
        raise ValidationError("tuples must share one length")
    group = group if group is not None else ZPowerGroup(1)
    support = FiniteSubset.of(group, range(1, n + 1))
    return {Pattern(support, t) for t in rows}, support


@dataclass
class FuzzReport:
    trials: int
    seed: int
    violations: list

    def to_dict(self):
        return {
            "trials": self.trials,
            "seed": self.seed,
            "violations": [v for v in self.violations],
        }


def counting_lemma_fuzz(trials=1000, seed=0, max_n=6, max_alphabet=3) -> FuzzReport:
    """Seeded random (pattern set, k-cover) instances for the counting
    inequality; returns the violating instances (expected none)."""
    rng = random.Random(seed)
    violations = []
    letters = "abc"
    group = ZPowerGroup(1)
    for t in range(trials):
        n = rng.randint(1, max_n)
        m = rng.randint(1, max_alphabet)
        syms = letters[:m]
        universe = list(itertools.product(syms, repeat=n))
        size = rng.randint(1, len(universe))
        rows = rng.sample(universe, size)
        coords = list(range(1, n + 1))
        nparts = rng.randint(1, 5)
        parts = []
        for _ in range(nparts):
            psize = rng.randint(1, n)
            parts.append(sorted(rng.sample(coords, psize)))
        covered = set().union(*map(set, parts))
        for c in coords:
            if c not in covered:
                parts.append([c])
        support = FiniteSubset.of(group, coords)
        cover = KCover.of(support, [FiniteSubset.of(group, p) for p in parts])
        patterns = {Pattern(support, row) for row in rows}
        report = counting_lemma_check(patterns, cover)
        if not report.holds:
            violations.append({"trial": t, "n": n, "alphabet": m,
                               "rows": sorted(rows), "cover": cover.encode(),
                               "lhs": report.lhs_log, "rhs": report.rhs_log})
    return FuzzReport(trials=trials, seed=seed, violations=violations)
