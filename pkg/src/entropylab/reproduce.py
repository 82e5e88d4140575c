"""The worked-example suite: every headline value of the cyclic, golden-mean
and free-group systems, recomputed and compared against its expected value.

``run_reproduction`` returns one row per check; the CLI renders them as a
pass/fail table.  ``overrides`` substitutes a preset by name (used by the
mutation tests: tampering with a preset must flip rows).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .covers import KCover, shearer_check
from .descriptions import preset
from .entropy import min_subcover
from .groups import FiniteSubset, enumerate_subsets, folner, product_set
from .measures import Observable, shannon_entropy
from .properties import check_property, folner_profile, infimum_rule_report

LOG2, LOG3, LOG5 = math.log(2), math.log(3), math.log(5)


@dataclass
class Row:
    name: str
    expected: str
    computed: str
    ok: bool

    def to_dict(self):
        return {"name": self.name, "expected": self.expected,
                "computed": self.computed, "ok": self.ok}


def _close(a, b, atol=1e-12):
    return abs(a - b) <= atol


def _fib(n):
    a, b = 1, 1
    for _ in range(n - 2):
        a, b = b, a + b
    return b


def _rows_z3(desc, rows, tag="z3"):
    H = desc.entropy_function("topological")
    G = desc.group
    z3 = folner(G, 1)
    f01 = FiniteSubset.of(G, [0, 1])
    cover = desc.cover()
    res_full = min_subcover(cover, z3, desc.subshift)
    rows.append(Row(f"{tag}: minimum subcover over the whole group", "N = 3",
                    f"N = {res_full.size}", res_full.size == 3))
    res_pair = min_subcover(cover, f01, desc.subshift)
    rows.append(Row(f"{tag}: minimum subcover over {{0,1}}", "N = 2",
                    f"N = {res_pair.size}", res_pair.size == 2))
    rows.append(Row(f"{tag}: H({{0,1,2}}) = log 3", f"{LOG3:.12f}",
                    f"{H(z3):.12f}", _close(H(z3), LOG3)))
    rows.append(Row(f"{tag}: H({{0,1}}) = log 2", f"{LOG2:.12f}",
                    f"{H(f01):.12f}", _close(H(f01), LOG2)))
    gap_expected = LOG3 / 3 - LOG2 / 2
    rep = infimum_rule_report(H, z3, 3, 4)
    rows.append(Row(
        f"{tag}: infimum rule violated, gap = (1/3)log3 - (1/2)log2",
        f"violated, gap = {gap_expected:.6f}",
        f"violated = {rep.violated}, gap = {rep.gap:.6f}",
        rep.violated and _close(rep.gap, gap_expected),
    ))
    two_cover = KCover.of(z3, [
        FiniteSubset.of(G, [0, 1]),
        FiniteSubset.of(G, [1, 2]),
        FiniteSubset.of(G, [0, 2]),
    ])
    srep = shearer_check(H, two_cover)
    margin_expected = LOG3 - 1.5 * LOG2
    rows.append(Row(
        f"{tag}: Shearer violated by the 2-cover {{0,1}},{{1,2}},{{0,2}}",
        f"violated, margin = {margin_expected:.6f}",
        f"violated = {srep.violated}, margin = {srep.margin:.6f}",
        srep.violated and abs(srep.margin - margin_expected) <= 1e-9,
    ))


def _rows_golden(desc, rows):
    H = desc.entropy_function("topological")
    G = desc.group
    window = FiniteSubset.of(G, [-1, 0, 1])
    values = [
        ("{0}", FiniteSubset.of(G, [0]), LOG2),
        ("{-1,0}", FiniteSubset.of(G, [-1, 0]), LOG3),
        ("{0,1}", FiniteSubset.of(G, [0, 1]), LOG3),
        ("{-1,0,1}", window, LOG5),
    ]
    for label, F, expected in values:
        got = H(F)
        rows.append(Row(f"golden mean: H({label})", f"{expected:.12f}",
                        f"{got:.12f}", _close(got, expected)))
    ss = check_property(H, "SS", window, 3)
    wanted = {(( -1, 0), (0, 1))}
    got_pairs = set()
    for w in ss.witnesses:
        roles = dict(w.roles)
        pair = tuple(sorted((roles["F"].elements, roles["Fprime"].elements)))
        got_pairs.add(pair)
    ok = ss.status == "fail" and got_pairs == wanted
    rows.append(Row(
        "golden mean: strong subadditivity fails exactly at ({-1,0},{0,1})",
        "fail with that single witness pair",
        f"status = {ss.status}, witnesses = {sorted(got_pairs)}",
        ok,
    ))
    sh = check_property(H, "Sh", window, 3, sh_max_parts=6, sh_max_mult=2)
    rows.append(Row(
        "golden mean: Shearer holds for every k-cover (<= 6 parts, mult <= 2)",
        "pass",
        sh.status,
        sh.status == "pass",
    ))
    profile = folner_profile(H, 16)
    expected = math.log(_fib(18)) / 16
    got = profile[-1][1]
    rows.append(Row(
        "golden mean: normalized value on [0,16) = log(2584)/16",
        f"{expected:.12f}",
        f"{got:.12f}",
        _close(got, expected),
    ))


def _rows_shannon_suite(presets, rows):
    from .descriptions import from_dict

    bern = from_dict({
        "name": "bernoulli_z",
        "group": {"kind": "z_power", "d": 1},
        "subshift": {"kind": "full_shift", "alphabet": ["0", "1"]},
        "observable": {"kind": "time_zero_partition"},
        "measure": {"kind": "bernoulli", "probs": [0.5, 0.5]},
    })
    systems = [
        ("bernoulli(1/2,1/2) on Z", bern),
        ("golden mean with the Parry measure", presets["golden_mean"]),
        ("uniform measure on the cyclic example", presets["z3_example"]),
    ]
    all_ok = True
    details = []
    for label, desc in systems:
        H = desc.entropy_function("shannon", time_zero=desc.has_cover)
        window = folner(desc.group, 1 if desc.group.is_finite() else 4)
        outcomes = {}
        for prop in ("M", "S", "Sh", "SS", "MC", "CS"):
            rep = check_property(H, prop, window, 4, sh_max_parts=6, sh_max_mult=2)
            outcomes[prop] = rep.status
        ok = all(s == "pass" for s in outcomes.values())
        all_ok = all_ok and ok
        details.append(f"{label}: " + ("all pass" if ok else str(outcomes)))
    rows.append(Row(
        "Shannon suite: all six properties pass for the three measure kinds",
        "pass everywhere (windows of size <= 4)",
        "; ".join(details),
        all_ok,
    ))


def _rows_free_group(desc, rows):
    G = desc.group
    measure = desc.measure
    alphabet = desc.subshift.alphabet
    P = Observable.time_zero(G, alphabet)
    e = G.identity()
    a, b = (1,), (2,)
    E = FiniteSubset.of(G, [e, a, b])
    samples = [
        FiniteSubset.of(G, [e]),
        FiniteSubset.of(G, [e, a]),
        FiniteSubset.of(G, [a, b]),
        FiniteSubset.of(G, [e, a, b]),
        FiniteSubset.of(G, [(1,), (1, 1), (2, -1)]),
    ]
    ok = all(
        _close(shannon_entropy(measure, P, F), len(F) * LOG2) for F in samples
    )
    rows.append(Row(
        "free group: H of the time-zero process = |F| log 2",
        "equality on word-length <= 3 samples",
        "equality" if ok else "mismatch",
        ok,
    ))
    Q = Observable.identity_partition(desc.subshift, E)
    ok_q = True
    for F in samples[:4]:
        EF = product_set(E, F)
        lhs = shannon_entropy(measure, Q, F)
        rhs = shannon_entropy(measure, P, EF)
        if not (_close(lhs, rhs, 1e-9) and _close(lhs, len(EF) * LOG2, 1e-9)):
            ok_q = False
    rows.append(Row(
        "free group: H of the E-block process = |EF| log 2",
        "equality on samples",
        "equality" if ok_q else "mismatch",
        ok_q,
    ))
    pairs_obs = Observable.from_function(
        desc.subshift, E, lambda m: (m[e] * m[a], m[e] * m[b])
    )
    ok_r = True
    for F in [FiniteSubset.of(G, [e]), FiniteSubset.of(G, [e, a]),
              FiniteSubset.of(G, [e, b]), FiniteSubset.of(G, [a, b])]:
        if not _close(shannon_entropy(measure, pairs_obs, F),
                      len(F) * math.log(4), 1e-9):
            ok_r = False
    rows.append(Row(
        "free group: the sign-product observable gives |F| log 4",
        "equality for |F| <= 2",
        "equality" if ok_r else "mismatch",
        ok_r,
    ))
    ball2 = G.ball(2)
    worst = None
    for F in enumerate_subsets(ball2, 4):
        ratio = len(product_set(E, F)) / len(F)
        if worst is None or ratio < worst:
            worst = ratio
    rows.append(Row(
        "free group: |EF|/|F| never drops below 2 (|F| <= 4 in the 2-ball)",
        ">= 2",
        f"min ratio = {worst:.6f}",
        worst >= 2.0,
    ))


def _rows_lemma(rows):
    import itertools
    from .covers import KCover
    from .groups import ZPowerGroup
    from .properties import counting_lemma_check, counting_lemma_fuzz, tuples_as_patterns

    cube = list(itertools.product("01", repeat=3))
    patterns, support = tuples_as_patterns(cube)
    group = ZPowerGroup(1)
    cover = KCover.of(support, [
        FiniteSubset.of(group, [1, 2]),
        FiniteSubset.of(group, [2, 3]),
        FiniteSubset.of(group, [1, 3]),
    ])
    rep = counting_lemma_check(patterns, cover)
    rows.append(Row(
        "counting bound: the full cube meets the three 2-face projections with equality",
        "equality (8 = (4*4*4)^(1/2))",
        f"lhs = {rep.lhs_log:.12f}, rhs = {rep.rhs_log:.12f}",
        rep.holds and rep.equality,
    ))
    fuzz = counting_lemma_fuzz(1000, seed=0)
    rows.append(Row(
        "counting bound: 1000 seeded random instances",
        "0 violations",
        f"{len(fuzz.violations)} violations",
        not fuzz.violations,
    ))


def _rows_variational(desc, rows):
    Htop = desc.entropy_function("topological")
    Hmu = desc.entropy_function("shannon")
    G = desc.group
    window = FiniteSubset.of(G, range(-3, 4))
    ok = True
    for F in enumerate_subsets(window, 4):
        if Htop(F) < Hmu(F) - 1e-9:
            ok = False
            break
    rows.append(Row(
        "golden mean: topological entropy dominates the Parry process on windows",
        "H_top(F) >= H_mu(F)",
        "holds" if ok else "violated",
        ok,
    ))
    log_phi = math.log((1 + math.sqrt(5)) / 2)
    vtop = folner_profile(Htop, 16)[-1][1]
    vmu = folner_profile(Hmu, 16)[-1][1]
    ok2 = abs(vtop - log_phi) < 0.02 and abs(vmu - log_phi) < 0.02
    rows.append(Row(
        "golden mean: both normalized profiles near log(golden ratio) at n = 16",
        f"within 0.02 of {log_phi:.6f}",
        f"topological {vtop:.6f}, shannon {vmu:.6f}",
        ok2,
    ))


def run_reproduction(overrides=None):
    """Compute every row of the worked-example table."""
    overrides = overrides or {}
    presets = {}
    for name in ("golden_mean", "z3_example", "z3_example_5pt", "f2_bernoulli"):
        presets[name] = overrides.get(name) or preset(name)
    rows = []
    _rows_z3(presets["z3_example"], rows, tag="z3")
    _rows_z3(presets["z3_example_5pt"], rows, tag="z3 (5-point variant)")
    _rows_golden(presets["golden_mean"], rows)
    _rows_shannon_suite(presets, rows)
    _rows_free_group(presets["f2_bernoulli"], rows)
    _rows_lemma(rows)
    _rows_variational(presets["golden_mean"], rows)
    return rows
