"""Command-line surface.

Subcommands: entropy, check, shearer, split, infimum, lemma, search,
reproduce.  Systems come from ``--preset NAME`` or ``--desc FILE`` (a JSON
system description).  Exit codes are contractual: 0 = pass/ok, 1 = violation
or mismatch found, 2 = load/validation/resource error, 3 = inconclusive.

JSON reports are byte-identical across runs for identical inputs and seed:
numeric values are fixed at 12 significant digits and wall time is kept out
of the payload unless ``--timings`` is given (the elapsed time always goes
to stderr).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import platform
import sys
import time

from . import __version__
from .covers import KCover, is_splitting, shearer_check, shifted_cover
from .descriptions import (
    PRESETS,
    load_description,
    parse_group,
    parse_subset,
    preset,
)
from .errors import (
    BudgetExceededError,
    EntropyLabError,
    ResourceLimitError,
    ValidationError,
)
from .groups import FiniteSubset, folner
from .properties import (
    PROPERTIES,
    check_property,
    counting_lemma_check,
    counting_lemma_fuzz,
    enumerate_subsets,
    infimum_rule_report,
    tuples_as_patterns,
)
from .reproduce import run_reproduction
from .search import FAMILIES, TARGETS, search_counterexample

CACHE_VERSION = 1


def _round12(x):
    if isinstance(x, float):
        return float(f"{x:.12g}")
    return x


def _jsonify(obj):
    if isinstance(obj, float):
        return _round12(obj)
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    return obj


def _fmt(x, bits=False):
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _load_json_arg(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"bad JSON in {what}: {e}") from None


def _load_system(args):
    if getattr(args, "preset", None):
        return preset(args.preset)
    if getattr(args, "desc", None):
        return load_description(args.desc)
    raise ValidationError("pass --preset NAME or --desc FILE")


def _scale(args):
    return 1.0 / math.log(2) if args.bits else 1.0


def _window(args, group):
    if getattr(args, "window", None):
        return parse_subset(group, _load_json_arg(args.window, "--window"))
    if getattr(args, "box", None):
        return folner(group, args.box)
    raise ValidationError("pass --window JSON or --box N")


# cache persistence -----------------------------------------------------------

def _cache_file(desc, flavor):
    root = os.environ.get("ENTROPYLAB_CACHE_DIR")
    if not root:
        return None
    os.makedirs(root, exist_ok=True)
    return os.path.join(root, f"{desc.digest()}-{flavor}.json")


def _load_cache(ef, path):
    if not path or not os.path.exists(path):
        return
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return
    if doc.get("cache_version") != CACHE_VERSION:
        return
    ef.load_cache(doc.get("entries", {}))


def _save_cache(ef, path):
    if not path:
        return
    entries = {}
    if os.path.exists(path):
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
            if doc.get("cache_version") == CACHE_VERSION:
                entries.update(doc.get("entries", {}))
        except (OSError, json.JSONDecodeError):
            pass
    entries.update(ef.dump_cache())
    doc = {"cache_version": CACHE_VERSION, "flavor": ef.flavor,
           "entries": dict(sorted(entries.items()))}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ":"))


# report envelope -------------------------------------------------------------

def _emit(args, command, payload, *, digest=None, seed=None, started=None,
          human_lines=None):
    elapsed_ms = (time.monotonic() - started) * 1000 if started is not None else None
    if args.json:
        report = {
            "command": command,
            "input_digest": digest,
            "results": payload,
            "seed": seed,
            "versions": {"entropylab": __version__,
                         "python": platform.python_version()},
        }
        if args.timings and elapsed_ms is not None:
            report["wall_time_ms"] = elapsed_ms
        print(json.dumps(_jsonify(report), sort_keys=True, separators=(",", ":")))
    else:
        for line in human_lines or []:
            print(line)
    if elapsed_ms is not None:
        print(f"# elapsed {elapsed_ms:.1f} ms", file=sys.stderr)


# handlers --------------------------------------------------------------------

def cmd_entropy(args):
    started = time.monotonic()
    desc = _load_system(args)
    flavor = args.flavor
    ef = desc.entropy_function(flavor, time_zero=args.time_zero)
    cache_path = _cache_file(desc, flavor + ("-tz" if args.time_zero else ""))
    _load_cache(ef, cache_path)
    scale = _scale(args)
    subsets = []
    if args.subset:
        for token in args.subset:
            subsets.append(parse_subset(desc.group, _load_json_arg(token, "--subset")))
    else:
        window = _window(args, desc.group)
        max_size = args.max_size or len(window)
        subsets = list(enumerate_subsets(window, min(max_size, len(window))))
    values = []
    lines = []
    for F in subsets:
        v = ef.value(F) * scale
        values.append({"subset": F.encode(), "value": v,
                       "normalized": v / len(F)})
        lines.append(f"H({F!r}) = {_fmt(v)}   per element {_fmt(v / len(F))}")
    _save_cache(ef, cache_path)
    payload = {"flavor": flavor, "unit": "bits" if args.bits else "nats",
               "values": values}
    _emit(args, "entropy", payload, digest=desc.digest(), started=started,
          human_lines=lines)
    return 0


def cmd_check(args):
    started = time.monotonic()
    desc = _load_system(args)
    ef = desc.entropy_function(args.flavor, time_zero=args.time_zero)
    cache_path = _cache_file(desc, args.flavor + ("-tz" if args.time_zero else ""))
    _load_cache(ef, cache_path)
    window = _window(args, desc.group)
    max_size = args.max_size or len(window)
    report = check_property(
        ef, args.property, window, max_size,
        budget=args.budget, sh_max_parts=args.max_parts, sh_max_mult=args.max_mult,
    )
    _save_cache(ef, cache_path)
    scale = _scale(args)
    payload = report.to_dict()
    if scale != 1.0:
        for w in payload["witnesses"]:
            w["lhs"] *= scale
            w["rhs"] *= scale
            w["margin"] *= scale
    lines = [f"property {report.prop} on window {window!r}: {report.status} "
             f"({report.checked} checks)"]
    for w in report.witnesses[:5]:
        d = w.to_dict()
        lines.append(f"  violation: {d['sets']} lhs={_fmt(d['lhs'] * scale)} "
                     f"rhs={_fmt(d['rhs'] * scale)}")
    _emit(args, "check", payload, digest=desc.digest(), started=started,
          human_lines=lines)
    if report.status == "pass":
        return 0
    if report.status == "fail":
        return 1
    return 3


def cmd_shearer(args):
    started = time.monotonic()
    desc = _load_system(args)
    ef = desc.entropy_function(args.flavor, time_zero=args.time_zero)
    base = parse_subset(desc.group, _load_json_arg(args.base, "--base"))
    parts_raw = _load_json_arg(args.parts, "--parts")
    if not isinstance(parts_raw, list):
        raise ValidationError("--parts must be a JSON list of subsets")
    parts = [parse_subset(desc.group, p) for p in parts_raw]
    cover = KCover.of(base, parts)
    rep = shearer_check(ef, cover)
    scale = _scale(args)
    payload = {"cover": cover.encode(), **rep.to_dict()}
    payload["lhs"] *= scale
    payload["rhs"] *= scale
    payload["margin"] *= scale
    lines = [
        f"k = {rep.k}, lhs = {_fmt(payload['lhs'])}, rhs = {_fmt(payload['rhs'])}",
        ("VIOLATED" if rep.violated else "holds")
        + f" (margin {_fmt(payload['margin'])})",
    ]
    _emit(args, "shearer", payload, digest=desc.digest(), started=started,
          human_lines=lines)
    return 1 if rep.violated else 0


def cmd_split(args):
    started = time.monotonic()
    if args.preset or args.desc:
        group = _load_system(args).group
    else:
        group = parse_group(_load_json_arg(args.group, "--group"))
    if args.shift_set:
        F = parse_subset(group, _load_json_arg(args.shift_set, "--shift-set"))
        if not args.box:
            raise ValidationError("--shift-set needs --box N for the base interval")
        cover = shifted_cover(F, folner(group, args.box))
    else:
        if not (args.base and args.parts):
            raise ValidationError("pass --base and --parts, or --shift-set with --box")
        base = parse_subset(group, _load_json_arg(args.base, "--base"))
        parts = [parse_subset(group, p) for p in _load_json_arg(args.parts, "--parts")]
        cover = KCover.of(base, parts)
    flag, decomposition = is_splitting(cover)
    payload = {"cover": cover.encode(), "k": cover.k, "splitting": flag}
    if decomposition is not None:
        payload["decomposition"] = [[p.encode() for p in grp] for grp in decomposition]
    lines = [f"k = {cover.k}, parts = {len(cover.parts)}: "
             + ("splitting" if flag else "non-splitting")]
    _emit(args, "split", payload, started=started, human_lines=lines)
    return 0


def cmd_infimum(args):
    started = time.monotonic()
    desc = _load_system(args)
    ef = desc.entropy_function(args.flavor, time_zero=args.time_zero)
    cache_path = _cache_file(desc, args.flavor + ("-tz" if args.time_zero else ""))
    _load_cache(ef, cache_path)
    window = _window(args, desc.group)
    max_size = args.max_size or len(window)
    rep = infimum_rule_report(ef, window, max_size, args.n_max)
    _save_cache(ef, cache_path)
    scale = _scale(args)
    payload = rep.to_dict()
    payload["inf_value"] *= scale
    payload["limsup_estimate"] *= scale
    payload["gap"] *= scale
    payload["folner_values"] = [[n, v * scale] for n, v in payload["folner_values"]]
    lines = [
        f"inf over enumerated subsets: {_fmt(payload['inf_value'])} at {rep.argmin!r}",
        f"Folner profile tail: {_fmt(payload['limsup_estimate'])} "
        f"(stabilized: {rep.stabilized})",
        f"gap = {_fmt(payload['gap'])}"
        + ("  RULE VIOLATED AT THIS SCALE" if rep.violated else ""),
    ]
    _emit(args, "infimum", payload, digest=desc.digest(), started=started,
          human_lines=lines)
    return 1 if rep.violated else 0


def cmd_lemma(args):
    started = time.monotonic()
    import itertools

    cube = list(itertools.product("01", repeat=3))
    patterns, support = tuples_as_patterns(cube)
    group = support.group
    cover = KCover.of(support, [
        FiniteSubset.of(group, [1, 2]),
        FiniteSubset.of(group, [2, 3]),
        FiniteSubset.of(group, [1, 3]),
    ])
    cube_rep = counting_lemma_check(patterns, cover)
    fuzz = counting_lemma_fuzz(args.trials, seed=args.seed,
                               max_n=args.max_n, max_alphabet=args.max_alphabet)
    payload = {
        "cube_case": cube_rep.to_dict(),
        "fuzz": fuzz.to_dict(),
    }
    lines = [
        f"full-cube case: lhs = {_fmt(cube_rep.lhs_log)}, rhs = {_fmt(cube_rep.rhs_log)}"
        + (" (equality)" if cube_rep.equality else ""),
        f"fuzz: {fuzz.trials} trials, seed {fuzz.seed}, "
        f"{len(fuzz.violations)} violations",
    ]
    _emit(args, "lemma", payload, seed=args.seed, started=started,
          human_lines=lines)
    ok = cube_rep.holds and cube_rep.equality and not fuzz.violations
    return 0 if ok else 1


def cmd_search(args):
    started = time.monotonic()
    report = search_counterexample(
        family=args.family, target=args.target, budget=args.budget,
        seed=args.seed, count=args.count, strategy=args.strategy,
        max_parts=args.max_parts, max_mult=args.max_mult, n_max=args.n_max,
    )
    payload = report.to_dict()
    lines = [
        f"family {report.family}, target {report.target}: {report.status} "
        f"({report.checked} checks, budget {report.budget}, seed {report.seed})",
    ]
    for f in report.findings[:5]:
        lines.append(f"  finding on {f.candidate}: {f.detail.get('lhs')!r} vs "
                     f"{f.detail.get('rhs')!r}")
    _emit(args, "search", payload, seed=args.seed, started=started,
          human_lines=lines)
    if report.status == "found":
        return 1
    if report.status == "inconclusive":
        return 3
    return 0


def cmd_reproduce(args):
    started = time.monotonic()
    rows = run_reproduction()
    ok = all(r.ok for r in rows)
    payload = {"rows": [r.to_dict() for r in rows], "all_ok": ok}
    lines = []
    width = max(len(r.name) for r in rows)
    for r in rows:
        mark = "PASS" if r.ok else "FAIL"
        lines.append(f"[{mark}] {r.name:<{width}}  expected {r.expected}  got {r.computed}")
    lines.append(f"{sum(r.ok for r in rows)}/{len(rows)} rows pass")
    _emit(args, "reproduce", payload, started=started, human_lines=lines)
    return 0 if ok else 1


# parser ----------------------------------------------------------------------

def _add_system_args(p):
    p.add_argument("--preset", choices=sorted(PRESETS), help="named system bundle")
    p.add_argument("--desc", help="path to a JSON system description")
    p.add_argument("--flavor", choices=["topological", "shannon"],
                   default="topological")
    p.add_argument("--time-zero", action="store_true", dest="time_zero",
                   help="use the time-zero partition for the shannon flavor")


def _add_common(p):
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--bits", action="store_true",
                   help="report entropies in bits instead of nats")
    p.add_argument("--timings", action="store_true",
                   help="include wall time in the JSON report")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker cap for parallelizable engines (1 = serial)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="entropylab",
        description="Entropy as a set function on finite subsets of acting groups",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("entropy", help="evaluate H(F) and H(F)/|F|")
    _add_system_args(p)
    p.add_argument("--subset", action="append",
                   help="JSON subset, repeatable (e.g. '[0,1,2]')")
    p.add_argument("--window", help="JSON window to enumerate subsets of")
    p.add_argument("--box", type=int, help="use the canonical Folner set F_n")
    p.add_argument("--max-size", type=int, dest="max_size")
    _add_common(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("check", help="check one of the six properties")
    _add_system_args(p)
    p.add_argument("--property", required=True, choices=list(PROPERTIES))
    p.add_argument("--window", help="JSON window")
    p.add_argument("--box", type=int)
    p.add_argument("--max-size", type=int, dest="max_size")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--max-parts", type=int, default=6, dest="max_parts")
    p.add_argument("--max-mult", type=int, default=2, dest="max_mult")
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("shearer", help="evaluate Shearer's inequality on one k-cover")
    _add_system_args(p)
    p.add_argument("--base", required=True, help="JSON base subset")
    p.add_argument("--parts", required=True, help="JSON list of subsets")
    _add_common(p)
    p.set_defaults(func=cmd_shearer)

    p = sub.add_parser("split", help="decide whether a k-cover splits into k 1-covers")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--desc")
    p.add_argument("--group", default='{"kind": "z_power", "d": 1}',
                   help="JSON group description (when no system is given)")
    p.add_argument("--base", help="JSON base subset")
    p.add_argument("--parts", help="JSON list of subsets")
    p.add_argument("--shift-set", dest="shift_set",
                   help="JSON subset F for the shifted cover {Fg}")
    p.add_argument("--box", type=int, help="base interval [0,n) for --shift-set")
    _add_common(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("infimum", help="infimum rule report at desk scale")
    _add_system_args(p)
    p.add_argument("--window", help="JSON window")
    p.add_argument("--box", type=int)
    p.add_argument("--max-size", type=int, dest="max_size")
    p.add_argument("--n-max", type=int, default=8, dest="n_max")
    _add_common(p)
    p.set_defaults(func=cmd_infimum)

    p = sub.add_parser("lemma", help="projection counting inequality checks")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=6, dest="max_n")
    p.add_argument("--max-alphabet", type=int, default=3, dest="max_alphabet")
    _add_common(p)
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("search", help="counterexample search harness")
    p.add_argument("--family", default="z3", choices=list(FAMILIES))
    p.add_argument("--target", default="Sh", choices=list(TARGETS))
    p.add_argument("--budget", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20,
                   help="candidates drawn from random families")
    p.add_argument("--strategy", default="all", choices=["all", "shifted013"])
    p.add_argument("--max-parts", type=int, default=4, dest="max_parts")
    p.add_argument("--max-mult", type=int, default=2, dest="max_mult")
    p.add_argument("--n-max", type=int, default=5, dest="n_max")
    _add_common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("reproduce", help="recompute every worked-example value")
    _add_common(p)
    p.set_defaults(func=cmd_reproduce)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage, matching the error contract
        return int(e.code or 0)
    try:
        return args.func(args)
    except BudgetExceededError as e:
        print(f"inconclusive: {e}", file=sys.stderr)
        return 3
    except (ValidationError, ResourceLimitError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except EntropyLabError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
