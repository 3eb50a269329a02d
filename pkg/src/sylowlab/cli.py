"""Command-line front end.

Three commands: `analyze` prints the structural profile of one group,
`verify` runs the verification suites over a catalog slice, `search-q9`
hunts for counterexamples to the in-Sylow embedding question at odd primes.

Reports go to standard output; progress and summaries go to standard error.
Records are sorted by (group order, group id, prime, check) so runs with any
worker count produce byte-identical output.  Exit codes: 0 clean, 1 a
mathematical violation or counterexample was found, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import sys
from dataclasses import replace

from . import __version__
from .caps import CapExceeded, Caps, DEFAULT_CAPS
from .catalog import (CatalogEntry, CheckRecord, builtin_catalog, builtin_construct,
                      cache_append, cache_scan, default_cache_path, fixture_catalog,
                      load_catalog)
from .embedding import _center_within
from .structure import (FormationTag, is_nilpotent, is_p_nilpotent, is_p_solvable,
                        is_p_supersolvable, is_prime, is_quaternion_free,
                        is_solvable, prime_divisors, residual, sylow_count,
                        sylow_subgroup)
from .verifier import (CRITERIA, LEMMA_CHECKS, classical_criteria, lemma_suite,
                       q9_search, verify_asaad, verify_biconditional)

SUITES = ("A", "B", "asaad", "classical", "lemmas")

_SUITE_CHECKS = {
    "A": ("biconditional-A",),
    "B": ("biconditional-B",),
    "asaad": ("asaad",),
    "classical": CRITERIA,
    "lemmas": LEMMA_CHECKS,
}


# ---------------------------------------------------------------------------
# argument plumbing


def _add_caps_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--element-cap", type=int, default=None,
                        help="max elements to enumerate per group")
    parser.add_argument("--lattice-cap", type=int, default=None,
                        help="max subgroups per lattice")
    parser.add_argument("--quotient-degree-cap", type=int, default=None,
                        help="max degree for quotient actions")
    parser.add_argument("--bsgs-order-cap", type=int, default=None,
                        help="max group order for the stabilizer chain")
    parser.add_argument("--table-cap", type=int, default=None,
                        help="max degree for cached multiplication tables")


def _caps_from_args(args: argparse.Namespace) -> Caps:
    kw = {}
    for field, attr in (("element_cap", "element_cap"),
                        ("lattice_cap", "lattice_cap"),
                        ("quotient_degree_cap", "quotient_degree_cap"),
                        ("bsgs_order_cap", "bsgs_order_cap"),
                        ("table_cap", "table_cap")):
        v = getattr(args, attr, None)
        if v is not None:
            if v < 1:
                raise ValueError(f"--{attr.replace('_', '-')} must be positive")
            kw[field] = v
    return replace(DEFAULT_CAPS, **kw) if kw else DEFAULT_CAPS


def _parse_primes(text: str) -> list[int] | None:
    """'all' means every prime divisor of each group's order."""
    if text == "all":
        return None
    try:
        ps = sorted({int(tok) for tok in text.split(",") if tok})
    except ValueError:
        raise ValueError(f"--p expects 'all' or comma-separated primes, got {text!r}")
    if not ps:
        raise ValueError("--p received an empty prime list")
    for p in ps:
        if not is_prime(p):
            raise ValueError(f"--p includes {p}, which is not prime")
    return ps


def resolve_group_spec(spec: str, caps: Caps | None = None) -> CatalogEntry:
    """`builtin:<spec>` or `file:<path>#<id>` to a catalog entry."""
    if spec.startswith("builtin:"):
        return builtin_construct(spec[len("builtin:"):])
    if spec.startswith("file:"):
        rest = spec[len("file:"):]
        if "#" not in rest:
            raise ValueError("file: group spec needs the form file:<path>#<id>")
        path, _, gid = rest.rpartition("#")
        for entry in load_catalog(path):
            if entry.id == gid:
                return entry
        raise ValueError(f"no entry with id {gid!r} in {path}")
    raise ValueError(f"group spec must start with builtin: or file:, got {spec!r}")


def _load_entries(args: argparse.Namespace) -> list[CatalogEntry]:
    if getattr(args, "group", None):
        return [resolve_group_spec(args.group)]
    entries = builtin_catalog(args.max_order) + fixture_catalog()
    for path in getattr(args, "catalog", None) or []:
        entries += load_catalog(path)
    seen = set()
    out = []
    for e in entries:
        if e.id in seen:
            raise ValueError(f"duplicate catalog id {e.id!r}")
        seen.add(e.id)
        out.append(e)
    return out


# ---------------------------------------------------------------------------
# record helpers


def _record_name(rec: dict) -> str:
    return rec.get("check") or rec.get("variant") or ""


def _sort_key(rec: dict):
    return (rec["order"], rec["id"], rec["p"], _record_name(rec))


def _dump(rec: dict) -> str:
    return json.dumps(rec, separators=(",", ":"))


def _record_verdict(rec: dict) -> str:
    if rec["record"] == "check":
        return rec["status"]
    if rec["cond1"] and rec["cond2"] and not rec["conclusion"]:
        return "counterexample"
    return "pass"


def _is_violation(rec: dict) -> bool:
    return _record_verdict(rec) in ("violation", "counterexample")


# ---------------------------------------------------------------------------
# workers (module-level so they survive pickling)


def _verify_task(task) -> tuple[list[dict], list[dict]]:
    entry, which, primes, caps, sample_limit, rng_seed, max_order = task
    records: list[dict] = []
    skipped: list[dict] = []
    try:
        G = entry.group(caps)
    except CapExceeded as exc:
        return records, [{"id": entry.id, "reason": str(exc)}]
    if max_order is not None and G.order > max_order:
        return records, skipped
    suites = [s for s in which if s != "lemmas"]
    if suites:
        try:
            ps = [p for p in prime_divisors(G.order)
                  if primes is None or p in primes]
            for p in ps:
                for suite in suites:
                    if suite in ("A", "B"):
                        v = verify_biconditional(G, p, suite, gid=entry.id)
                        records.append(v.to_record())
                    elif suite == "asaad":
                        records.append(verify_asaad(G, p, gid=entry.id).to_record())
                    elif suite == "classical":
                        records += [v.to_record()
                                    for v in classical_criteria(G, p, gid=entry.id)]
        except CapExceeded as exc:
            skipped.append({"id": entry.id, "reason": str(exc)})
    if "lemmas" in which:
        res = lemma_suite([entry], list(primes) if primes else None,
                          caps=caps, sample_limit=sample_limit, rng_seed=rng_seed)
        records += [v.to_record() for v in res.reports]
        skipped += res.skipped
    return records, skipped


def _q9_task(task) -> tuple[list[dict], list[dict], list[dict]]:
    entry, primes, max_order, caps = task
    res = q9_search([entry], max_order, list(primes) if primes else None, caps=caps)
    return ([r.to_record() for r in res.reports], res.counterexamples, res.skipped)


def _run_tasks(worker, tasks: list, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        out = []
        for i, task in enumerate(tasks):
            print(f"  [{i + 1}/{len(tasks)}] {task[0].id}", file=sys.stderr)
            out.append(worker(task))
        return out
    with multiprocessing.Pool(jobs) as pool:
        return pool.map(worker, tasks, chunksize=1)


# ---------------------------------------------------------------------------
# cache


def _cache_load(path: str | None) -> dict:
    if not path:
        return {}
    rows = cache_scan(path, version=__version__)
    return {(r.id, r.p, r.check): r for r in rows}


def _cached_entry_records(cached: dict, entry_id: str, checks: tuple[str, ...],
                          primes: list[int] | None, max_order: int | None,
                          odd_only: bool = False) -> list[dict] | None:
    """All records for one entry rebuilt from cache, or None on any miss."""
    rows = [r for (gid, _, _), r in cached.items() if gid == entry_id]
    if not rows:
        return None
    try:
        order = json.loads(rows[0].witness)["order"]
    except (json.JSONDecodeError, KeyError, TypeError):
        return None
    if max_order is not None and order > max_order:
        return []
    ps = [p for p in prime_divisors(order)
          if (primes is None or p in primes) and not (odd_only and p == 2)]
    records = []
    for p in ps:
        for check in checks:
            row = cached.get((entry_id, p, check))
            if row is None:
                return None
            try:
                records.append(json.loads(row.witness))
            except json.JSONDecodeError:
                return None
    return records


def _cache_store(path: str | None, cached: dict, records: list[dict]) -> None:
    if not path:
        return
    for rec in records:
        key = (rec["id"], rec["p"], _record_name(rec))
        if key in cached:
            continue
        row = CheckRecord(rec["id"], rec["p"], _record_name(rec),
                          _record_verdict(rec), witness=_dump(rec))
        cache_append(path, row)
        cached[key] = row


# ---------------------------------------------------------------------------
# output


def _emit_json(records: list[dict]) -> None:
    for rec in records:
        print(_dump(rec))


def _emit_verify_table(records: list[dict]) -> None:
    counts: dict[str, dict[str, int]] = {}
    for rec in records:
        row = counts.setdefault(_record_name(rec), {})
        verdict = _record_verdict(rec)
        row[verdict] = row.get(verdict, 0) + 1
    statuses = ("pass", "violation", "not-applicable", "counterexample")
    shown = [s for s in statuses if any(s in row for row in counts.values())]
    name_w = max([len(n) for n in counts] + [5])
    print("check".ljust(name_w) + "".join(s.rjust(16) for s in shown))
    for name in sorted(counts):
        row = counts[name]
        print(name.ljust(name_w)
              + "".join(str(row.get(s, 0)).rjust(16) for s in shown))
    violations = [r for r in records if _is_violation(r)]
    for rec in violations:
        print()
        print(f"VIOLATION {rec['id']} order={rec['order']} p={rec['p']} "
              f"check={_record_name(rec)}")
        if rec.get("detail"):
            print(f"  detail: {rec['detail']}")
        if rec.get("witness"):
            print(f"  witness: {_dump(rec['witness'])}")


def _finish(records: list[dict], skipped: list[dict], fmt: str,
            label: str) -> int:
    records.sort(key=_sort_key)
    if fmt == "json-lines":
        _emit_json(records)
    else:
        _emit_verify_table(records)
    for s in sorted(skipped, key=lambda d: d["id"]):
        print(f"skipped {s['id']}: {s['reason']}", file=sys.stderr)
    bad = sum(1 for r in records if _is_violation(r))
    print(f"{label}: {len(records)} records, {bad} violations, "
          f"{len(skipped)} skipped", file=sys.stderr)
    return 1 if bad else 0


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args: argparse.Namespace) -> int:
    caps = _caps_from_args(args)
    entry = resolve_group_spec(args.group)
    G = entry.group(caps)
    primes = _parse_primes(args.p)
    ps = primes if primes is not None else prime_divisors(G.order)

    profile = {
        "record": "analysis",
        "id": entry.id,
        "order": G.order,
        "degree": G.degree,
        "center_order": G.center().order,
        "nilpotent": is_nilpotent(G),
        "solvable": is_solvable(G),
        "primes": [],
    }
    if G.order % 2 == 0:
        profile["quaternion_free_sylow2"] = is_quaternion_free(sylow_subgroup(G, 2))
    for p in ps:
        P = sylow_subgroup(G, p)
        row = {
            "p": p,
            "sylow_order": P.order,
            "sylow_count": sylow_count(G, p),
            "normalizer_order": G.normalizer(P).order,
            "sylow_center_order": len(_center_within(G, P)),
            "p_nilpotent": is_p_nilpotent(G, p),
            "p_solvable": is_p_solvable(G, p),
            "p_supersolvable": is_p_supersolvable(G, p),
            "residual_orders": {
                tag.label(): residual(G, tag).order
                for tag in (FormationTag.nilpotent(),
                            FormationTag.p_nilpotent(p),
                            FormationTag.p_supersolvable(p))
            },
        }
        profile["primes"].append(row)

    if args.format == "json-lines":
        print(_dump(profile))
        return 0
    print(f"group {entry.id}  order {G.order}  degree {G.degree}")
    print(f"  center order {profile['center_order']}"
          f"  nilpotent={profile['nilpotent']}  solvable={profile['solvable']}")
    if "quaternion_free_sylow2" in profile:
        print(f"  Sylow 2-subgroup quaternion-free: "
              f"{profile['quaternion_free_sylow2']}")
    for row in profile["primes"]:
        p = row["p"]
        print(f"  p={p}: sylow order {row['sylow_order']} (count {row['sylow_count']}), "
              f"normalizer order {row['normalizer_order']}, "
              f"sylow center order {row['sylow_center_order']}")
        print(f"       p-nilpotent={row['p_nilpotent']} "
              f"p-solvable={row['p_solvable']} "
              f"p-supersolvable={row['p_supersolvable']}")
        resid = ", ".join(f"{k}={v}" for k, v in row["residual_orders"].items())
        print(f"       residual orders: {resid}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    caps = _caps_from_args(args)
    primes = _parse_primes(args.p)
    which = []
    for tok in args.which.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok not in SUITES:
            raise ValueError(f"--which includes unknown suite {tok!r}; "
                             f"choose from {','.join(SUITES)}")
        if tok not in which:
            which.append(tok)
    if not which:
        raise ValueError("--which selected no suites")
    entries = _load_entries(args)

    checks = tuple(c for s in which for c in _SUITE_CHECKS[s])
    cache_path = args.cache or default_cache_path()
    cached = _cache_load(cache_path)
    records: list[dict] = []
    skipped: list[dict] = []
    tasks = []
    for entry in entries:
        hit = _cached_entry_records(cached, entry.id, checks, primes,
                                    args.max_order)
        if hit is not None:
            records += hit
        else:
            tasks.append((entry, tuple(which), primes, caps,
                          args.sample_limit, args.rng_seed, args.max_order))
    print(f"verify: {len(entries)} entries, {len(tasks)} to compute, "
          f"suites {','.join(which)}", file=sys.stderr)
    for recs, skips in _run_tasks(_verify_task, tasks, args.jobs):
        _cache_store(cache_path, cached, recs)
        records += recs
        skipped += skips
    return _finish(records, skipped, args.format, "verify")


def cmd_search_q9(args: argparse.Namespace) -> int:
    caps = _caps_from_args(args)
    primes = _parse_primes(args.p)
    if primes is not None and 2 in primes:
        raise ValueError("search-q9 runs at odd primes only")
    entries = _load_entries(args)

    cache_path = args.cache or default_cache_path()
    cached = _cache_load(cache_path)
    records: list[dict] = []
    skipped: list[dict] = []
    counterexamples: list[dict] = []
    tasks = []
    for entry in entries:
        hit = _cached_entry_records(cached, entry.id, ("Q9",), primes,
                                    args.max_order, odd_only=True)
        if hit is not None:
            records += hit
        else:
            tasks.append((entry, primes, args.max_order, caps))
    print(f"search-q9: {len(entries)} entries, {len(tasks)} to compute, "
          f"max order {args.max_order}", file=sys.stderr)
    for recs, cx, skips in _run_tasks(_q9_task, tasks, args.jobs):
        _cache_store(cache_path, cached, recs)
        records += recs
        counterexamples += cx
        skipped += skips
    counterexamples += [
        {"id": rec["id"], "order": rec["order"], "p": rec["p"], "report": rec}
        for rec in records
        if rec["record"] == "condition" and _record_verdict(rec) == "counterexample"
        and not any(c["id"] == rec["id"] and c["p"] == rec["p"]
                    for c in counterexamples)
    ]

    records.sort(key=_sort_key)
    if args.format == "json-lines":
        _emit_json(records)
    else:
        checked = len(records)
        print(f"checked {checked} (group, prime) pairs up to order {args.max_order}")
        for c in sorted(counterexamples, key=lambda d: (d["order"], d["id"], d["p"])):
            print(f"COUNTEREXAMPLE {c['id']} order={c['order']} p={c['p']}")
            print(f"  {_dump(c['report'])}")
        if not counterexamples:
            print("no counterexamples found")
    for s in sorted(skipped, key=lambda d: d["id"]):
        print(f"skipped {s['id']}: {s['reason']}", file=sys.stderr)
    print(f"search-q9: {len(records)} records, {len(counterexamples)} "
          f"counterexamples, {len(skipped)} skipped", file=sys.stderr)
    return 1 if counterexamples else 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sylowlab",
        description="structure analysis and embedding-condition verification "
                    "for finite permutation groups")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="print the structural profile of one group")
    pa.add_argument("group", help="builtin:<spec> or file:<path>#<id>")
    pa.add_argument("--p", default="all", help="prime, comma list, or 'all'")
    pa.add_argument("--format", choices=("table", "json-lines"), default="table")
    _add_caps_args(pa)
    pa.set_defaults(func=cmd_analyze)

    pv = sub.add_parser("verify", help="run verification suites over a catalog")
    pv.add_argument("group", nargs="?", default=None,
                    help="optional single group instead of the catalog")
    pv.add_argument("--which", default="A,B",
                    help=f"comma list from {','.join(SUITES)}")
    pv.add_argument("--p", default="all")
    pv.add_argument("--max-order", type=int, default=120,
                    help="largest group order to check, from any source")
    pv.add_argument("--jobs", type=int, default=1)
    pv.add_argument("--cache", default=None,
                    help="append-only result cache (default $SYLOWLAB_CACHE)")
    pv.add_argument("--catalog", action="append", default=[],
                    help="extra catalog file(s) to include")
    pv.add_argument("--format", choices=("table", "json-lines"), default="table")
    pv.add_argument("--sample-limit", type=int, default=200,
                    help="random subgroup samples per group in the lemma suite")
    pv.add_argument("--rng-seed", type=int, default=0)
    _add_caps_args(pv)
    pv.set_defaults(func=cmd_verify)

    pq = sub.add_parser("search-q9",
                        help="search for in-Sylow embedding counterexamples")
    pq.add_argument("group", nargs="?", default=None)
    pq.add_argument("--p", default="all", help="odd primes only")
    pq.add_argument("--max-order", type=int, default=200)
    pq.add_argument("--jobs", type=int, default=1)
    pq.add_argument("--cache", default=None)
    pq.add_argument("--catalog", action="append", default=[])
    pq.add_argument("--format", choices=("table", "json-lines"), default="table")
    _add_caps_args(pq)
    pq.set_defaults(func=cmd_search_q9)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return 2
    if getattr(args, "max_order", 1) < 1:
        print("error: --max-order must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ValueError, OSError, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
