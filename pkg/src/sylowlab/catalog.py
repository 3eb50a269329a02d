"""Group sources and persistence: built-in constructors, a line-delimited
interchange format for externally exported groups, and an append-only cache
of check results for resumable sweeps.

Wire format, one JSON object per line, UTF-8:

    {"id":"S3","degree":3,"gens":[[2,3,1],[2,1,3]],"name":"optional"}

Image lists are 1-based on disk and 0-based in memory; the conversion
happens only here.
"""

from __future__ import annotations

import json
import os
import re
import warnings
from dataclasses import dataclass, field
from math import factorial

from . import __version__
from .caps import Caps
from .group import PermGroup, Permutation, build_group

_ATOM = re.compile(r"^([SACDQ])([0-9]+)$")


# ---------------------------------------------------------------------------
# catalog entries


@dataclass
class CatalogEntry:
    id: str
    degree: int
    gens: list[list[int]]  # 0-based image lists
    name: str | None = None
    source: str = "builtin"

    def group(self, caps: Caps | None = None) -> PermGroup:
        perms = [Permutation(g) for g in self.gens]
        return build_group(self.degree, perms, caps=caps)


def entry_from_group(gid: str, G: PermGroup, name: str | None = None,
                     source: str = "builtin") -> CatalogEntry:
    return CatalogEntry(gid, G.degree, [list(g.images) for g in G.generators],
                        name, source)


def entry_to_line(entry: CatalogEntry) -> str:
    """Canonical one-line serialization (1-based images, fixed key order)."""
    payload: dict = {
        "id": entry.id,
        "degree": entry.degree,
        "gens": [[i + 1 for i in g] for g in entry.gens],
    }
    if entry.name is not None:
        payload["name"] = entry.name
    return json.dumps(payload, separators=(",", ":"))


def entry_from_line(line: str, lineno: int = 0, source: str = "file") -> CatalogEntry:
    where = f"line {lineno}" if lineno else "input"
    try:
        payload = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{where}: not valid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise ValueError(f"{where}: expected an object")
    try:
        gid = payload["id"]
        degree = payload["degree"]
        gens = payload["gens"]
    except KeyError as exc:
        raise ValueError(f"{where}: missing field {exc}") from None
    if not isinstance(gid, str) or not isinstance(degree, int) or degree < 1:
        raise ValueError(f"{where}: bad id or degree")
    converted = []
    for g in gens:
        if (not isinstance(g, list) or len(g) != degree
                or sorted(g) != list(range(1, degree + 1))):
            raise ValueError(f"{where}: image list is not a bijection on 1..{degree}")
        converted.append([i - 1 for i in g])
    name = payload.get("name")
    if name is not None and not isinstance(name, str):
        raise ValueError(f"{where}: name must be a string")
    return CatalogEntry(gid, degree, converted, name, source)


def load_catalog(path: str) -> list[CatalogEntry]:
    entries = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            entry = entry_from_line(line, lineno, source=f"file({path})")
            if entry.id in seen:
                raise ValueError(f"line {lineno}: duplicate id {entry.id!r}")
            seen.add(entry.id)
            entries.append(entry)
    return entries


def save_catalog(path: str, entries: list[CatalogEntry]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(entry_to_line(entry) + "\n")


def fixture_path(stem: str) -> str:
    return os.path.join(os.path.dirname(__file__), "data", f"{stem}.jsonl")


def fixture_catalog() -> list[CatalogEntry]:
    """The two bundled reference groups."""
    out = []
    for stem in ("sg216_153", "sl23"):
        out.extend(load_catalog(fixture_path(stem)))
    return out


# ---------------------------------------------------------------------------
# built-in constructors


def _cycle_images(n: int, points: tuple[int, ...]) -> list[int]:
    images = list(range(n))
    for a, b in zip(points, points[1:] + points[:1]):
        images[a] = b
    return images


def _atom_gens(kind: str, n: int) -> tuple[int, list[list[int]]]:
    """(degree, 0-based generator images) for one grammar atom."""
    if kind == "C":
        if n == 1:
            return 1, []
        return n, [_cycle_images(n, tuple(range(n)))]
    if kind == "S":
        if n == 1:
            return 1, []
        gens = [_cycle_images(n, (0, 1)), _cycle_images(n, tuple(range(n)))]
        return n, [g for i, g in enumerate(gens) if g not in gens[:i]]
    if kind == "A":
        if n < 3:
            return max(n, 1), []
        cyc = tuple(range(n)) if n % 2 else tuple(range(1, n))
        gens = [_cycle_images(n, (0, 1, 2)), _cycle_images(n, cyc)]
        return n, [g for i, g in enumerate(gens) if g not in gens[:i]]
    if kind == "D":
        if n % 2 or n < 4:
            raise ValueError(f"dihedral order must be even and at least 4, got {n}")
        if n == 4:
            return 4, [_cycle_images(4, (0, 1)), _cycle_images(4, (2, 3))]
        half = n // 2
        rot = _cycle_images(half, tuple(range(half)))
        ref = [(half - i) % half for i in range(half)]
        return half, [rot, ref]
    if kind == "Q":
        if n % 4 or n < 4:
            raise ValueError(f"dicyclic order must be divisible by 4, got {n}")
        k = n // 4
        m = 2 * k
        a = list(range(n))
        b = list(range(n))
        for j in range(m):
            a[j] = (j + 1) % m
            a[m + j] = m + (j - 1) % m
            b[j] = m + j
            b[m + j] = (j + k) % m
        return n, [a, b]
    raise ValueError(f"unknown constructor kind {kind!r}")


def _parse_atom(token: str) -> tuple[str, int]:
    match = _ATOM.match(token)
    if not match:
        raise ValueError(f"malformed group spec token {token!r}")
    kind, digits = match.group(1), int(match.group(2))
    if digits < 1:
        raise ValueError(f"malformed group spec token {token!r}")
    return kind, digits


def spec_order(spec: str) -> int:
    """Order of the group a spec string constructs, from the formulas."""
    total = 1
    for token in spec.split("x"):
        kind, n = _parse_atom(token)
        if kind == "S":
            total *= factorial(n)
        elif kind == "A":
            total *= factorial(n) // 2 if n >= 2 else 1
        else:  # C, D, Q all have order equal to the parameter
            total *= n
    return total


def builtin_construct(spec: str) -> CatalogEntry:
    """Build a catalog entry from the group-spec grammar.

    Atoms: S<n>, A<n>, C<n>, D<m> (dihedral of order m, even m >= 4, with
    D4 the Klein four-group), Q<m> (dicyclic of order m, 4 | m, Q8 the
    quaternion group).  Atoms joined by `x` give direct products acting on
    disjoint points.
    """
    degree = 0
    gens: list[list[int]] = []
    parts = []
    for token in spec.split("x"):
        kind, n = _parse_atom(token)
        d, atom_gens = _atom_gens(kind, n)
        parts.append((d, atom_gens))
    degree = sum(d for d, _ in parts)
    offset = 0
    for d, atom in parts:
        for g in atom:
            images = list(range(degree))
            images[offset:offset + d] = [offset + i for i in g]
            gens.append(images)
        offset += d
    return CatalogEntry(spec, max(degree, 1), gens, source="builtin")


def builtin_catalog(max_order: int) -> list[CatalogEntry]:
    """Deterministic roster: cyclic, dihedral, dicyclic, symmetric and
    alternating groups up to max_order, then pairwise direct products of
    those (trivial factors skipped), deduplicated by spec string.
    """
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    singles: list[str] = []
    singles += [f"C{n}" for n in range(1, max_order + 1)]
    singles += [f"D{m}" for m in range(4, max_order + 1, 2)]
    singles += [f"Q{m}" for m in range(8, max_order + 1, 4)]
    n = 2
    while factorial(n) <= max_order:
        singles.append(f"S{n}")
        n += 1
    n = 3
    while factorial(n) // 2 <= max_order:
        singles.append(f"A{n}")
        n += 1

    specs = list(singles)
    seen = set(singles)
    nontrivial = [s for s in singles if spec_order(s) > 1]
    for i, left in enumerate(nontrivial):
        for right in nontrivial[i:]:
            if spec_order(left) * spec_order(right) > max_order:
                continue
            combined = f"{left}x{right}"
            if combined not in seen:
                seen.add(combined)
                specs.append(combined)
    return [builtin_construct(s) for s in specs]


# ---------------------------------------------------------------------------
# result cache


@dataclass
class CheckRecord:
    id: str
    p: int
    check: str
    verdict: str
    witness: str = ""
    ms: float = 0.0
    version: str = field(default=__version__)

    def key(self) -> tuple[str, int, str, str]:
        return (self.id, self.p, self.check, self.version)


_RECORD_FIELDS = ("id", "p", "check", "verdict", "witness", "ms", "version")


def record_to_line(rec: CheckRecord) -> str:
    return json.dumps({f: getattr(rec, f) for f in _RECORD_FIELDS},
                      separators=(",", ":"))


def default_cache_path() -> str | None:
    return os.environ.get("SYLOWLAB_CACHE") or None


def cache_append(path: str, rec: CheckRecord) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(record_to_line(rec) + "\n")


def cache_scan(path: str, id_prefix: str | None = None, p: int | None = None,
               check: str | None = None, version: str | None = None) -> list[CheckRecord]:
    """Read records matching the filters; corrupt lines are skipped with a
    single warning carrying the count."""
    if not os.path.exists(path):
        return []
    records = []
    corrupt = 0
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            try:
                payload = json.loads(line)
                rec = CheckRecord(**{f: payload[f] for f in _RECORD_FIELDS})
                if not isinstance(rec.id, str) or not isinstance(rec.p, int):
                    raise TypeError
            except (json.JSONDecodeError, KeyError, TypeError):
                corrupt += 1
                continue
            if id_prefix is not None and not rec.id.startswith(id_prefix):
                continue
            if p is not None and rec.p != p:
                continue
            if check is not None and rec.check != check:
                continue
            if version is not None and rec.version != version:
                continue
            records.append(rec)
    if corrupt:
        warnings.warn(f"skipped {corrupt} corrupt cache line(s) in {path}")
    return records
