"""Subgroup-lattice enumeration.

The full lattice is built bottom-up: every cyclic subgroup, then closure
under pairwise joins until nothing new appears.  Subgroups are deduplicated
by element-index set and returned in a canonical order, so repeated runs are
byte-for-byte identical.  Completed lattices live in a bounded LRU cache
keyed by parent group identity.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass

from .caps import CapExceeded
from .group import PermGroup, SubgroupRef


@dataclass
class SubgroupLattice:
    parent: PermGroup
    subgroups: list[SubgroupRef]
    complete: bool

    def by_order(self, k: int) -> list[SubgroupRef]:
        return [s for s in self.subgroups if s.order == k]


_LATTICE_CACHE: OrderedDict[int, tuple[PermGroup, SubgroupLattice]] = OrderedDict()
_LATTICE_CACHE_MAX = 128
_LATTICE_LOCK = threading.Lock()


def _cycle_indices(ctx, e: int) -> frozenset[int]:
    out = [0]
    cur = e
    while cur != 0:
        out.append(cur)
        cur = ctx.mul(cur, e)
    return frozenset(out)


def all_subgroups(G: PermGroup) -> SubgroupLattice:
    """Every subgroup of G (complete=False if the count cap was hit)."""
    with _LATTICE_LOCK:
        hit = _LATTICE_CACHE.get(id(G))
        if hit is not None:
            _LATTICE_CACHE.move_to_end(id(G))
            return hit[1]
    lat = _compute_lattice(G)
    with _LATTICE_LOCK:
        _LATTICE_CACHE[id(G)] = (G, lat)
        _LATTICE_CACHE.move_to_end(id(G))
        while len(_LATTICE_CACHE) > _LATTICE_CACHE_MAX:
            _LATTICE_CACHE.popitem(last=False)
    return lat


def _compute_lattice(G: PermGroup) -> SubgroupLattice:
    ctx = G._context()
    cap = G.caps.lattice_cap
    items: list[tuple[frozenset[int], tuple[int, ...]]] = []
    seen: set[frozenset[int]] = set()

    def add(idx_set: frozenset[int], gens: tuple[int, ...]) -> None:
        if idx_set not in seen:
            seen.add(idx_set)
            items.append((idx_set, gens))

    add(frozenset((0,)), ())
    for e in range(1, ctx.n):
        add(_cycle_indices(ctx, e), (e,))

    complete = True
    i = 0
    while i < len(items):
        a_set, a_gens = items[i]
        for j in range(i):
            b_set, b_gens = items[j]
            if b_set <= a_set or a_set <= b_set:
                continue
            gens = tuple(sorted(set(a_gens + b_gens)))
            add(ctx.close(gens), gens)
            if len(items) > cap:
                complete = False
                break
        if not complete:
            break
        i += 1

    refs = [SubgroupRef(G, [ctx.perms[g] for g in gens], indices=idx_set)
            for idx_set, gens in items]
    refs.sort(key=SubgroupRef.key)
    return SubgroupLattice(G, refs, complete)


def normal_subgroups(G: PermGroup) -> list[SubgroupRef]:
    """All normal subgroups, from conjugacy-class closures joined to a fixpoint.

    Independent of all_subgroups, so the two can cross-check each other.
    """
    def compute():
        ctx = G._context()
        items: list[tuple[frozenset[int], tuple[int, ...]]] = [(frozenset((0,)), ())]
        seen: set[frozenset[int]] = {items[0][0]}

        def add(idx_set, gens):
            if idx_set not in seen:
                seen.add(idx_set)
                items.append((idx_set, gens))

        for cls in G.conjugacy_class_index_sets():
            add(ctx.close(cls), cls)
        i = 0
        while i < len(items):
            a_set, a_gens = items[i]
            for j in range(i):
                b_set, b_gens = items[j]
                if b_set <= a_set or a_set <= b_set:
                    continue
                gens = tuple(sorted(set(a_gens + b_gens)))
                add(ctx.close(gens), gens)
            i += 1
        refs = [G.subgroup_from_indices(idx) for idx, _ in items]
        refs.sort(key=SubgroupRef.key)
        return refs
    return G.cached(("normal_subgroups",), compute)


def minimal_normal_subgroups(G: PermGroup) -> list[SubgroupRef]:
    """Nontrivial normal subgroups minimal under inclusion."""
    if G.order == 1:
        raise ValueError("trivial group has no minimal normal subgroups")
    norms = [N for N in normal_subgroups(G) if 1 < N.order]
    out = []
    for N in norms:
        if not any(M.order < N.order and M.indices < N.indices for M in norms):
            out.append(N)
    return out


def maximal_subgroups(G: PermGroup) -> list[SubgroupRef]:
    """Proper subgroups with nothing strictly between them and G."""
    lat = all_subgroups(G)
    if not lat.complete:
        raise CapExceeded("subgroup lattice is incomplete")
    proper = [s for s in lat.subgroups if s.order < G.order]
    out = []
    for M in proper:
        covered = any(S.order > M.order and S.order < G.order and M.indices < S.indices
                      for S in proper)
        if not covered:
            out.append(M)
    return out


def _is_prime_power(n: int) -> int | None:
    if n < 2:
        return None
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            return p if m == 1 else None
        p += 1
    return n


def frattini(G: PermGroup, via_lattice: bool = False) -> SubgroupRef:
    """Frattini subgroup: intersection of the maximal subgroups.

    For p-groups the fast path generates it from commutators and p-th powers
    of generators; pass via_lattice=True to force the general path.
    """
    if G.order == 1:
        return G.trivial_subgroup()
    p = _is_prime_power(G.order)
    if p is not None and not via_lattice:
        ctx = G._context()
        idxs = set()
        for g in G.generators:
            idxs.add(ctx.index[(g ** p).images])
        der = G.derived_subgroup()
        idxs.update(ctx.index[g.images] for g in der.generators)
        return G.subgroup_from_indices(ctx.close(idxs))
    maxes = maximal_subgroups(G)
    if not maxes:
        return G.trivial_subgroup()
    idx = maxes[0].indices
    for M in maxes[1:]:
        idx &= M.indices
    return G.subgroup_from_indices(idx)


def subgroups_of_index(G: PermGroup, k: int) -> list[SubgroupRef]:
    if k <= 0 or G.order % k:
        return []
    target = G.order // k
    lat = all_subgroups(G)
    if not lat.complete:
        raise CapExceeded("subgroup lattice is incomplete")
    return lat.by_order(target)


def cyclic_subgroups_of_order(X, m: int) -> list[SubgroupRef]:
    """Cyclic subgroups of order m, anchored in the parent when X is a ref.

    Works from element orders; never builds the lattice.
    """
    if isinstance(X, SubgroupRef):
        parent = X.parent
        ctx = parent._context()
        pool = X.sorted_indices()
    else:
        parent = X
        ctx = X._context()
        pool = range(ctx.n)
    found: dict[frozenset[int], SubgroupRef] = {}
    for e in pool:
        if ctx.orders[e] == m:
            idxs = _cycle_indices(ctx, e)
            if idxs not in found:
                found[idxs] = SubgroupRef(parent, [ctx.perms[e]], indices=idxs)
    return sorted(found.values(), key=SubgroupRef.key)
