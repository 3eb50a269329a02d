"""Structural analysis: Sylow subgroups, chief series, solvability-flavored
predicates, formation residuals, and quaternion-freeness.

Predicates accept either a PermGroup or a SubgroupRef; refs are analyzed
through their standalone group view, so results are cached per subgroup.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import gcd, lcm

from .caps import CapExceeded
from .group import PermGroup, SubgroupRef, is_quaternion8
from .lattice import all_subgroups, maximal_subgroups, normal_subgroups


# ---------------------------------------------------------------------------
# small number-theory helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def p_part(n: int, p: int) -> int:
    m = 1
    while n % p == 0:
        n //= p
        m *= p
    return m


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def _is_power_of(m: int, p: int) -> bool:
    while m % p == 0:
        m //= p
    return m == 1


def _as_group(X) -> PermGroup:
    return X.as_group() if isinstance(X, SubgroupRef) else X


def exponent(X) -> int:
    if isinstance(X, SubgroupRef):
        return lcm(*X.element_orders())
    return X.exponent()


# ---------------------------------------------------------------------------
# Sylow subgroups


def sylow_subgroup(G: PermGroup, p: int) -> SubgroupRef:
    """A Sylow p-subgroup, grown deterministically by adjoining p-elements
    of the normalizer of the current p-subgroup until the full p-part is hit.
    """
    _check_prime(p)
    G = _as_group(G)

    def compute():
        target = p_part(G.order, p)
        if target == 1:
            return G.trivial_subgroup()
        return _grow_to_sylow(G, p, [], target)

    return G.cached(("sylow", p), compute)


def sylow_containing(G: PermGroup, H: SubgroupRef, p: int) -> SubgroupRef:
    """A Sylow p-subgroup containing the p-subgroup H."""
    _check_prime(p)
    if not _is_power_of(H.order, p) and H.order != 1:
        raise ValueError("seed subgroup is not a p-group")
    target = p_part(G.order, p)
    ctx = G._context()
    seed = [ctx.index[g.images] for g in H.generators]
    return _grow_to_sylow(G, p, seed, target)


def _grow_to_sylow(G: PermGroup, p: int, seed_gens: list[int], target: int) -> SubgroupRef:
    ctx = G._context()
    gens = list(seed_gens)
    if not gens:
        for e in range(1, ctx.n):
            if _is_power_of(ctx.orders[e], p):
                gens.append(e)
                break
    current = ctx.close(gens)
    while len(current) < target:
        # the normalizer of a non-Sylow p-subgroup holds a p-element outside it
        norm = [e for e in range(ctx.n)
                if all(ctx.conj(h, e) in current for h in gens)]
        grew = False
        for y in norm:
            if y not in current and _is_power_of(ctx.orders[y], p):
                gens.append(y)
                current = ctx.close(gens)
                grew = True
                break
        if not grew:
            raise AssertionError("sylow climb stalled below the p-part")
    return G.subgroup_from_indices(current)


def sylow_count(G: PermGroup, p: int) -> int:
    """Number of distinct Sylow p-subgroups (index of the normalizer)."""
    P = sylow_subgroup(G, p)
    return G.order // G.normalizer(P).order


# ---------------------------------------------------------------------------
# omega subgroups


def omega(P, p: int, i: int = 1) -> SubgroupRef:
    """Subgroup generated by all elements x of P with x^(p^i) = 1.

    P must be a p-group; the result is anchored in P's parent when P is a ref.
    """
    _check_prime(p)
    if i < 1:
        raise ValueError("i must be >= 1")
    if isinstance(P, SubgroupRef):
        parent = P.parent
        pool = P.sorted_indices()
        order = P.order
    else:
        parent = P
        pool = range(P._context().n)
        order = P.order
    if not _is_power_of(order, p) and order != 1:
        raise ValueError("omega expects a p-group")
    ctx = parent._context()
    bound = p ** i
    members = [e for e in pool if bound % ctx.orders[e] == 0]
    return parent.subgroup_from_indices(ctx.close(members))


def omega_star(P, p: int) -> SubgroupRef:
    """Omega_1 for odd p, Omega_2 for p = 2."""
    return omega(P, p, 1 if p != 2 else 2)


# ---------------------------------------------------------------------------
# chief series and the derived predicates


@dataclass
class ChiefFactor:
    order: int
    kind: str  # "p-group" | "p'-group" | "mixed"


@dataclass
class ChiefSeries:
    p: int
    terms: list[SubgroupRef]   # ascending, trivial first, whole group last
    factors: list[ChiefFactor]


def chief_series(G: PermGroup, p: int) -> ChiefSeries:
    """A chief series with factors classified relative to p.

    Each step picks the first normal subgroup (in canonical key order)
    covering the previous term minimally, so the series is deterministic.
    """
    _check_prime(p)
    G = _as_group(G)

    def compute():
        norms = normal_subgroups(G)  # sorted by (order, indices), trivial first
        terms = [norms[0]]
        factors = []
        current = terms[0]
        while current.order < G.order:
            nxt = None
            for N in norms:
                if current.indices < N.indices:
                    nxt = N  # minimal: any smaller candidate would precede it
                    break
            f = nxt.order // current.order
            if _is_power_of(f, p):
                kind = "p-group"
            elif f % p:
                kind = "p'-group"
            else:
                kind = "mixed"
            factors.append(ChiefFactor(f, kind))
            terms.append(nxt)
            current = nxt
        return ChiefSeries(p, terms, factors)

    return G.cached(("chief", p), compute)


def is_p_solvable(G, p: int) -> bool:
    """Every chief factor is a p-group or a p'-group."""
    _check_prime(p)
    G = _as_group(G)
    return G.cached(("p_solvable", p), lambda: all(
        f.kind != "mixed" for f in chief_series(G, p).factors))


def is_p_supersolvable(G, p: int) -> bool:
    """p-solvable with every p-chief factor of order exactly p."""
    _check_prime(p)
    G = _as_group(G)

    def compute():
        factors = chief_series(G, p).factors
        return all(f.kind != "mixed" for f in factors) and all(
            f.order == p for f in factors if f.kind == "p-group")

    return G.cached(("p_supersolvable", p), compute)


def is_nilpotent(G) -> bool:
    """Every Sylow subgroup is normal."""
    G = _as_group(G)
    return G.cached(("nilpotent",), lambda: all(
        sylow_subgroup(G, p).is_normal() for p in prime_divisors(G.order)))


def is_p_nilpotent(G, p: int) -> bool:
    """True when the p'-elements generate a p'-subgroup.

    That subgroup is the smallest normal subgroup with p-group quotient, so
    the test is equivalent to the existence of a normal Hall p'-subgroup.
    """
    _check_prime(p)
    G = _as_group(G)

    def compute():
        ctx = G._context()
        pprime = [e for e in range(ctx.n) if gcd(ctx.orders[e], p) == 1]
        return len(ctx.close(pprime)) % p != 0

    return G.cached(("p_nilpotent", p), compute)


def is_solvable(G) -> bool:
    """Derived series reaches the trivial group."""
    G = _as_group(G)

    def compute():
        H = G
        while H.order > 1:
            D = H.derived_subgroup()
            if D.order == H.order:
                return False
            H = D.as_group()
        return True

    return G.cached(("solvable",), compute)


# ---------------------------------------------------------------------------
# formation residuals


@dataclass(frozen=True)
class FormationTag:
    """One of the three formations used here: nilpotent groups (N),
    p-nilpotent groups (Np), p-supersolvable groups (Up)."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("N", "Np", "Up"):
            raise ValueError(f"unknown formation kind {self.kind!r}")
        if self.kind == "N":
            if self.p is not None:
                raise ValueError("nilpotent formation takes no prime")
        else:
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"formation {self.kind} needs a prime, got {self.p!r}")

    @staticmethod
    def nilpotent() -> "FormationTag":
        return FormationTag("N")

    @staticmethod
    def p_nilpotent(p: int) -> "FormationTag":
        return FormationTag("Np", p)

    @staticmethod
    def p_supersolvable(p: int) -> "FormationTag":
        return FormationTag("Up", p)

    def label(self) -> str:
        return self.kind if self.p is None else f"{self.kind[0]}{self.p}"


def is_in_formation(G, tag: FormationTag) -> bool:
    if tag.kind == "N":
        return is_nilpotent(G)
    if tag.kind == "Np":
        return is_p_nilpotent(G, tag.p)
    return is_p_supersolvable(G, tag.p)


def residual(G, tag: FormationTag, prune: bool = True) -> SubgroupRef:
    """Smallest normal subgroup whose quotient lies in the formation.

    Computed as the intersection of all normal subgroups with quotient in
    the formation (well defined: these formations are closed under subdirect
    products).  With prune=True, normal subgroups above an already-accepted
    one are skipped, which never changes the intersection because the
    formations are quotient closed.
    """
    G = _as_group(G)

    def compute():
        if is_in_formation(G, tag):
            return G.trivial_subgroup()
        acc = frozenset(range(G._context().n))
        found: list[SubgroupRef] = []
        for N in normal_subgroups(G):  # ascending order
            if prune and any(M.indices <= N.indices for M in found):
                continue
            if N.order == G.order or is_in_formation(G.quotient(N).image, tag):
                found.append(N)
                acc &= N.indices
        return G.subgroup_from_indices(acc)

    if not prune:
        return compute()
    return G.cached(("residual", tag), compute)


def p_prime_core(G, p: int) -> SubgroupRef:
    """Largest normal subgroup of order coprime to p (join of all of them)."""
    _check_prime(p)
    G = _as_group(G)

    def compute():
        ctx = G._context()
        members: set[int] = {0}
        for N in normal_subgroups(G):
            if N.order % p:
                members |= N.indices
        return G.subgroup_from_indices(ctx.close(members))

    return G.cached(("p_prime_core", p), compute)


# ---------------------------------------------------------------------------
# quaternion sections


def is_quaternion_free(P, pruned: bool = True) -> bool:
    """No section H/K of the 2-group P is quaternion of order 8.

    A non-2-group input is reported as quaternion-free with a warning.  The
    pruned scan skips abelian subgroups and abelian quotients; pass
    pruned=False for the exhaustive section scan.
    """
    Pg = _as_group(P)
    if not _is_power_of(Pg.order, 2) and Pg.order != 1:
        warnings.warn("is_quaternion_free called on a non-2-group; returning True")
        return True

    def compute():
        lat = all_subgroups(Pg)
        if not lat.complete:
            raise CapExceeded("subgroup lattice is incomplete")
        for H in lat.subgroups:
            if H.order < 8 or H.order % 8:
                continue
            if pruned and H.is_abelian():
                continue
            Hg = H.as_group()
            derived = Hg.derived_subgroup()
            for K in normal_subgroups(Hg):
                if K.order * 8 != Hg.order:
                    continue
                if pruned and derived.indices <= K.indices:
                    continue  # abelian quotient cannot be quaternion
                if is_quaternion8(Hg.quotient(K).image):
                    return False
        return True

    if not pruned:
        return compute()
    return Pg.cached(("quaternion_free",), compute)


def is_minimal_non_p_supersolvable(G, p: int) -> bool:
    """Not p-supersolvable, while every maximal subgroup is."""
    _check_prime(p)
    G = _as_group(G)

    def compute():
        if is_p_supersolvable(G, p):
            return False
        return all(is_p_supersolvable(M, p) for M in maximal_subgroups(G))

    return G.cached(("min_non_pss", p), compute)
