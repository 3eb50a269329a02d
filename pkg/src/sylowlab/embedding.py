"""Complement and c-embedding tests.

A subgroup H of G, sitting inside an intermediate subgroup K, is c-embedded
relative to K when some B <= G satisfies |H||B| = |G| * |H n B| with H n B
contained in the center of K.  The order identity holds exactly when the
element-wise product set HB covers all of G, because |HB| = |H||B| / |H n B|
for any pair of subgroups.
"""

from __future__ import annotations

from dataclasses import dataclass

from .caps import CapExceeded
from .group import PermGroup, SubgroupRef
from .lattice import all_subgroups


@dataclass
class CEmbedReport:
    H: SubgroupRef
    K: SubgroupRef
    verdict: bool
    witness: SubgroupRef | None = None
    mode: str = "none"  # "central" | "complemented" | "partial" | "none"

    def __bool__(self) -> bool:
        return self.verdict

    def recheck(self) -> bool:
        """Re-verify the witness against the definition (false reports pass)."""
        if not self.verdict:
            return True
        G = self.K.parent
        B = self.witness
        inter = self.H.indices & B.indices
        return (self.H.order * B.order == G.order * len(inter)
                and inter <= _center_within(G, self.K)
                and (len(inter) == 1 or _product_covers(G, self.H, B)))

    def describe(self) -> str:
        if not self.verdict:
            return "no witness"
        if self.mode == "central":
            return "central (witness B = G)"
        if self.mode == "complemented":
            return f"complemented by subgroup of order {self.witness.order}"
        inter = len(self.H.indices & self.witness.indices)
        return (f"partial witness of order {self.witness.order}, "
                f"intersection order {inter}")


def _center_within(G: PermGroup, K: SubgroupRef) -> frozenset[int]:
    """Indices (in G) of the center of K."""
    if K.order == G.order:
        return G.center().indices
    ctx = G._context()
    kgens = [ctx.index[g.images] for g in K.generators]
    return frozenset(z for z in K.indices
                     if all(ctx.mul(z, g) == ctx.mul(g, z) for g in kgens))


def _product_covers(G: PermGroup, H: SubgroupRef, B: SubgroupRef) -> bool:
    """Direct check that the product set HB is all of G.

    The order identity already forces this, so the scan only runs it on
    acceptance of a witness with nontrivial intersection, as a guard against
    table corruption rather than a mathematical filter.
    """
    if B.order == G.order:
        return True
    ctx = G._context()
    prod = set()
    for h in H.indices:
        for b in B.indices:
            prod.add(ctx.mul(h, b))
    return len(prod) == G.order


def _mode(d: int, B: SubgroupRef, G: PermGroup) -> str:
    if B.order == G.order:
        return "central"
    if d == 1:
        return "complemented"
    return "partial"


def is_complemented(G: PermGroup, H: SubgroupRef) -> SubgroupRef | None:
    """A subgroup B with |B| = |G|/|H| and trivial intersection, or None."""
    lat = all_subgroups(G)
    if not lat.complete:
        raise CapExceeded("subgroup lattice is incomplete")
    for B in reversed(lat.by_order(G.order // H.order)):
        if len(H.indices & B.indices) == 1:
            return B
    return None


def is_c_embedded(G: PermGroup, K: SubgroupRef, H: SubgroupRef,
                  use_fast_paths: bool = True) -> CEmbedReport:
    """Search for a c-embedding witness for H <= K <= G.

    Both search strategies scan candidate subgroups B in descending
    (order, canonical key) order and stop at the first witness, so they
    return identical reports.  The default strategy visits only the order
    classes |G| * d / |H| for divisors d of |H| (any witness must have such
    an order) and tests centrality of B = G without building the lattice.
    With use_fast_paths=False every subgroup is tested against the raw
    order identity instead, as an independent cross-check.
    """
    if H.parent is not G or K.parent is not G:
        raise ValueError("H and K must be subgroups of G")
    if not H.indices <= K.indices:
        raise ValueError("H must be contained in K")

    center_idx = _center_within(G, K)

    if use_fast_paths:
        if H.indices <= center_idx:
            return CEmbedReport(H, K, True, G.whole_subgroup(), "central")
        lat = all_subgroups(G)
        if not lat.complete:
            raise CapExceeded("subgroup lattice is incomplete")
        # d = |H| needs B = G and H central in K, ruled out above
        divisors = [d for d in range(H.order - 1, 0, -1) if H.order % d == 0]
        for d in divisors:
            target = G.order * d // H.order
            for B in reversed(lat.by_order(target)):
                inter = H.indices & B.indices
                if (len(inter) == d and inter <= center_idx
                        and (d == 1 or _product_covers(G, H, B))):
                    return CEmbedReport(H, K, True, B, _mode(d, B, G))
        return CEmbedReport(H, K, False)

    lat = all_subgroups(G)
    if not lat.complete:
        raise CapExceeded("subgroup lattice is incomplete")
    for B in sorted(lat.subgroups, key=SubgroupRef.key, reverse=True):
        inter = H.indices & B.indices
        if (H.order * B.order == G.order * len(inter) and inter <= center_idx
                and (len(inter) == 1 or _product_covers(G, H, B))):
            return CEmbedReport(H, K, True, B, _mode(len(inter), B, G))
    return CEmbedReport(H, K, False)


def is_c_embedded_in_sylow(P: SubgroupRef, H: SubgroupRef,
                           use_fast_paths: bool = True) -> CEmbedReport:
    """c-embedding of H inside the subgroup P itself: both the ambient group
    and the centrality reference are P, and witnesses range over subgroups
    of P.

    P and H are subgroups of a common parent with H <= P; the report's
    subgroups live in P viewed as a standalone group.
    """
    if H.parent is not P.parent:
        raise ValueError("H and P must share a parent group")
    if not H.indices <= P.indices:
        raise ValueError("H must be contained in P")
    Pg = P.as_group()
    Hp = Pg.subgroup(list(H.generators))
    return is_c_embedded(Pg, Pg.whole_subgroup(), Hp, use_fast_paths=use_fast_paths)
