"""Condition evaluation and verification sweeps.

Three variants share one shape: a normalizer condition (cond1), an embedding
condition quantified over Sylow-intersection subgroups (cond2), and a global
conclusion about the group.

  variant A:  cond1 = N_G(P) p-supersolvable, conclusion = G p-supersolvable
  variant B:  cond1 = N_G(P) p-nilpotent,     conclusion = G p-nilpotent
  variant Q9: like B, but the embedding test runs inside P itself

For A (on p-solvable groups) and B, cond1 and cond2 together are equivalent
to the conclusion; any observed violation is an implementation bug or a
publishable surprise, and is surfaced as a first-class record.  For Q9 the
equivalence is an open question for odd p, so q9_search hunts for a group
satisfying both conditions without being p-nilpotent.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .caps import CapExceeded, Caps
from .catalog import CatalogEntry
from .embedding import _center_within, is_c_embedded, is_c_embedded_in_sylow, is_complemented
from .group import PermGroup, SubgroupRef
from .lattice import all_subgroups, cyclic_subgroups_of_order, frattini, normal_subgroups
from .structure import (FormationTag, exponent, is_minimal_non_p_supersolvable,
                        is_p_nilpotent, is_p_solvable, is_p_supersolvable,
                        is_quaternion_free, omega, omega_star, p_part,
                        prime_divisors, residual, sylow_subgroup)

VARIANTS = ("A", "B", "Q9")

LEMMA_CHECKS = ("minimal_nonss_residual", "product_cover_forces_whole",
                "subgroup_residual_monotone", "ss_nilpotent_normalizer",
                "residual_sylow_identity")


# ---------------------------------------------------------------------------
# report types


@dataclass
class ConditionReport:
    gid: str
    order: int
    p: int
    variant: str
    cond1: bool
    cond2: bool | None  # None when short-circuited away by a false cond1
    conclusion: bool
    witness: dict | None = None
    ms: float = 0.0
    refs: dict | None = field(default=None, repr=False, compare=False)

    def to_record(self) -> dict:
        return {
            "record": "condition", "id": self.gid, "order": self.order,
            "p": self.p, "variant": self.variant, "cond1": self.cond1,
            "cond2": self.cond2, "conclusion": self.conclusion,
            "witness": self.witness,
        }


@dataclass
class Verdict:
    gid: str
    order: int
    p: int
    check: str
    status: str  # "pass" | "violation" | "not-applicable"
    detail: str = ""
    report: ConditionReport | None = None
    witness: dict | None = None

    def to_record(self) -> dict:
        rec = {
            "record": "check", "id": self.gid, "order": self.order,
            "p": self.p, "check": self.check, "status": self.status,
            "detail": self.detail,
            "witness": self.witness if self.witness is not None
            else (self.report.witness if self.report else None),
        }
        if self.report is not None:
            rec["cond1"] = self.report.cond1
            rec["cond2"] = self.report.cond2
            rec["conclusion"] = self.report.conclusion
        return rec


def parse_record(rec: dict):
    """Rebuild a report object from its to_record dict (round-trips)."""
    if rec.get("record") == "condition":
        return ConditionReport(rec["id"], rec["order"], rec["p"], rec["variant"],
                               rec["cond1"], rec["cond2"], rec["conclusion"],
                               rec.get("witness"))
    if rec.get("record") == "check":
        report = None
        if "cond1" in rec:
            report = ConditionReport(rec["id"], rec["order"], rec["p"], "",
                                     rec["cond1"], rec["cond2"], rec["conclusion"],
                                     rec.get("witness"))
        return Verdict(rec["id"], rec["order"], rec["p"], rec["check"],
                       rec["status"], rec.get("detail", ""), report,
                       rec.get("witness"))
    raise ValueError(f"unknown record kind {rec.get('record')!r}")


@dataclass
class SweepResult:
    descriptor: dict
    reports: list
    counterexamples: list
    skipped: list

    @property
    def totals(self) -> dict:
        return {"reports": len(self.reports),
                "counterexamples": len(self.counterexamples),
                "skipped": len(self.skipped)}


# ---------------------------------------------------------------------------
# condition evaluation


def _unique_sylow_conjugators(G: PermGroup, P: SubgroupRef, N: SubgroupRef):
    """Non-identity coset representatives of N_G(P), one per distinct P^x."""
    seen = set()
    for x in G.right_transversal(N)[1:]:
        Px = P.conjugate(x)
        key = Px.indices
        if key in seen:
            continue
        seen.add(key)
        yield x, Px


def _cond2_embedding(G: PermGroup, p: int, P: SubgroupRef, N: SubgroupRef,
                     variant: str, use_fast_paths: bool):
    """The embedding condition over all distinct P^x, with witnesses."""
    R = residual(G, FormationTag.p_supersolvable(p))
    if R.order == 1 or R.order % p:
        return True, None, None
    for x, Px in _unique_sylow_conjugators(G, P, N):
        D = P.intersection(Px, R)
        if D.order == 1:
            continue
        targets = [(H, "order-p") for H in cyclic_subgroups_of_order(D, p)]
        if p == 2 and D.order >= 8 and not is_quaternion_free(D):
            targets += [(H, "cyclic-4") for H in cyclic_subgroups_of_order(D, 4)]
        for H, kind in targets:
            if variant == "Q9":
                rep = is_c_embedded_in_sylow(P, H, use_fast_paths=use_fast_paths)
            else:
                rep = is_c_embedded(G, P, H, use_fast_paths=use_fast_paths)
            if not rep.verdict:
                witness = {
                    "x": x.cycle_string(),
                    "D_order": D.order,
                    "D_gens": [g.cycle_string() for g in D.generators],
                    "H_kind": kind,
                    "H_gens": [g.cycle_string() for g in H.generators],
                }
                return False, witness, {"x": x, "D": D, "H": H, "P": P}
    return True, None, None


def condition_set(G: PermGroup, p: int, variant: str, *, gid: str = "G",
                  sylow: SubgroupRef | None = None,
                  use_fast_paths: bool = True) -> ConditionReport:
    """Evaluate cond1, cond2 and the conclusion for one group and prime.

    cond2 is skipped (reported as None) when cond1 already fails, and is
    vacuously true when the p-supersolvable residual misses P entirely.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    t0 = time.perf_counter()
    if G.order % p:
        return ConditionReport(gid, G.order, p, variant, True, True, True,
                               ms=(time.perf_counter() - t0) * 1000)
    P = sylow if sylow is not None else sylow_subgroup(G, p)
    N = G.normalizer(P)
    if variant == "A":
        cond1 = is_p_supersolvable(N, p)
        conclusion = is_p_supersolvable(G, p)
    else:
        cond1 = is_p_nilpotent(N, p)
        conclusion = is_p_nilpotent(G, p)
    cond2 = witness = refs = None
    if cond1:
        cond2, witness, refs = _cond2_embedding(G, p, P, N, variant, use_fast_paths)
    return ConditionReport(gid, G.order, p, variant, cond1, cond2, conclusion,
                           witness, (time.perf_counter() - t0) * 1000, refs)


def verify_biconditional(G: PermGroup, p: int, which: str, *, gid: str = "G",
                         sylow: SubgroupRef | None = None,
                         use_fast_paths: bool = True) -> Verdict:
    """Check (cond1 and cond2) <-> conclusion for variant A or B.

    Variant A only claims the equivalence on p-solvable groups, so other
    groups are reported not-applicable rather than silently passed.
    """
    if which not in ("A", "B"):
        raise ValueError("which must be 'A' or 'B'")
    check = f"biconditional-{which}"
    if which == "A" and G.order % p == 0 and not is_p_solvable(G, p):
        return Verdict(gid, G.order, p, check, "not-applicable",
                       "group is not p-solvable")
    rep = condition_set(G, p, which, gid=gid, sylow=sylow,
                        use_fast_paths=use_fast_paths)
    lhs = bool(rep.cond1) and bool(rep.cond2)
    if lhs == rep.conclusion:
        return Verdict(gid, G.order, p, check, "pass", report=rep)
    return Verdict(gid, G.order, p, check, "violation",
                   f"conditions={lhs} but conclusion={rep.conclusion}", rep)


def verify_asaad(G: PermGroup, p: int, *, gid: str = "G",
                 sylow: SubgroupRef | None = None) -> Verdict:
    """Asaad's equivalence: p-nilpotent iff N_G(P) is p-nilpotent and
    Omega_1 of every nilpotent-residual Sylow intersection is central in P.

    For p = 2 the equivalence is only claimed for quaternion-free P, so
    other 2-groups report not-applicable.
    """
    check = "asaad"
    t0 = time.perf_counter()
    if G.order % p:
        rep = ConditionReport(gid, G.order, p, "asaad", True, True, True,
                              ms=(time.perf_counter() - t0) * 1000)
        return Verdict(gid, G.order, p, check, "pass", report=rep)
    P = sylow if sylow is not None else sylow_subgroup(G, p)
    if p == 2 and not is_quaternion_free(P):
        return Verdict(gid, G.order, p, check, "not-applicable",
                       "Sylow 2-subgroup is not quaternion-free")
    N = G.normalizer(P)
    cond1 = is_p_nilpotent(N, p)
    conclusion = is_p_nilpotent(G, p)
    cond2 = witness = refs = None
    if cond1:
        cond2 = True
        R = residual(G, FormationTag.nilpotent())
        if R.order > 1 and R.order % p == 0:
            zP = _center_within(G, P)
            for x, Px in _unique_sylow_conjugators(G, P, N):
                D = P.intersection(Px, R)
                if D.order == 1:
                    continue
                om = omega(D, p, 1)
                if not om.indices <= zP:
                    cond2 = False
                    witness = {
                        "x": x.cycle_string(),
                        "D_order": D.order,
                        "omega_gens": [g.cycle_string() for g in om.generators],
                    }
                    refs = {"x": x, "D": D, "omega": om, "P": P}
                    break
    rep = ConditionReport(gid, G.order, p, "asaad", cond1, cond2, conclusion,
                          witness, (time.perf_counter() - t0) * 1000, refs)
    lhs = bool(cond1) and bool(cond2)
    if lhs == conclusion:
        return Verdict(gid, G.order, p, check, "pass", report=rep)
    return Verdict(gid, G.order, p, check, "violation",
                   f"conditions={lhs} but conclusion={conclusion}", rep)


# ---------------------------------------------------------------------------
# classical p-nilpotency criteria (sufficiency direction only)

CRITERIA = ("burnside", "laffey", "omega_derived_central",
            "omega1_quaternion_free", "minimal_complemented")


def classical_criteria(G: PermGroup, p: int, *, gid: str = "G") -> list[Verdict]:
    """Five sufficient criteria for p-nilpotency.

    burnside:                P <= Z(N_G(P))
    laffey:                  Omega(P) <= Z(P) and N_G(P) p-nilpotent
    omega_derived_central:   Omega(P n G') <= Z(N_G(P))
    omega1_quaternion_free:  p = 2, Omega_1(P n G') <= Z(P), P quaternion-free,
                             N_G(P) 2-nilpotent
    minimal_complemented:    every order-p subgroup of P n (p-nilpotent
                             residual) complemented in P, N_G(P) p-nilpotent

    Omega(X) means Omega_1 for odd p and Omega_2 for p = 2.  When a
    hypothesis holds the group must be p-nilpotent; a violation record
    signals a bug.  Failed hypotheses report not-applicable.
    """
    P = sylow_subgroup(G, p)
    N = G.normalizer(P)
    zP = _center_within(G, P)
    zN = _center_within(G, N)
    n_pnilp = is_p_nilpotent(N, p)
    conclusion = is_p_nilpotent(G, p)
    out = []

    def emit(name: str, hypothesis: bool, detail: str = ""):
        if not hypothesis:
            status = "not-applicable"
        elif conclusion:
            status = "pass"
        else:
            status = "violation"
            detail = detail or "hypothesis holds but group is not p-nilpotent"
        out.append(Verdict(gid, G.order, p, name, status, detail))

    emit("burnside", P.indices <= zN)
    emit("laffey", omega_star(P, p).indices <= zP and n_pnilp)
    T1 = P.intersection(G.derived_subgroup())
    emit("omega_derived_central", omega_star(T1, p).indices <= zN)
    if p == 2:
        emit("omega1_quaternion_free",
             omega(T1, 2, 1).indices <= zP and is_quaternion_free(P) and n_pnilp)
    else:
        out.append(Verdict(gid, G.order, p, "omega1_quaternion_free",
                           "not-applicable", "criterion is specific to p = 2"))
    hyp = n_pnilp
    if hyp:
        T2 = P.intersection(residual(G, FormationTag.p_nilpotent(p)))
        Pg = P.as_group()
        for H in cyclic_subgroups_of_order(T2, p):
            if is_complemented(Pg, Pg.subgroup(list(H.generators))) is None:
                hyp = False
                break
    emit("minimal_complemented", hyp)
    return out


# ---------------------------------------------------------------------------
# lemma statement suites


def _indices_in_parent(G: PermGroup, sub: SubgroupRef) -> frozenset[int]:
    """Element indices of a subgroup of some standalone view, read in G."""
    ctx = G._context()
    return frozenset(ctx.index[q.images] for q in sub.element_perms())


def _residual_shape_check(G: PermGroup, p: int, R: SubgroupRef) -> str:
    if R.order != p_part(R.order, p):
        return "residual is not a p-group"
    expo = exponent(R)
    if p % 2 and expo != p:
        return f"residual exponent {expo} != {p}"
    if p == 2 and expo > 4:
        return f"residual exponent {expo} > 4"
    Rg = R.as_group()
    phi_idx = _indices_in_parent(G, frattini(Rg))
    phiG = G.subgroup_from_indices(phi_idx)
    if not phiG.is_normal():
        return "Frattini subgroup of residual is not normal in the group"
    if phi_idx == R.indices:
        return "Frattini subgroup equals the residual"
    between = [M for M in normal_subgroups(G) if phi_idx < M.indices < R.indices]
    if between:
        return "residual over its Frattini subgroup is not a chief factor"
    return ""


def _product_cover_check(G: PermGroup, R: SubgroupRef) -> str:
    lat = all_subgroups(G)
    if not lat.complete:
        raise CapExceeded("subgroup lattice is incomplete")
    Rg = R.as_group()
    for H_view in all_subgroups(Rg).subgroups:
        if H_view.order == R.order:
            continue
        h_idx = _indices_in_parent(G, H_view)
        h_order = len(h_idx)
        for B in lat.subgroups:
            if h_order * B.order == G.order * len(h_idx & B.indices):
                if B.order != G.order:
                    return (f"proper subgroup of order {h_order} has a "
                            f"product cover with |B| = {B.order} < |G|")
    return ""


def _random_subgroups(G: PermGroup, limit: int, seed: str):
    rng = random.Random(seed)
    ctx = G._context()
    seen = set()
    out = []
    for _ in range(limit):
        k = rng.randint(1, 3)
        gens = [rng.randrange(ctx.n) for _ in range(k)]
        idxs = ctx.close(gens)
        if idxs in seen:
            continue
        seen.add(idxs)
        out.append(G.subgroup_from_indices(idxs))
    return out


def lemma_suite(entries: list[CatalogEntry], primes: list[int] | None = None, *,
                max_order: int | None = None, caps: Caps | None = None,
                sample_limit: int = 200, rng_seed: int = 0) -> SweepResult:
    """Statement checks over a catalog slice.

    Per group and prime: the minimal-non-p-supersolvable residual shape
    (p-group of bounded exponent whose Frattini quotient is a chief factor),
    the product-cover rigidity of that residual's proper subgroups, residual
    monotonicity under passage to sampled subgroups, the p-supersolvable +
    p-nilpotent-normalizer implication, and the Sylow-intersection identity
    between the nilpotent and p-nilpotent residuals.
    """
    reports: list[Verdict] = []
    skipped: list[dict] = []
    for entry in entries:
        try:
            G = entry.group(caps)
            if max_order is not None and G.order > max_order:
                continue
            ps = [p for p in (primes or prime_divisors(G.order))
                  if G.order % p == 0]
            samples = _random_subgroups(G, sample_limit,
                                        f"{rng_seed}:{entry.id}") if G.order > 1 else []
            for p in ps:
                gid = entry.id
                minimal = (is_p_solvable(G, p)
                           and is_minimal_non_p_supersolvable(G, p))
                if minimal:
                    R = residual(G, FormationTag.p_supersolvable(p))
                    msg = _residual_shape_check(G, p, R)
                    reports.append(Verdict(gid, G.order, p, "minimal_nonss_residual",
                                           "violation" if msg else "pass", msg))
                    msg = _product_cover_check(G, R)
                    reports.append(Verdict(gid, G.order, p, "product_cover_forces_whole",
                                           "violation" if msg else "pass", msg))
                else:
                    for name in ("minimal_nonss_residual", "product_cover_forces_whole"):
                        reports.append(Verdict(gid, G.order, p, name, "not-applicable",
                                               "group is not p-solvable minimal non-p-supersolvable"))

                # residual monotonicity on sampled subgroups
                RG = residual(G, FormationTag.p_supersolvable(p))
                bad = ""
                for L in samples:
                    Lg = L.as_group()
                    if is_p_supersolvable(Lg, p):
                        continue  # trivial residual
                    RL = residual(Lg, FormationTag.p_supersolvable(p))
                    if not _indices_in_parent(G, RL) <= RG.indices:
                        bad = (f"subgroup of order {L.order} has residual "
                               f"escaping the group residual")
                        break
                reports.append(Verdict(gid, G.order, p, "subgroup_residual_monotone",
                                       "violation" if bad else "pass", bad))

                # p-supersolvable with p-nilpotent normalizer forces p-nilpotent
                P = sylow_subgroup(G, p)
                N = G.normalizer(P)
                if is_p_supersolvable(G, p) and is_p_nilpotent(N, p):
                    ok = is_p_nilpotent(G, p)
                    reports.append(Verdict(gid, G.order, p, "ss_nilpotent_normalizer",
                                           "pass" if ok else "violation",
                                           "" if ok else "group is not p-nilpotent"))
                else:
                    reports.append(Verdict(gid, G.order, p, "ss_nilpotent_normalizer",
                                           "not-applicable", "hypotheses do not hold"))

                # P n (nilpotent residual) = P n (p-nilpotent residual)
                lhs = P.indices & residual(G, FormationTag.nilpotent()).indices
                rhs = P.indices & residual(G, FormationTag.p_nilpotent(p)).indices
                reports.append(Verdict(gid, G.order, p, "residual_sylow_identity",
                                       "pass" if lhs == rhs else "violation",
                                       "" if lhs == rhs else
                                       f"intersection orders {len(lhs)} != {len(rhs)}"))
        except CapExceeded as exc:
            skipped.append({"id": entry.id, "reason": str(exc)})
    reports.sort(key=lambda v: (v.order, v.gid, v.p, v.check))
    return SweepResult({"suite": "lemmas", "max_order": max_order,
                        "sample_limit": sample_limit},
                       reports, [v for v in reports if v.status == "violation"],
                       skipped)


# ---------------------------------------------------------------------------
# counterexample search


def q9_search(entries: list[CatalogEntry], max_order: int,
              primes: list[int] | None = None, *,
              caps: Caps | None = None) -> SweepResult:
    """Search for a group where the in-Sylow variant of the p-nilpotency
    conditions holds at an odd prime without the group being p-nilpotent.

    Any candidate found by the fast embedding paths is re-verified with the
    exhaustive general search before being reported.  Groups that blow a
    cap are listed as skipped, never dropped silently.
    """
    if primes is not None and any(p == 2 or p < 2 for p in primes):
        raise ValueError("the search is over odd primes")
    reports: list[ConditionReport] = []
    counterexamples: list[dict] = []
    skipped: list[dict] = []
    for entry in entries:
        try:
            G = entry.group(caps)
            if G.order > max_order:
                continue
            ps = [p for p in prime_divisors(G.order)
                  if p != 2 and (primes is None or p in primes)]
            for p in ps:
                rep = condition_set(G, p, "Q9", gid=entry.id)
                reports.append(rep)
                if rep.cond1 and rep.cond2 and not rep.conclusion:
                    confirm = condition_set(G, p, "Q9", gid=entry.id,
                                            use_fast_paths=False)
                    if not (confirm.cond1 and confirm.cond2
                            and not confirm.conclusion):
                        raise AssertionError(
                            f"fast/slow embedding paths disagree on {entry.id} p={p}")
                    counterexamples.append({
                        "id": entry.id, "order": G.order, "p": p,
                        "entry": {"degree": entry.degree, "gens": entry.gens},
                        "report": rep.to_record(),
                    })
        except CapExceeded as exc:
            skipped.append({"id": entry.id, "reason": str(exc)})
    reports.sort(key=lambda r: (r.order, r.gid, r.p))
    return SweepResult({"suite": "q9", "max_order": max_order,
                        "primes": primes or "all-odd"},
                       reports, counterexamples, skipped)
