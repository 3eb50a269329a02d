"""Permutation groups over a fixed degree.

A deterministic stabilizer chain (Schreier-Sims, base points chosen as the
smallest moved points) backs order and membership queries.  Groups small
enough to enumerate get a sorted element list with index-level operations;
subgroups of a fixed parent are ``SubgroupRef`` values carrying generators
plus a cached element-index set, so equality, intersections and containment
are plain set work on integers.
"""

from __future__ import annotations

from math import lcm

import numpy as np

from .caps import Caps, DEFAULT_CAPS, CapExceeded
from .perm import Permutation


# ---------------------------------------------------------------------------
# stabilizer chain


def _orbit_transversal(point: int, gens: list[Permutation], degree: int):
    """BFS orbit of ``point``; transversal maps delta -> u with u(point) = delta."""
    ident = Permutation.identity(degree)
    trans = {point: ident}
    queue = [point]
    while queue:
        delta = queue.pop(0)
        u = trans[delta]
        for s in gens:
            gamma = s.images[delta]
            if gamma not in trans:
                trans[gamma] = u * s
                queue.append(gamma)
    return trans


class _Chain:
    """Deterministic Schreier-Sims stabilizer chain."""

    def __init__(self, degree: int, gens: list[Permutation]):
        self.degree = degree
        self.base: list[int] = []
        self.level_gens: list[list[Permutation]] = []
        self.transversals: list[dict[int, Permutation]] = []
        for g in gens:
            if not g.is_identity:
                self._insert_gen(g, 0)
        i = len(self.base) - 1
        while i >= 0:
            j = self._close_level(i)
            i = i - 1 if j is None else j

    def _insert_gen(self, g: Permutation, floor: int) -> int:
        # g belongs to every level whose base prefix it fixes
        j = 0
        while j < len(self.base) and g.images[self.base[j]] == self.base[j]:
            j += 1
        if j == len(self.base):
            self.base.append(min(g.moved_points()))
            self.level_gens.append([])
            self.transversals.append({})
        for level in range(floor, j + 1):
            self.level_gens[level].append(g)
        return j

    def _sift(self, g: Permutation, start: int) -> tuple[Permutation, int]:
        h = g
        for i in range(start, len(self.base)):
            delta = h.images[self.base[i]]
            u = self.transversals[i].get(delta)
            if u is None:
                return h, i
            h = h * u.inverse()
        return h, len(self.base)

    def _close_level(self, i: int):
        beta = self.base[i]
        gens = self.level_gens[i]
        trans = _orbit_transversal(beta, gens, self.degree)
        self.transversals[i] = trans
        for delta in sorted(trans):
            u = trans[delta]
            for s in gens:
                u2 = trans[s.images[delta]]
                schreier = u * s * u2.inverse()
                if schreier.is_identity:
                    continue
                residue, j = self._sift(schreier, i + 1)
                if residue.is_identity:
                    continue
                if j == len(self.base):
                    self.base.append(min(residue.moved_points()))
                    self.level_gens.append([])
                    self.transversals.append({})
                for level in range(i + 1, j + 1):
                    self.level_gens[level].append(residue)
                return j
        return None

    def order(self) -> int:
        n = 1
        for trans in self.transversals:
            n *= len(trans)
        return n

    def contains(self, g: Permutation) -> bool:
        residue, _ = self._sift(g, 0)
        return residue.is_identity


# ---------------------------------------------------------------------------
# element-level context


class _ElementContext:
    """Sorted element list of an enumerated group plus index-level helpers."""

    __slots__ = ("perms", "index", "inv", "orders", "table_cap", "_table")

    def __init__(self, perms: list[Permutation], table_cap: int):
        self.perms = perms
        self.index = {p.images: i for i, p in enumerate(perms)}
        self.inv = [self.index[p.inverse().images] for p in perms]
        self.orders = [p.order() for p in perms]
        self.table_cap = table_cap
        self._table = None

    @property
    def n(self) -> int:
        return len(self.perms)

    def table(self):
        """Full multiplication table, or None when the group is too large."""
        if self._table is None and self.n <= self.table_cap:
            mat = np.array([p.images for p in self.perms], dtype=np.int32)
            row_index = {mat[i].tobytes(): i for i in range(self.n)}
            table = np.empty((self.n, self.n), dtype=np.int32)
            for a in range(self.n):
                rows = mat[:, mat[a]]  # rows[b] = images of perms[a] * perms[b]
                table[a] = [row_index[rows[b].tobytes()] for b in range(self.n)]
            self._table = table
        return self._table

    def mul(self, a: int, b: int) -> int:
        t = self._table
        if t is not None:
            return int(t[a, b])
        return self.index[(self.perms[a] * self.perms[b]).images]

    def conj(self, e: int, x: int) -> int:
        """Index of x^-1 * e * x."""
        return self.mul(self.mul(self.inv[x], e), x)

    def close(self, gen_indices) -> frozenset[int]:
        """Subgroup generated by the given element indices."""
        gens = sorted(set(int(g) for g in gen_indices) - {0})
        if not gens:
            return frozenset((0,))
        t = self.table()
        if t is not None:
            member = np.zeros(self.n, dtype=bool)
            member[0] = True
            member[gens] = True
            garr = np.array(gens, dtype=np.int32)
            frontier = garr
            while frontier.size:
                prods = np.unique(t[np.ix_(frontier, garr)].ravel())
                new = prods[~member[prods]]
                member[new] = True
                frontier = new
            return frozenset(int(i) for i in np.flatnonzero(member))
        member = {0, *gens}
        frontier = list(gens)
        while frontier:
            new = []
            for a in frontier:
                pa = self.perms[a]
                for g in gens:
                    k = self.index[(pa * self.perms[g]).images]
                    if k not in member:
                        member.add(k)
                        new.append(k)
            frontier = new
        return frozenset(member)

    def generating_indices(self, indices) -> list[int]:
        """Small generating set for a subgroup given as an element-index set."""
        want = frozenset(indices)
        span = frozenset((0,))
        gens: list[int] = []
        for e in sorted(want):
            if e not in span:
                gens.append(e)
                span = self.close(gens)
                if span == want:
                    break
        return gens


# ---------------------------------------------------------------------------
# groups


class PermGroup:
    """Group generated by permutations of one degree.  Immutable."""

    def __init__(self, degree: int, generators, caps: Caps | None = None):
        caps = caps or DEFAULT_CAPS
        gens = []
        for g in generators:
            if not isinstance(g, Permutation):
                g = Permutation(g)
            if g.degree != degree:
                raise ValueError(f"generator degree {g.degree} != group degree {degree}")
            if not g.is_identity:
                gens.append(g)
        if degree < 1:
            raise ValueError("degree must be positive")
        self.degree = degree
        self.generators: tuple[Permutation, ...] = tuple(gens)
        self.caps = caps
        self._chain = _Chain(degree, gens)
        self.order = self._chain.order()
        if self.order > caps.bsgs_order_cap:
            raise CapExceeded(f"group order {self.order} exceeds cap {caps.bsgs_order_cap}")
        self._ctx: _ElementContext | None = None
        self._cache: dict = {}

    # -- basic queries ------------------------------------------------------

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order})"

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(self._chain.base)

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            raise ValueError(f"degree mismatch: {g.degree} vs {self.degree}")
        return self._chain.contains(g)

    def __contains__(self, g: Permutation) -> bool:
        return self.contains(g)

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for i, a in enumerate(gens) for b in gens[i + 1:])

    def _context(self) -> _ElementContext:
        if self._ctx is None:
            if self.order > self.caps.element_cap:
                raise CapExceeded(
                    f"group order {self.order} exceeds element cap {self.caps.element_cap}")
            seen = {self.identity().images}
            frontier = [self.identity()]
            while frontier:
                new = []
                for p in frontier:
                    for g in self.generators:
                        q = p * g
                        if q.images not in seen:
                            seen.add(q.images)
                            new.append(q)
                frontier = new
            perms = sorted(Permutation(im) for im in seen)
            assert len(perms) == self.order and perms[0].is_identity
            self._ctx = _ElementContext(perms, self.caps.table_cap)
        return self._ctx

    def elements(self) -> list[Permutation]:
        """All elements, sorted by image tuple (identity first)."""
        return self._context().perms

    def element_orders(self) -> list[int]:
        return self._context().orders

    def exponent(self) -> int:
        return lcm(*self._context().orders)

    def index_of(self, g: Permutation) -> int:
        idx = self._context().index.get(g.images)
        if idx is None:
            raise ValueError("element outside group")
        return idx

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    # -- subgroup constructors ----------------------------------------------

    def subgroup(self, gens, check: bool = True) -> "SubgroupRef":
        gens = [g if isinstance(g, Permutation) else Permutation(g) for g in gens]
        if check:
            for g in gens:
                if not self.contains(g):
                    raise ValueError(f"element outside parent group: {g!r}")
        return SubgroupRef(self, [g for g in gens if not g.is_identity])

    def subgroup_from_indices(self, indices) -> "SubgroupRef":
        ctx = self._context()
        idxs = frozenset(int(i) for i in indices)
        gens = [ctx.perms[i] for i in ctx.generating_indices(idxs)]
        return SubgroupRef(self, gens, indices=idxs)

    def trivial_subgroup(self) -> "SubgroupRef":
        return SubgroupRef(self, [], indices=frozenset((0,)) if self._ctx else None, order=1)

    def whole_subgroup(self) -> "SubgroupRef":
        return SubgroupRef(self, list(self.generators), order=self.order)

    # -- element-scan operators ---------------------------------------------

    def center(self) -> "SubgroupRef":
        def compute():
            ctx = self._context()
            gen_idx = [ctx.index[g.images] for g in self.generators]
            central = [e for e in range(ctx.n)
                       if all(ctx.mul(e, g) == ctx.mul(g, e) for g in gen_idx)]
            return self.subgroup_from_indices(central)
        return self.cached(("center",), compute)

    def centralizer(self, target) -> "SubgroupRef":
        """Elements commuting with every member of ``target`` (perms or ref)."""
        ctx = self._context()
        if isinstance(target, SubgroupRef):
            perms = target.generators
        else:
            perms = list(target)
        tgt = [ctx.index[p.images] for p in perms]
        good = [e for e in range(ctx.n)
                if all(ctx.mul(e, t) == ctx.mul(t, e) for t in tgt)]
        return self.subgroup_from_indices(good)

    def normalizer(self, H: "SubgroupRef") -> "SubgroupRef":
        ctx = self._context()
        hset = H.indices
        hgens = [ctx.index[g.images] for g in H.generators]
        good = [e for e in range(ctx.n)
                if all(ctx.conj(h, e) in hset for h in hgens)]
        return self.subgroup_from_indices(good)

    def conjugacy_class_index_sets(self) -> list[tuple[int, ...]]:
        """Conjugacy classes as sorted index tuples, seeds in canonical order."""
        def compute():
            ctx = self._context()
            gen_idx = [ctx.index[g.images] for g in self.generators]
            assigned = [False] * ctx.n
            classes = []
            for seed in range(ctx.n):
                if assigned[seed]:
                    continue
                orbit = {seed}
                queue = [seed]
                assigned[seed] = True
                while queue:
                    e = queue.pop(0)
                    for g in gen_idx:
                        c = ctx.conj(e, g)
                        if c not in orbit:
                            orbit.add(c)
                            assigned[c] = True
                            queue.append(c)
                classes.append(tuple(sorted(orbit)))
            return classes
        return self.cached(("classes",), compute)

    def conjugacy_classes(self) -> list[list[Permutation]]:
        ctx = self._context()
        return [[ctx.perms[i] for i in cls] for cls in self.conjugacy_class_index_sets()]

    # -- closures -------------------------------------------------------------

    def normal_closure(self, seed) -> "SubgroupRef":
        """Smallest normal subgroup containing the given permutations."""
        if isinstance(seed, SubgroupRef):
            seed = seed.generators
        gens = []
        for g in seed:
            if not self.contains(g):
                raise ValueError(f"element outside parent group: {g!r}")
            if not g.is_identity and g not in gens:
                gens.append(g)
        chain = _Chain(self.degree, gens)
        queue = list(gens)
        while queue:
            x = queue.pop(0)
            for g in self.generators:
                y = x.conjugated_by(g)
                if not chain.contains(y):
                    gens.append(y)
                    queue.append(y)
                    chain = _Chain(self.degree, gens)
        return SubgroupRef(self, gens, order=chain.order())

    def derived_subgroup(self) -> "SubgroupRef":
        def compute():
            comms = []
            for i, a in enumerate(self.generators):
                for b in self.generators[i + 1:]:
                    c = a.commutator_with(b)
                    if not c.is_identity and c not in comms:
                        comms.append(c)
            return self.normal_closure(comms)
        return self.cached(("derived",), compute)

    # -- cosets and quotients --------------------------------------------------

    def _coset_decomposition(self, H: "SubgroupRef"):
        """Right cosets of H: (rep indices, coset id per element).  Identity first."""
        ctx = self._context()
        hidx = sorted(H.indices)
        coset_of = [-1] * ctx.n
        reps: list[int] = []
        for e in range(ctx.n):
            if coset_of[e] == -1:
                cid = len(reps)
                reps.append(e)
                for h in hidx:
                    coset_of[ctx.mul(h, e)] = cid
        return reps, coset_of

    def right_transversal(self, H: "SubgroupRef") -> list[Permutation]:
        if H.parent is not self:
            raise ValueError("subgroup belongs to a different parent")
        ctx = self._context()
        reps, _ = self._coset_decomposition(H)
        return [ctx.perms[r] for r in reps]

    def quotient(self, N: "SubgroupRef") -> "QuotientHandle":
        if N.parent is not self:
            raise ValueError("subgroup belongs to a different parent")
        if not N.is_normal():
            raise ValueError("subgroup is not normal in its parent")
        index = self.order // N.order
        if index > self.caps.quotient_degree_cap:
            raise CapExceeded(
                f"quotient degree {index} exceeds cap {self.caps.quotient_degree_cap}")
        return QuotientHandle(self, N)

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other


class SubgroupRef:
    """Subgroup of a fixed parent group.

    Equality and hashing use the element-index set inside the parent, so two
    refs with different generating sets for the same subgroup compare equal.
    """

    __slots__ = ("parent", "generators", "_indices", "_order", "_group")

    def __init__(self, parent: PermGroup, generators, indices=None, order=None):
        self.parent = parent
        self.generators: tuple[Permutation, ...] = tuple(
            g for g in generators if not g.is_identity)
        self._indices = frozenset(indices) if indices is not None else None
        self._order = order
        self._group: PermGroup | None = None

    @property
    def degree(self) -> int:
        return self.parent.degree

    @property
    def indices(self) -> frozenset[int]:
        if self._indices is None:
            ctx = self.parent._context()
            self._indices = ctx.close(ctx.index[g.images] for g in self.generators)
        return self._indices

    @property
    def order(self) -> int:
        if self._order is None:
            if self.parent.order <= self.parent.caps.element_cap:
                self._order = len(self.indices)
            else:
                self._order = _Chain(self.degree, list(self.generators)).order()
        return self._order

    def sorted_indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.indices))

    def element_perms(self) -> list[Permutation]:
        ctx = self.parent._context()
        return [ctx.perms[i] for i in self.sorted_indices()]

    def element_orders(self) -> list[int]:
        ctx = self.parent._context()
        return [ctx.orders[i] for i in self.sorted_indices()]

    def contains(self, g: Permutation) -> bool:
        ctx = self.parent._context()
        idx = ctx.index.get(g.images)
        return idx is not None and idx in self.indices

    def __contains__(self, g: Permutation) -> bool:
        return self.contains(g)

    def contains_ref(self, other: "SubgroupRef") -> bool:
        return other.indices <= self.indices

    def as_group(self) -> PermGroup:
        """Standalone PermGroup view on the same points (cached)."""
        if self._group is None:
            self._group = PermGroup(self.degree, list(self.generators), caps=self.parent.caps)
        return self._group

    def conjugate(self, x: Permutation) -> "SubgroupRef":
        if not self.parent.contains(x):
            raise ValueError("conjugating element outside parent group")
        return SubgroupRef(self.parent, [g.conjugated_by(x) for g in self.generators],
                           order=self._order)

    def is_normal(self) -> bool:
        idx = self.indices
        ctx = self.parent._context()
        for g in self.parent.generators:
            for h in self.generators:
                if ctx.index[h.conjugated_by(g).images] not in idx:
                    return False
        return True

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for i, a in enumerate(gens) for b in gens[i + 1:])

    def intersection(self, *others: "SubgroupRef") -> "SubgroupRef":
        idx = self.indices
        for o in others:
            if o.parent is not self.parent:
                raise ValueError("intersection across different parents")
            idx = idx & o.indices
        return self.parent.subgroup_from_indices(idx)

    def join(self, other: "SubgroupRef") -> "SubgroupRef":
        if other.parent is not self.parent:
            raise ValueError("join across different parents")
        if other.indices <= self.indices:
            return self
        if self.indices <= other.indices:
            return other
        ctx = self.parent._context()
        gens = [ctx.index[g.images] for g in self.generators + other.generators]
        return self.parent.subgroup_from_indices(ctx.close(gens))

    def key(self) -> tuple[int, tuple[int, ...]]:
        """Canonical sort key: (order, sorted element indices)."""
        return (len(self.indices), self.sorted_indices())

    def __eq__(self, other):
        if not isinstance(other, SubgroupRef):
            return NotImplemented
        return self.parent is other.parent and self.indices == other.indices

    def __hash__(self):
        return hash((id(self.parent), self.indices))

    def __repr__(self):
        return f"SubgroupRef(order={self.order}, degree={self.degree})"


class QuotientHandle:
    """Quotient G/N realized as the action of G on right cosets of N."""

    def __init__(self, source: PermGroup, kernel: SubgroupRef):
        self.source = source
        self.kernel = kernel
        ctx = source._context()
        reps, coset_of = source._coset_decomposition(kernel)
        self._rep_indices = reps
        self._coset_of = coset_of
        gen_images = []
        for g in source.generators:
            gi = ctx.index[g.images]
            gen_images.append([coset_of[ctx.mul(r, gi)] for r in reps])
        self.image = PermGroup(len(reps), [Permutation(im) for im in gen_images],
                               caps=source.caps)
        if self.image.order * kernel.order != source.order:
            raise AssertionError("coset action is not faithful for the quotient")

    @property
    def index(self) -> int:
        return len(self._rep_indices)

    def project(self, g: Permutation) -> Permutation:
        ctx = self.source._context()
        gi = ctx.index.get(g.images)
        if gi is None:
            raise ValueError("element outside source group")
        return Permutation(self._coset_of[ctx.mul(r, gi)] for r in self._rep_indices)

    def project_subgroup(self, H: SubgroupRef) -> SubgroupRef:
        gens = [self.project(g) for g in H.generators]
        return self.image.subgroup(gens, check=False)

    def lift(self, q: Permutation) -> Permutation:
        """Some preimage of an image-group element (coset representative)."""
        if not self.image.contains(q):
            raise ValueError("element outside quotient image")
        ctx = self.source._context()
        return ctx.perms[self._rep_indices[q.images[0]]]

    def preimage(self, M: SubgroupRef) -> SubgroupRef:
        """Full preimage in the source of a subgroup of the image."""
        if M.parent is not self.image:
            raise ValueError("subgroup does not live in the quotient image")
        gens = list(self.kernel.generators) + [self.lift(g) for g in M.generators]
        return SubgroupRef(self.source, gens, order=M.order * self.kernel.order)


def build_group(degree: int, generators, caps: Caps | None = None) -> PermGroup:
    """Validate generators and build a group with a fresh stabilizer chain."""
    return PermGroup(degree, generators, caps=caps)


def is_quaternion8(G) -> bool:
    """Order 8, non-abelian, exactly one involution."""
    if isinstance(G, SubgroupRef):
        if G.order != 8:
            return False
        orders = G.element_orders()
        return orders.count(2) == 1 and not G.is_abelian()
    if G.order != 8:
        return False
    orders = G.element_orders()
    return orders.count(2) == 1 and not G.is_abelian()
