"""Permutations of {0, ..., n-1} stored as image tuples.

Composition applies the left factor first: ``(p * q)(i) == q(p(i))``.
"""

from __future__ import annotations

from math import lcm


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images):
        imgs = tuple(int(v) for v in images)
        n = len(imgs)
        if n == 0:
            raise ValueError("degree must be positive")
        seen = [False] * n
        for v in imgs:
            if v < 0 or v >= n or seen[v]:
                raise ValueError(f"not a bijection on 0..{n - 1}: {imgs!r}")
            seen[v] = True
        self.images = imgs

    @staticmethod
    def identity(n: int) -> "Permutation":
        if n < 1:
            raise ValueError("degree must be positive")
        return Permutation(range(n))

    @staticmethod
    def from_cycles(n: int, *cycles) -> "Permutation":
        """Build a degree-n permutation from disjoint cycles of points."""
        images = list(range(n))
        for cyc in cycles:
            pts = [int(c) for c in cyc]
            if any(a < 0 or a >= n for a in pts):
                raise ValueError(f"cycle point out of range for degree {n}")
            for a, b in zip(pts, pts[1:] + pts[:1]):
                if images[a] != a:
                    raise ValueError("cycles are not disjoint")
                images[a] = b
        return Permutation(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    @property
    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(self.images) != len(other.images):
            raise ValueError("degree mismatch")
        q = other.images
        return Permutation(q[i] for i in self.images)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, v in enumerate(self.images):
            inv[v] = i
        return Permutation(inv)

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(len(self.images))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugated_by(self, x: "Permutation") -> "Permutation":
        """Return x^-1 * self * x."""
        return x.inverse() * self * x

    def commutator_with(self, other: "Permutation") -> "Permutation":
        return self.inverse() * other.inverse() * self * other

    def order(self) -> int:
        return lcm(*(len(c) for c in self.cycles()))

    def moved_points(self) -> list[int]:
        return [i for i, v in enumerate(self.images) if v != i]

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point."""
        out = []
        seen = [False] * len(self.images)
        for start in range(len(self.images)):
            if seen[start] or self.images[start] == start:
                continue
            cyc = [start]
            seen[start] = True
            nxt = self.images[start]
            while nxt != start:
                cyc.append(nxt)
                seen[nxt] = True
                nxt = self.images[nxt]
            out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cycs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation[{self.cycle_string()}]"
