"""Finite groups given by Cayley tables, their subgroups and endomorphisms.

Elements are the integers ``0 .. order-1``.  Subgroups are stored as frozen
element sets, endomorphisms as image arrays.  Everything is checked
exhaustively at construction, which is affordable at the orders used here.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .core import Certificate, Index

__all__ = [
    "FiniteGroup",
    "FiniteSubgroup",
    "FiniteEndo",
    "FiniteUniverse",
    "closure",
    "endo_from_map",
    "all_subgroups",
    "quotient",
    "NotAHomomorphism",
    "VERIFY_LIMIT",
]

VERIFY_LIMIT = 512


class NotAHomomorphism(ValueError):
    pass


class FiniteGroup:
    """A finite group from its multiplication table."""

    def __init__(self, table: Sequence[Sequence[int]], labels: Sequence | None = None,
                 name: str | None = None):
        arr = np.asarray(table, dtype=np.int64)
        n = arr.shape[0]
        if arr.ndim != 2 or arr.shape != (n, n) or n == 0:
            raise ValueError("Cayley table must be a non-empty square array")
        if arr.min() < 0 or arr.max() >= n:
            raise ValueError("Cayley table entries out of range")
        self.order = n
        self.array = arr
        self.table = [list(map(int, row)) for row in arr]
        self.name = name or f"G{n}"
        self.labels = list(labels) if labels is not None else list(range(n))
        self.identity = self._find_identity()
        self.inverse = self._find_inverses()
        if n <= VERIFY_LIMIT:
            self._check_associative()

    def _find_identity(self) -> int:
        idx = np.arange(self.order)
        for e in range(self.order):
            if (self.array[e] == idx).all() and (self.array[:, e] == idx).all():
                return e
        raise ValueError("table has no two-sided identity")

    def _find_inverses(self) -> list[int]:
        inv = []
        for a in range(self.order):
            hits = np.nonzero(self.array[a] == self.identity)[0]
            if hits.size != 1 or self.array[hits[0], a] != self.identity:
                raise ValueError(f"element {a} has no two-sided inverse")
            inv.append(int(hits[0]))
        return inv

    def _check_associative(self) -> None:
        t = self.array
        for a in range(self.order):
            left = t[t[a]]            # (a*b)*c over all b, c
            right = t[a][t]           # a*(b*c)
            if not np.array_equal(left, right):
                raise ValueError("table is not associative")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.array, self.array.T))

    @cached_property
    def universe(self) -> "FiniteUniverse":
        return FiniteUniverse(self)

    def whole(self) -> "FiniteSubgroup":
        return FiniteSubgroup(frozenset(range(self.order)))

    def trivial(self) -> "FiniteSubgroup":
        return FiniteSubgroup(frozenset([self.identity]))

    def generators(self) -> list[int]:
        """A small generating set, chosen greedily by element order."""
        gens: list[int] = []
        current = {self.identity}
        for a in sorted(range(self.order), key=lambda x: (-self.element_order(x), x)):
            if a not in current:
                gens.append(a)
                current = set(closure(self, gens).members)
                if len(current) == self.order:
                    break
        return gens

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


@dataclass(frozen=True)
class FiniteSubgroup:
    members: frozenset

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __le__(self, other: "FiniteSubgroup") -> bool:
        return self.members <= other.members

    def __and__(self, other: "FiniteSubgroup") -> "FiniteSubgroup":
        return FiniteSubgroup(self.members & other.members)

    def __repr__(self) -> str:
        return f"FiniteSubgroup({list(self.elements)})"


@dataclass(frozen=True)
class FiniteEndo:
    group: FiniteGroup = field(compare=False)
    image: tuple[int, ...]

    def __post_init__(self):
        g = self.group
        if len(self.image) != g.order:
            raise ValueError("image array has the wrong length")
        img = np.asarray(self.image, dtype=np.int64)
        if img.min() < 0 or img.max() >= g.order:
            raise ValueError("image entries out of range")
        # image[xy] == image[x] image[y] for every pair
        if not np.array_equal(img[g.array], g.array[img[:, None], img[None, :]]):
            raise NotAHomomorphism("map does not respect the group law")

    def __call__(self, x: int) -> int:
        return self.image[x]

    @property
    def universe(self) -> "FiniteUniverse":
        return self.group.universe

    def then(self, other: "FiniteEndo") -> "FiniteEndo":
        """Apply ``self`` first, then ``other``."""
        return FiniteEndo(self.group, tuple(other.image[x] for x in self.image))

    def power(self, k: int) -> "FiniteEndo":
        img = tuple(range(self.group.order))
        for _ in range(k):
            img = tuple(self.image[x] for x in img)
        return FiniteEndo(self.group, img)

    def is_injective(self) -> bool:
        return len(set(self.image)) == len(self.image)

    @classmethod
    def identity(cls, group: FiniteGroup) -> "FiniteEndo":
        return cls(group, tuple(range(group.order)))

    @classmethod
    def zero(cls, group: FiniteGroup) -> "FiniteEndo":
        return cls(group, (group.identity,) * group.order)


def closure(group: FiniteGroup, seed: Iterable[int]) -> FiniteSubgroup:
    """Smallest subgroup containing ``seed``."""
    gens = list(dict.fromkeys(seed))
    for s in gens:
        if not 0 <= s < group.order:
            raise ValueError(f"invalid element index {s}")
    members = {group.identity}
    frontier = deque([group.identity])
    t = group.table
    while frontier:
        x = frontier.popleft()
        for g in gens:
            y = t[x][g]
            if y not in members:
                members.add(y)
                frontier.append(y)
    return FiniteSubgroup(frozenset(members))


def endo_from_map(group: FiniteGroup, gens: Sequence[int], images: Sequence[int]) -> FiniteEndo:
    """Extend ``gens[i] -> images[i]`` to an endomorphism of ``group``."""
    if len(gens) != len(images):
        raise ValueError("gens and images differ in length")
    t = group.table
    img: dict[int, int] = {group.identity: group.identity}
    frontier = deque([group.identity])
    while frontier:
        x = frontier.popleft()
        for g, h in zip(gens, images):
            y, v = t[x][g], t[img[x]][h]
            if y not in img:
                img[y] = v
                frontier.append(y)
            elif img[y] != v:
                raise NotAHomomorphism(f"relations violated at element {y}")
    if len(img) != group.order:
        raise ValueError("gens do not generate the group")
    return FiniteEndo(group, tuple(img[x] for x in range(group.order)))


def all_subgroups(group: FiniteGroup, bound: int = 64) -> list[FiniteSubgroup]:
    """Every subgroup exactly once, ordered by size then elements."""
    if group.order > bound:
        raise ValueError(f"group order {group.order} exceeds enumeration bound {bound}")
    cyclic = {closure(group, [a]) for a in range(group.order)}
    found = set(cyclic)
    layer = set(cyclic)
    while layer:
        nxt = set()
        for h in layer:
            for c in cyclic:
                if c <= h:
                    continue
                j = closure(group, h.members | c.members)
                if j not in found:
                    found.add(j)
                    nxt.add(j)
        layer = nxt
    return sorted(found, key=lambda s: (s.order, s.elements))


def quotient(group: FiniteGroup, normal: FiniteSubgroup) -> tuple[FiniteGroup, list[int]]:
    """The quotient group by a normal subgroup together with the projection map."""
    t, inv = group.table, group.inverse
    for g in range(group.order):
        for n in normal.members:
            if t[t[g][n]][inv[g]] not in normal.members:
                raise ValueError("subgroup is not normal")
    proj = [-1] * group.order
    reps: list[int] = []
    for g in range(group.order):
        if proj[g] < 0:
            k = len(reps)
            reps.append(g)
            for n in normal.members:
                proj[t[g][n]] = k
    table = [[proj[t[a][b]] for b in reps] for a in reps]
    q = FiniteGroup(table, name=f"{group.name}/N{normal.order}")
    for a in range(group.order):
        for b in range(group.order):
            if proj[t[a][b]] != q.table[proj[a]][proj[b]]:
                raise AssertionError("projection is not a homomorphism")
    return q, proj


class FiniteUniverse:
    """The universe contract for a finite group; all operations are exact."""

    has_exact_images = True
    has_subgroup_enumeration = True
    has_quotients = True

    def __init__(self, group: FiniteGroup):
        self.group = group

    def whole(self) -> FiniteSubgroup:
        return self.group.whole()

    def trivial(self) -> FiniteSubgroup:
        return self.group.trivial()

    def member(self, x: int, s: FiniteSubgroup) -> bool:
        return x in s.members

    def intersect(self, a: FiniteSubgroup, b: FiniteSubgroup) -> FiniteSubgroup:
        return FiniteSubgroup(a.members & b.members)

    def preimage(self, e: FiniteEndo, s: FiniteSubgroup, ambient: FiniteSubgroup | None = None
                 ) -> FiniteSubgroup:
        pool = ambient.members if ambient is not None else range(self.group.order)
        return FiniteSubgroup(frozenset(x for x in pool if e.image[x] in s.members))

    def image(self, e: FiniteEndo, s: FiniteSubgroup, horizon: int | None = None
              ) -> tuple[FiniteSubgroup, Certificate]:
        return FiniteSubgroup(frozenset(e.image[x] for x in s.members)), Certificate.exact()

    def index(self, a: FiniteSubgroup, b: FiniteSubgroup) -> Index:
        if not b.members <= a.members:
            raise ValueError("index requires containment")
        q, r = divmod(len(a.members), len(b.members))
        assert r == 0, "Lagrange violated"
        return Index(q)

    def equal(self, a: FiniteSubgroup, b: FiniteSubgroup) -> bool:
        return a.members == b.members

    def le(self, a: FiniteSubgroup, b: FiniteSubgroup) -> bool:
        return a.members <= b.members

    def join(self, a: FiniteSubgroup, b: FiniteSubgroup) -> FiniteSubgroup:
        return closure(self.group, a.members | b.members)

    def product_set(self, a: FiniteSubgroup, b: FiniteSubgroup) -> frozenset:
        t = self.group.table
        return frozenset(t[x][y] for x in a.members for y in b.members)

    def tilde(self, v: FiniteSubgroup, l: FiniteSubgroup) -> FiniteSubgroup:
        """Elements x of v with x*l contained in l*v."""
        lv = self.product_set(l, v)
        t = self.group.table
        return FiniteSubgroup(frozenset(
            x for x in v.members if all(t[x][y] in lv for y in l.members)))

    def compose(self, first: FiniteEndo, second: FiniteEndo) -> FiniteEndo:
        return first.then(second)

    def power(self, e: FiniteEndo, k: int) -> FiniteEndo:
        return e.power(k)

    def identity(self) -> FiniteEndo:
        return FiniteEndo.identity(self.group)
