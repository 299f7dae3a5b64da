"""Built-in finite groups and endomorphism enumeration."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import Callable, Sequence

from .finite import FiniteEndo, FiniteGroup, NotAHomomorphism, endo_from_map

__all__ = [
    "cyclic_product",
    "permutation_group",
    "dihedral",
    "quaternion",
    "dicyclic3",
    "catalog",
    "catalog_names",
    "enumerate_endos",
    "ENDO_CAP",
]

ENDO_CAP = 10**5


def cyclic_product(factors: Sequence[int], name: str | None = None) -> FiniteGroup:
    """Direct product of cyclic groups; element i encodes a tuple in mixed radix."""
    factors = [int(f) for f in factors if int(f) > 1] or [1]
    labels = list(itertools.product(*(range(f) for f in factors)))
    pos = {lab: i for i, lab in enumerate(labels)}
    table = [[pos[tuple((x + y) % f for x, y, f in zip(a, b, factors))] for b in labels]
             for a in labels]
    if name is None:
        name = "x".join(f"C{f}" for f in factors) if factors != [1] else "trivial"
    return FiniteGroup(table, labels=labels, name=name)


def _group_from_elements(elements: list, mul: Callable, name: str) -> FiniteGroup:
    pos = {e: i for i, e in enumerate(elements)}
    table = [[pos[mul(a, b)] for b in elements] for a in elements]
    return FiniteGroup(table, labels=elements, name=name)


def permutation_group(gens: Sequence[Sequence[int]], name: str) -> FiniteGroup:
    """Group generated by permutations (tuples of images); product is composition."""
    n = len(gens[0])
    ident = tuple(range(n))
    mul = lambda a, b: tuple(a[b[i]] for i in range(n))  # noqa: E731
    elems = [ident]
    seen = {ident}
    k = 0
    while k < len(elems):
        for g in gens:
            y = mul(elems[k], tuple(g))
            if y not in seen:
                seen.add(y)
                elems.append(y)
        k += 1
    return _group_from_elements(sorted(elems), mul, name)


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon as pairs (rotation, flip)."""
    elems = [(r, f) for f in range(2) for r in range(n)]

    def mul(a, b):
        r1, f1 = a
        r2, f2 = b
        return ((r1 + (-r2 if f1 else r2)) % n, (f1 + f2) % 2)

    return _group_from_elements(elems, mul, f"D{n}")


def quaternion() -> FiniteGroup:
    # unit quaternions +-1, +-i, +-j, +-k as (sign, basis index)
    basis = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
             (1, 0): (1, 1), (2, 0): (1, 2), (3, 0): (1, 3),
             (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
             (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
             (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2)}
    elems = [(s, b) for s in (1, -1) for b in range(4)]

    def mul(x, y):
        s, b = basis[(x[1], y[1])]
        return (x[0] * y[0] * s, b)

    return _group_from_elements(elems, mul, "Q8")


def dicyclic3() -> FiniteGroup:
    """C3 semidirect C4, the generator of C4 acting by inversion."""
    elems = [(a, b) for b in range(4) for a in range(3)]

    def mul(x, y):
        a1, b1 = x
        a2, b2 = y
        return ((a1 + (-a2 if b1 % 2 else a2)) % 3, (b1 + b2) % 4)

    return _group_from_elements(elems, mul, "C3:C4")


def _builders() -> dict[str, Callable[[], FiniteGroup]]:
    cp = lambda *f, name=None: (lambda: cyclic_product(f, name))  # noqa: E731
    return {
        "trivial": cp(1, name="trivial"),
        "C2": cp(2), "C3": cp(3), "C4": cp(4), "C2xC2": cp(2, 2), "C5": cp(5),
        "C6": cp(6),
        "S3": lambda: permutation_group([(1, 0, 2), (1, 2, 0)], "S3"),
        "C7": cp(7), "C8": cp(8), "C4xC2": cp(4, 2), "C2xC2xC2": cp(2, 2, 2),
        "D4": lambda: dihedral(4), "Q8": quaternion,
        "C9": cp(9), "C3xC3": cp(3, 3), "C10": cp(10),
        "D5": lambda: dihedral(5),
        "C11": cp(11), "C12": cp(12), "C2xC6": cp(2, 6),
        "D6": lambda: dihedral(6),
        "A4": lambda: permutation_group([(1, 2, 0, 3), (1, 0, 3, 2)], "A4"),
        "C3:C4": dicyclic3,
        "C3xC3xC3": cp(3, 3, 3),
        # order 16, used by the wider property sweeps
        "C16": cp(16), "C4xC4": cp(4, 4), "C2xC8": cp(2, 8), "C2xC2xC4": cp(2, 2, 4),
        "D8": lambda: dihedral(8),
    }


@lru_cache(maxsize=None)
def catalog(name: str) -> FiniteGroup:
    try:
        return _builders()[name]()
    except KeyError:
        raise KeyError(f"unknown catalog group {name!r}") from None


def catalog_names(max_order: int = 12, include_cube: bool = False) -> list[str]:
    """Catalog groups with order at most ``max_order`` (C3^3 only on request)."""
    out = []
    for name in _builders():
        if name == "C3xC3xC3" and not include_cube:
            continue
        if catalog(name).order <= max_order or (name == "C3xC3xC3" and include_cube):
            out.append(name)
    return out


def enumerate_endos(group: FiniteGroup, cap: int = ENDO_CAP, seed: int = 0) -> list[FiniteEndo]:
    """All endomorphisms via images of a small generating set.

    When the number of candidate image tuples exceeds ``cap`` a deterministic
    sample of ``cap`` tuples drawn with ``seed`` is tried instead.
    """
    gens = group.generators()
    if not gens:
        return [FiniteEndo.identity(group)]
    # the image of g must have order dividing the order of g
    choices = []
    for g in gens:
        og = group.element_order(g)
        choices.append([h for h in range(group.order) if og % group.element_order(h) == 0])
    total = 1
    for c in choices:
        total *= len(c)
    if total <= cap:
        candidates = itertools.product(*choices)
    else:
        rng = random.Random(seed)
        candidates = (tuple(rng.choice(c) for c in choices) for _ in range(cap))
    seen: dict[tuple, FiniteEndo] = {}
    for images in candidates:
        try:
            e = endo_from_map(group, gens, images)
        except NotAHomomorphism:
            continue
        seen.setdefault(e.image, e)
    return [seen[k] for k in sorted(seen)]
