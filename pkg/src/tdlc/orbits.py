"""Forward orbits and range membership for banded endomorphisms.

These are horizon-bounded substitutes for statements about infinite
intersections of images: an orbit's valuations are followed for a fixed
number of steps, and membership of a Laurent polynomial in the image of
alpha^n is decided by solving for a Laurent polynomial preimage and checking
it by direct application.
"""

from __future__ import annotations

import math

import numpy as np

from .gfp import solve
from .seqvec import BandedEndo, EndoError, SeqVector

__all__ = ["orbit_valuations", "escape_start", "in_image_power"]


def orbit_valuations(e: BandedEndo, x: SeqVector, steps: int) -> list[float]:
    """Valuations of x, alpha(x), ..., alpha^steps(x) (math.inf for zero)."""
    vals = [x.valuation()]
    for _ in range(steps):
        x = e.apply(x)
        vals.append(x.valuation())
    return vals


def escape_start(vals: list[float]) -> int | None:
    """Least k0 after which the valuations strictly increase until they reach inf.

    None when the last two valuations are finite and do not increase, i.e.
    no escape is visible within the horizon.
    """
    k0 = len(vals) - 1
    while k0 > 0:
        a, b = vals[k0 - 1], vals[k0]
        if not (a < b or (a == b == math.inf)):
            break
        k0 -= 1
    if k0 == len(vals) - 1 and vals[-1] != math.inf:
        return None
    return k0


def _readers(e: BandedEndo, m: int) -> list[int]:
    """Output coordinates whose row reads coordinate m."""
    active = e.active_rows(m, m)
    if active is None:
        return []
    first, last = active
    if last is None:
        raise EndoError(["coordinate read by infinitely many rows"])
    return [n for n in range(first, last + 1) if e.row(n)[m]]


def in_image_power(e: BandedEndo, x: SeqVector, n: int) -> SeqVector | None:
    """A Laurent polynomial f with alpha^n(f) == x, or None if none was found.

    Solves for the whole chain f_n -> ... -> f_1 -> x at once.  Level k only
    uses the coordinates read by the rows of level k-1, and every row reading
    such a coordinate must reproduce level k-1 (zero off its coordinates).
    A solution is verified by applying alpha n times, so a returned f is
    always correct; None means no preimage supported on those coordinates.
    """
    p = e.p
    if n == 0 or x.is_zero():
        return x
    levels = [list(range(x.bottom, x.top + 1))]
    for _ in range(n):
        read = set()
        for m in levels[-1]:
            read.update(c for c, _ in e.row(m).terms())
        levels.append(sorted(read))
    # variable layout: levels 1..n, concatenated
    offset, col = {}, 0
    for k in range(1, n + 1):
        for m in levels[k]:
            offset[k, m] = col
            col += 1
    eqs, rhs = [], []
    for k in range(1, n + 1):
        rows = sorted({r for m in levels[k] for r in _readers(e, m)} | set(levels[k - 1]))
        prev = set(levels[k - 1])
        for r in rows:
            eq = np.zeros(col, dtype=np.int64)
            for m, c in e.row(r).terms():
                if (k, m) in offset:
                    eq[offset[k, m]] = c
            target = 0
            if r in prev:
                if k == 1:
                    target = x[r]
                else:
                    eq[offset[k - 1, r]] = (eq[offset[k - 1, r]] - 1) % p
            eqs.append(eq)
            rhs.append(target)
    sol = solve(np.array(eqs, dtype=np.int64).reshape(len(eqs), col), np.array(rhs), p)
    if sol is None:
        return None
    f = SeqVector.from_terms(p, [(m, int(sol[offset[n, m]])) for m in levels[n]])
    y = f
    for _ in range(n):
        y = e.apply(y)
    return f if y == x else None
