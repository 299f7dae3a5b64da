"""Dense window oracle for the sequence universe.

Subgroups are approximated by explicit spanning matrices on a coordinate
window [lo, hi) and every operation is plain Gaussian elimination over GF(p)
on those matrices.  Effects of the finite window only reach a bounded
distance below ``hi``, so results are compared on a much shorter prefix
[lo, m).  Nothing here uses the normal forms of the eventually periodic
representation; the elimination routine is deliberately separate from the
one in :mod:`tdlc.gfp`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .seqvec import BandedEndo, SeqVector

__all__ = ["DenseSubgroup", "DenseEndo", "nullspace", "row_basis", "constraint_rows", "agree",
           "dense_index", "seq_from"]


def _echelon(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form by column sweep; returns (rows, pivot columns)."""
    m = np.array(mat, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * pow(int(m[r, c]), p - 2, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def row_basis(mat: np.ndarray, p: int) -> np.ndarray:
    if mat.shape[0] == 0:
        return mat.reshape(0, mat.shape[1]).astype(np.int64)
    return _echelon(mat, p)[0]


def nullspace(mat: np.ndarray, ncols: int, p: int) -> np.ndarray:
    """Basis (as rows) of {x : mat @ x = 0} in GF(p)^ncols."""
    if mat.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    red, piv = _echelon(mat, p)
    free = [c for c in range(ncols) if c not in set(piv)]
    out = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        out[i, f] = 1
        for r, c in enumerate(piv):
            out[i, c] = (-red[r, f]) % p
    return out


def constraint_rows(p: int, lo: int, hi: int, base: int, constraints: Iterable,
                    periodic: dict | None = None) -> np.ndarray:
    """Constraint matrix on [lo, hi) from a raw subgroup description.

    ``constraints`` are lists of [coordinate, coefficient]; ``periodic`` is
    ``{"anchor", "period", "templates"}`` and template i repeats at every
    shift k*period, k >= 0.  Constraints reaching past hi are dropped.
    """
    rows = []
    for j in range(lo, min(base, hi)):
        r = np.zeros(hi - lo, dtype=np.int64)
        r[j - lo] = 1
        rows.append(r)

    def add(terms, shift=0):
        terms = [(int(n) + shift, int(c) % p) for n, c in terms]
        if not terms or max(n for n, _ in terms) >= hi:
            return False
        r = np.zeros(hi - lo, dtype=np.int64)
        for n, c in terms:
            if n >= lo:
                r[n - lo] = (r[n - lo] + c) % p
        rows.append(r)
        return True

    for c in constraints:
        add(c)
    if periodic:
        q = int(periodic["period"])
        for tpl in periodic["templates"]:
            if not tpl:
                continue
            k = 0
            while add(tpl, k * q):
                k += 1
    if not rows:
        return np.zeros((0, hi - lo), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


@dataclass
class DenseSubgroup:
    """Span of ``gens`` (rows) inside GF(p)^[lo, hi)."""

    p: int
    lo: int
    hi: int
    gens: np.ndarray

    @classmethod
    def from_description(cls, d: dict, lo: int, hi: int) -> "DenseSubgroup":
        p = int(d["p"])
        if d.get("trivial"):
            return cls(p, lo, hi, np.zeros((0, hi - lo), dtype=np.int64))
        cons = constraint_rows(p, lo, hi, int(d.get("base", 0)), d.get("constraints", []),
                               d.get("periodic"))
        return cls(p, lo, hi, nullspace(cons, hi - lo, p))

    @classmethod
    def whole(cls, p: int, lo: int, hi: int, base: int) -> "DenseSubgroup":
        return cls.from_description({"p": p, "base": base}, lo, hi)

    def constraints(self) -> np.ndarray:
        return nullspace(self.gens, self.hi - self.lo, self.p) if self.gens.shape[0] \
            else np.eye(self.hi - self.lo, dtype=np.int64)

    def project(self, m: int) -> np.ndarray:
        """Row basis of the projection onto coordinates [lo, m)."""
        return row_basis(self.gens[:, : m - self.lo], self.p)

    def dim(self, m: int) -> int:
        return self.project(m).shape[0]

    def truncate(self, hi: int) -> "DenseSubgroup":
        return DenseSubgroup(self.p, self.lo, hi, self.project(hi))

    def intersect(self, other: "DenseSubgroup") -> "DenseSubgroup":
        hi = min(self.hi, other.hi)
        mine, cons = self.truncate(hi).gens, other.truncate(hi).constraints()
        coeffs = nullspace((cons @ mine.T) % self.p, mine.shape[0], self.p)
        return DenseSubgroup(self.p, self.lo, hi, (coeffs @ mine) % self.p)

    def join(self, other: "DenseSubgroup") -> "DenseSubgroup":
        hi = min(self.hi, other.hi)
        both = np.vstack([self.truncate(hi).gens, other.truncate(hi).gens])
        return DenseSubgroup(self.p, self.lo, hi, row_basis(both, self.p))

    def contains(self, x: SeqVector) -> bool:
        vec = np.zeros(self.hi - self.lo, dtype=np.int64)
        for n, c in x.terms():
            if not self.lo <= n < self.hi:
                return False
            vec[n - self.lo] = c
        r = row_basis(self.gens, self.p).shape[0]
        return row_basis(np.vstack([self.gens, vec[None, :]]), self.p).shape[0] == r


class DenseEndo:
    """Matrix of a banded endomorphism restricted to the window [lo, hi).

    ``reach[i]`` is the highest input coordinate read by output row lo + i
    (a huge value when the row reads beyond the window), so an output
    coordinate is trusted for an input known on [lo, h) when its reach is
    below h.
    """

    FAR = 1 << 40

    def __init__(self, e: BandedEndo | None, lo: int, hi: int):
        self.lo, self.hi = lo, hi
        if e is None:
            return
        self.p = e.p
        size = hi - lo
        self.matrix = np.zeros((size, size), dtype=np.int64)
        self.reach = np.full(size, lo - 1, dtype=np.int64)
        for n in range(lo, hi):
            for m, c in e.row(n).terms():
                if m >= hi:
                    self.reach[n - lo] = self.FAR
                else:
                    self.reach[n - lo] = max(self.reach[n - lo], m)
                    if m >= lo:
                        self.matrix[n - lo, m - lo] = c
        # highest input coordinate read by an output row below the window
        low = [e.row(n) for n in range(lo - 64, lo)]
        self.low_reach = max((r.top for r in low if not r.is_zero()), default=lo - 1)

    def trusted(self, h: int) -> int:
        """First output coordinate that is not determined by inputs on [lo, h)."""
        bad = np.flatnonzero(self.reach >= h)
        return self.lo + int(bad[0]) if bad.size else self.hi

    def _check_low(self, s: DenseSubgroup, what: str) -> None:
        """Refuse inputs that output rows below the window would read."""
        cut = min(self.low_reach + 1, s.hi) - self.lo
        if cut > 0 and s.gens[:, :cut].any():
            raise ValueError(f"window too small: {what} needs rows below {self.lo}")

    def image(self, s: DenseSubgroup) -> DenseSubgroup:
        self._check_low(s, "image")
        top = self.trusted(s.hi)
        imgs = (s.gens @ self.matrix[: top - self.lo, : s.hi - self.lo].T) % self.p
        return DenseSubgroup(self.p, self.lo, top, row_basis(imgs, self.p))

    def preimage(self, s: DenseSubgroup, ambient: DenseSubgroup) -> DenseSubgroup:
        self._check_low(ambient, "preimage")
        top = min(self.trusted(ambient.hi), s.hi)
        cons = s.truncate(top).constraints()
        mapped = (ambient.gens @ self.matrix[: top - self.lo, : ambient.hi - self.lo].T) % self.p
        coeffs = nullspace((cons @ mapped.T) % self.p, ambient.gens.shape[0], self.p)
        return DenseSubgroup(self.p, self.lo, ambient.hi, (coeffs @ ambient.gens) % self.p)

    def then(self, other: "DenseEndo") -> "DenseEndo":
        """Apply self first, then other."""
        out = DenseEndo(None, self.lo, self.hi)
        out.p = self.p
        # a composite row below lo reads self's rows at the coordinates other's low rows read
        inside = range(self.lo, min(other.low_reach, self.hi - 1) + 1)
        out.low_reach = max([self.low_reach] + [int(self.reach[c - self.lo]) for c in inside])
        out.matrix = (other.matrix @ self.matrix) % self.p
        reach = np.full(self.hi - self.lo, self.lo - 1, dtype=np.int64)
        for i in range(self.hi - self.lo):
            if other.reach[i] >= self.hi:
                reach[i] = self.FAR
                continue
            used = np.flatnonzero(other.matrix[i])
            for j in used:
                reach[i] = max(reach[i], self.reach[j])
        out.reach = reach
        return out

    def power(self, k: int) -> "DenseEndo":
        out = self
        for _ in range(k - 1):
            out = out.then(self)
        return out

    def rows(self, n_lo: int, n_hi: int) -> dict[int, SeqVector]:
        """Trusted rows as functionals, keyed by output coordinate."""
        out = {}
        for n in range(n_lo, n_hi):
            if self.reach[n - self.lo] < self.hi:
                out[n] = SeqVector(self.p, self.lo, list(self.matrix[n - self.lo]))
        return out


def agree(epc, dense: DenseSubgroup, m: int) -> bool:
    """Whether a normal-form subgroup and a dense one have the same projection on [lo, m)."""
    p = dense.p
    if epc.is_trivial:
        return dense.dim(m) == 0
    if epc.base < dense.lo:
        raise ValueError("dense window starts above the subgroup base")
    sol = nullspace(epc.window(dense.lo, m), m - dense.lo, p)
    mine = dense.project(m)
    if sol.shape[0] != mine.shape[0]:
        return False
    return row_basis(np.vstack([sol, mine]), p).shape[0] == sol.shape[0]


def dense_index(a: DenseSubgroup, b: DenseSubgroup, m: int) -> int:
    """log_p [a : b] read off the projections to [lo, m)."""
    return a.dim(m) - b.dim(m)


def seq_from(vec: Sequence[int], lo: int, p: int) -> SeqVector:
    return SeqVector(p, lo, [int(x) % p for x in vec])
