"""Compact subgroups of F_p((t)) cut out by eventually periodic linear constraints.

A compact subgroup S of t^a F_p[[t]] is determined by its constraint space
C(S): the finitely supported functionals vanishing on S.  We keep, for every
coordinate m that is the highest coordinate of some constraint, the unique
constraint b_m with top m whose support [bottom, m] is as short as possible and
which has zero coefficients at the tops of all shorter constraints nested inside
that span.  These vectors form a minimal-span basis, they are local (b_m only
depends on C(S) near m) and for the subgroups handled here they repeat under a
coordinate shift beyond some anchor.  Equal subgroups therefore have equal
normal forms.

Every operation produces its result by computing C(result) on a finite
coordinate window exactly, turning it into normal-form vectors and detecting
the eventual period.  Detection is confirmed on a second, longer window; the
window sizes used are recorded in the returned certificate.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from functools import lru_cache
from math import lcm
from typing import Callable, Iterable, Sequence

import numpy as np

from . import gfp
from .core import INFINITE, Certificate, Index, InconclusiveError
from .seqvec import BandedEndo, RowFunctional, SeqVector, endo_compose

__all__ = [
    "EPCSubgroup",
    "LaurentUniverse",
    "ep_preimage",
    "ep_image",
    "ep_intersect",
    "ep_join",
    "ep_index",
    "ep_member",
    "ep_le",
    "ep_equal",
    "power_series",
    "DEFAULT_STATE_BOUND",
    "state_bound",
]

DEFAULT_STATE_BOUND = 4096
_STATE_BOUND: ContextVar[int] = ContextVar("state_bound", default=DEFAULT_STATE_BOUND)


@contextmanager
def state_bound(n: int):
    """Use ``n`` as the window bound of every universe created inside the block."""
    if n < 16:
        raise ValueError("state bound must be at least 16")
    token = _STATE_BOUND.set(n)
    try:
        yield
    finally:
        _STATE_BOUND.reset(token)

# (bottom, coefficient tuple) of a normal-form vector; the last coefficient is 1
Canon = dict[int, tuple[int, tuple[int, ...]]]


@dataclass(frozen=True)
class EPCSubgroup:
    """A compact subgroup of F_p((t)) in normal form.

    ``constraints`` are the normal-form vectors with tops in [base, anchor);
    beyond ``anchor`` the vector with top ``anchor + k*period + i`` is
    ``templates[i]`` shifted by ``k*period`` (``None`` means no constraint has
    that top).  ``anchor is None`` marks an open subgroup.
    """

    p: int
    base: int
    constraints: tuple[RowFunctional, ...] = ()
    anchor: int | None = None
    period: int = 1
    templates: tuple[RowFunctional | None, ...] = ()

    @property
    def is_open(self) -> bool:
        return self.anchor is None

    @property
    def is_trivial(self) -> bool:
        return (self.anchor == self.base and self.period == 1 and not self.constraints
                and self.templates == (RowFunctional.unit(self.p, self.base),))

    @classmethod
    def power_series(cls, p: int, base: int = 0) -> "EPCSubgroup":
        """t^base F_p[[t]]."""
        return cls(p, base)

    @classmethod
    def trivial(cls, p: int) -> "EPCSubgroup":
        return cls(p, 0, (), 0, 1, (RowFunctional.unit(p, 0),))

    def width(self) -> int:
        vecs = list(self.constraints) + [t for t in self.templates if t is not None]
        return max((v.top - v.bottom for v in vecs), default=0)

    def horizon_top(self) -> int:
        """Coordinate beyond which the structure is purely periodic."""
        if self.anchor is not None:
            return self.anchor
        return max((v.top + 1 for v in self.constraints), default=self.base)

    def vector(self, m: int) -> RowFunctional | None:
        """Normal-form constraint with top m, if any."""
        if m < self.base:
            return RowFunctional.unit(self.p, m)
        if self.anchor is None or m < self.anchor:
            for v in self.constraints:
                if v.top == m:
                    return v
            return None
        k, i = divmod(m - self.anchor, self.period)
        t = self.templates[i]
        return None if t is None else t.shift(k * self.period)

    def vectors(self, lo: int, hi: int) -> list[RowFunctional]:
        """Normal-form constraints with top in [lo, hi), including forced zeros below base."""
        out = [RowFunctional.unit(self.p, m) for m in range(lo, min(hi, self.base))]
        for v in self.constraints:
            if lo <= v.top < hi:
                out.append(v)
        if self.anchor is not None:
            start = max(lo, self.anchor)
            for m in range(start, hi):
                k, i = divmod(m - self.anchor, self.period)
                t = self.templates[i]
                if t is not None:
                    out.append(t.shift(k * self.period))
        return out

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Basis of C(S) restricted to functionals supported in [lo, hi); needs lo <= base."""
        if lo > self.base:
            raise ValueError("window must start at or below the base")
        return _rows_to_matrix(self.vectors(lo, hi), lo, hi, self.p)

    def pivots(self, lo: int, hi: int) -> int:
        """Dimension of C(S) on [lo, hi) (forced zeros below base included)."""
        return len(self.vectors(lo, hi))

    def to_json(self) -> dict:
        out = {"p": self.p, "base": self.base,
               "constraints": [v.to_json() for v in self.constraints]}
        if self.anchor is not None:
            out["periodic"] = {"anchor": self.anchor, "period": self.period,
                               "templates": [None if t is None else t.to_json()
                                             for t in self.templates]}
        return out

    @classmethod
    def from_json(cls, d: dict) -> "EPCSubgroup":
        """Build from a descriptor; constraints need not be in normal form."""
        p = int(d["p"])
        base = int(d.get("base", 0))
        cons = [RowFunctional.from_terms(p, c) for c in d.get("constraints", [])]
        per = d.get("periodic")
        fam = None
        if per:
            tpls = [None if t is None else RowFunctional.from_terms(p, t)
                    for t in per["templates"]]
            fam = (int(per["anchor"]), int(per["period"]), tpls)
        return from_constraints(p, base, cons, fam)

    def describe(self) -> str:
        parts = [f"base {self.base}"]
        parts += [_fmt(v) for v in self.constraints]
        if self.anchor is not None:
            tp = ", ".join("-" if t is None else _fmt(t) for t in self.templates)
            parts.append(f"periodic from {self.anchor} every {self.period}: [{tp}]")
        return "{" + "; ".join(parts) + "}"


def _fmt(v: RowFunctional) -> str:
    return " + ".join((f"{c}" if c != 1 else "") + f"g{n}" for n, c in v.terms()) + " = 0"


def _rows_to_matrix(rows: Sequence[SeqVector], lo: int, hi: int, p: int) -> np.ndarray:
    m = np.zeros((len(rows), hi - lo), dtype=np.int64)
    for i, r in enumerate(rows):
        for n, c in r.terms():
            if lo <= n < hi:
                m[i, n - lo] = c
            elif c:
                raise ValueError("row support leaves the window")
    return m


def _row(vec: np.ndarray, lo: int, p: int) -> RowFunctional:
    return RowFunctional(p, lo, [int(x) for x in vec])


# ---------------------------------------------------------------- normal form


def canonical_vectors(basis: np.ndarray, lo: int, p: int) -> Canon:
    """Normal-form vectors (keyed by top) of the span of ``basis`` over columns from ``lo``."""
    if basis.shape[0] == 0:
        return {}
    red, _ = gfp.rref(basis, p, reverse=True)
    rows = []
    for r in red:
        nz = np.nonzero(r)[0]
        top, bot = int(nz[-1]), int(nz[0])
        rows.append([top, bot, (r * pow(int(r[top]), p - 2, p)) % p])
    rows.sort(key=lambda x: x[0])
    # make bottoms distinct; earlier rows have lower tops
    by_bottom: dict[int, int] = {}
    done: list[list] = []
    for top, bot, vec in rows:
        while bot in by_bottom:
            other = done[by_bottom[bot]][2]
            vec = (vec - vec[bot] * pow(int(other[bot]), p - 2, p) * other) % p
            bot = int(np.nonzero(vec)[0][0])
        by_bottom[bot] = len(done)
        done.append([top, bot, vec])
    # reduce each vector against the vectors nested strictly inside its span
    canon_vec: dict[int, tuple[int, np.ndarray]] = {}
    for top, bot, vec in done:
        for j in range(top - 1, bot - 1, -1):
            c = vec[j]
            if c and j in canon_vec and canon_vec[j][0] >= bot:
                vec = (vec - c * canon_vec[j][1]) % p
        canon_vec[top] = (bot, vec)
    return {top + lo: (bot + lo, tuple(int(x) for x in vec[bot:top + 1]))
            for top, (bot, vec) in canon_vec.items()}


def _shifted(entry, q: int):
    return (entry[0] + q, entry[1])


def _detect_period(canon: Canon, lo: int, hi: int, max_period: int, min_reps: int = 3
                   ) -> tuple[int, int] | None:
    """Smallest period q (then smallest anchor) valid on tops in [lo, hi).

    The pattern must be seen repeating at least ``min_reps`` times past the
    anchor and beyond the widest vector involved.
    """
    width = max((t - b for t, (b, _) in canon.items()), default=0)
    for q in range(1, max_period + 1):
        s = lo
        for m in range(hi - q - 1, lo - 1, -1):
            a, b = canon.get(m), canon.get(m + q)
            if (a is None) != (b is None) or (a is not None and _shifted(a, q) != b):
                s = m + 1
                break
        if hi - s >= q * min_reps + width + 2:
            return q, s
    return None


def _normal_form(p: int, lo: int, canon: Canon, q: int, s: int) -> EPCSubgroup:
    unit = lambda m: (m, (1,))  # noqa: E731
    # raise the base past coordinates that are forced to vanish
    base = lo
    while base < s and canon.get(base) == unit(base):
        base += 1
    if base == s and all(canon.get(s + i) == unit(s + i) for i in range(q)):
        return EPCSubgroup.trivial(p)
    if base == s:
        while canon.get(base) == unit(base):
            base += 1
    anchor = max(s, base)
    templates = []
    for i in range(q):
        e = canon.get(anchor + i)
        templates.append(None if e is None else RowFunctional(p, e[0], e[1]))
    exc = tuple(RowFunctional(p, canon[m][0], canon[m][1])
                for m in range(base, anchor) if m in canon)
    if all(t is None for t in templates):
        return EPCSubgroup(p, base, exc, None, 1, ())
    return EPCSubgroup(p, base, exc, anchor, q, tuple(templates))


def normalize(p: int, lo: int, window_fn: Callable[[int], np.ndarray], start: int,
              state_bound: int = DEFAULT_STATE_BOUND, max_window: int | None = None,
              confirm: bool = True) -> tuple[EPCSubgroup, Certificate]:
    """Normal form of a subgroup whose constraint window on [lo, N) is ``window_fn(N)``.

    Windows grow until a period is detected and then confirmed on a window
    that is longer by at least two periods.  Raises InconclusiveError when the
    window would exceed ``state_bound`` coordinates (or ``max_window``).
    """
    limit = lo + state_bound if max_window is None else min(max_window, lo + state_bound)
    n = max(start, lo + 8)
    while True:
        n = min(n, limit)
        canon = canonical_vectors(window_fn(n), lo, p)
        found = _detect_period(canon, lo, n, max_period=max(1, (n - lo) // 4))
        if found is not None:
            q, s = found
            if not confirm:
                cert = Certificate.certified(n, window=[lo, n], anchor=s, period=q)
                return _normal_form(p, lo, canon, q, s), cert
            n2 = min(n + max(2 * q + 8, (n - lo) // 2), limit)
            if n2 > n:
                canon2 = canonical_vectors(window_fn(n2), lo, p)
                if all(canon2.get(m) == canon.get(m) for m in range(lo, n)):
                    found2 = _detect_period(canon2, lo, n2, max_period=max(1, (n2 - lo) // 4))
                    if found2 == (q, s):
                        cert = Certificate.certified(n2, window=[lo, n2], anchor=s, period=q)
                        return _normal_form(p, lo, canon2, q, s), cert
        if n >= limit:
            raise InconclusiveError(
                f"no periodic normal form within {limit - lo} coordinates",
                Certificate.inconclusive(limit - lo, window=[lo, n]))
        n = lo + 2 * (n - lo)


def from_constraints(p: int, base: int, constraints: Iterable[SeqVector],
                     family: tuple[int, int, Sequence[SeqVector | None]] | None = None,
                     state_bound: int = DEFAULT_STATE_BOUND) -> EPCSubgroup:
    """Subgroup of t^base F_p[[t]] cut out by ``constraints`` and an optional periodic
    ``family`` (anchor, period, templates): template i shifted by k*period, k >= 0."""
    constraints = [c for c in constraints if not c.is_zero()]
    if any(c.bottom < base for c in constraints):
        raise ValueError("constraint supported below the base")
    top_exc = max((c.top for c in constraints), default=base)
    if family is None:
        hi = top_exc + 1
        canon = canonical_vectors(_rows_to_matrix(constraints, base, hi, p), base, p)
        return _normal_form(p, base, canon, 1, hi)
    anchor, period, tpls = family
    tpls = [t for t in tpls if t is not None and not t.is_zero()]
    if any(t.bottom < base for t in tpls):
        raise ValueError("periodic template supported below the base")
    tw = max((t.top for t in tpls), default=anchor)

    def window(n: int) -> np.ndarray:
        # generous overshoot so that cancellations among high rows are captured
        hi = 2 * n - base + tw - anchor + 2 * period
        rows = list(constraints)
        k = 0
        while True:
            batch = [t.shift(k * period) for t in tpls]
            if not batch or min(t.bottom for t in batch) >= hi:
                break
            rows += [b for b in batch if b.top < hi]
            k += 1
        m = _rows_to_matrix(rows, base, hi, p)
        return gfp.span_below(m, p, n - base)[:, : n - base]

    start = max(top_exc, tw) + 4 * period + 16
    return normalize(p, base, window, start, state_bound)[0]


def power_series(p: int, base: int = 0) -> EPCSubgroup:
    return EPCSubgroup.power_series(p, base)


# ---------------------------------------------------------------- operations


def _common_lo(*subs: EPCSubgroup) -> int:
    return min(s.base for s in subs)


def _period_bound(*subs: EPCSubgroup) -> int:
    return lcm(*[s.period for s in subs])


def ep_member(x: SeqVector, s: EPCSubgroup) -> bool:
    """Whether the finitely supported sequence x lies in s."""
    if x.p != s.p:
        raise ValueError("prime mismatch")
    if x.is_zero():
        return True
    if x.bottom < s.base:
        return False
    for v in s.vectors(s.base, x.top + s.width() + 1):
        if v.bottom <= x.top and v.dot(x):
            return False
    return True


def _check_bound(*subs: EPCSubgroup) -> int:
    """Coordinate up to which comparisons must be made to cover every periodic case."""
    h = max(s.horizon_top() for s in subs)
    w = max(s.width() for s in subs)
    return h + 2 * _period_bound(*subs) + 2 * w + 2


def ep_le(b: EPCSubgroup, a: EPCSubgroup) -> bool:
    """Containment b <= a: every constraint of a is implied by those of b."""
    if a.p != b.p:
        raise ValueError("prime mismatch")
    if b.is_trivial:
        return True
    if b.base < a.base:
        return False
    lo = a.base
    hi = _check_bound(a, b)
    mb = b.window(lo, hi)
    ma = a.window(lo, hi)
    if ma.shape[0] == 0:
        return True
    r = gfp.rank(mb, p := a.p) if mb.shape[0] else 0
    return gfp.rank(np.vstack([mb, ma]), p) == r


def ep_equal(a: EPCSubgroup, b: EPCSubgroup) -> bool:
    return a == b


def ep_index(a: EPCSubgroup, b: EPCSubgroup):
    """[a : b] for b <= a, as a power of p, or INFINITE."""
    if not ep_le(b, a):
        raise ValueError("index requires containment")
    if b.is_trivial:
        if a.is_trivial:
            return Index.power(a.p, 0)
        return INFINITE
    lo = _common_lo(a, b)
    n1 = _check_bound(a, b)
    n2 = n1 + _period_bound(a, b)
    d1 = b.pivots(lo, n1) - a.pivots(lo, n1)
    d2 = b.pivots(lo, n2) - a.pivots(lo, n2)
    if d1 != d2:
        return INFINITE
    return Index.power(a.p, d1)


def ep_intersect(a: EPCSubgroup, b: EPCSubgroup, state_bound: int = DEFAULT_STATE_BOUND
                 ) -> EPCSubgroup:
    if a.p != b.p:
        raise ValueError("prime mismatch")
    if a == b:
        return a
    if a.is_trivial or b.is_trivial:
        return EPCSubgroup.trivial(a.p)
    p = a.p
    lo = _common_lo(a, b)

    def window(n: int) -> np.ndarray:
        hi = 2 * n - lo + 2 * _period_bound(a, b)
        m = np.vstack([a.window(lo, hi), b.window(lo, hi)])
        return gfp.span_below(m, p, n - lo)[:, : n - lo]

    return normalize(p, lo, window, _check_bound(a, b) + 8, state_bound)[0]


def ep_join(a: EPCSubgroup, b: EPCSubgroup, state_bound: int = DEFAULT_STATE_BOUND
            ) -> EPCSubgroup:
    """The closed subgroup a + b; its constraints are those shared by a and b."""
    if a.p != b.p:
        raise ValueError("prime mismatch")
    if ep_le(b, a):
        return a
    if ep_le(a, b):
        return b
    p = a.p
    lo = _common_lo(a, b)

    def window(n: int) -> np.ndarray:
        ma, mb = a.window(lo, n), b.window(lo, n)
        # row space intersection via the left kernel of the stacked matrix
        k = gfp.left_kernel(np.vstack([ma, mb]), p) if ma.shape[0] and mb.shape[0] else None
        if k is None or k.shape[0] == 0:
            return np.zeros((0, n - lo), dtype=np.int64)
        return (k[:, : ma.shape[0]] @ ma) % p

    return normalize(p, lo, window, _check_bound(a, b) + 8, state_bound)[0]


def _endo_margin(e: BandedEndo) -> int:
    shifts = []
    for t in (e.up, e.down):
        if t is not None:
            shifts += [abs(d) for d in t.shifts] + [t.period]
    return 2 * e.width() + 2 * max(shifts, default=1) + 8


def ep_preimage(e: BandedEndo, s: EPCSubgroup, ambient: EPCSubgroup,
                state_bound: int = DEFAULT_STATE_BOUND) -> EPCSubgroup:
    """{g in ambient : e(g) in s}."""
    p = e.p
    if s.p != p or ambient.p != p:
        raise ValueError("prime mismatch")
    if ambient.is_trivial:
        return ambient
    lo = ambient.base
    margin = _endo_margin(e)

    def window(n: int) -> np.ndarray:
        hi = 2 * n - lo + margin + 2 * ambient.period
        rows: list[SeqVector] = []
        active = e.active_rows(lo, hi)
        if active is not None:
            first, last = active
            if last is None:
                last = max(hi, s.base) + 4 * margin
            for v in s.vectors(min(first, s.base), last + s.width() + 1):
                pulled = RowFunctional(p)
                for m, c in v.terms():
                    pulled = pulled + e.row(m).scale(c)
                # coordinates below the ambient base vanish on the ambient
                pulled = RowFunctional(p, lo, [pulled[j] for j in range(lo, pulled.top + 1)])
                if not pulled.is_zero():
                    rows.append(pulled)
        top = max([hi] + [r.top + 1 for r in rows])
        rows += ambient.vectors(lo, top)
        mat = _rows_to_matrix(rows, lo, top, p)
        return gfp.span_below(mat, p, n - lo)[:, : n - lo]

    start = max(_check_bound(s, ambient), lo) + margin
    return normalize(p, lo, window, start, state_bound)[0]


def ep_image(e: BandedEndo, s: EPCSubgroup, horizon: int = DEFAULT_STATE_BOUND
             ) -> tuple[EPCSubgroup, Certificate]:
    """The compact image e(s) with the certificate of its detected periodicity."""
    p = e.p
    if s.is_trivial:
        return s, Certificate.exact(reason="image of the trivial subgroup")
    active = e.active_rows(s.base)
    if active is None:
        return EPCSubgroup.trivial(p), Certificate.exact(reason="endomorphism vanishes")
    lo = active[0]
    margin = _endo_margin(e)

    def window(n: int) -> np.ndarray:
        rows = [e.row(m) for m in range(lo, n)]
        tops = [r.top for r in rows if not r.is_zero() and r.top >= s.base]
        if not tops:
            return np.eye(n - lo, dtype=np.int64)
        hi = max(tops) + 1
        rmat = _rows_to_matrix([RowFunctional(p, s.base, [r[j] for j in range(s.base, hi)])
                                for r in rows], s.base, hi, p)
        cmat = s.window(s.base, hi)
        ker = gfp.left_kernel(np.vstack([rmat, cmat]), p)
        return ker[:, : n - lo] % p

    start = max(_check_bound(s), lo) + margin
    return normalize(p, lo, window, start, horizon)


# ---------------------------------------------------------------- universe


class LaurentUniverse:
    """Universe contract for F_p((t)) with banded endomorphisms."""

    has_exact_images = False
    has_subgroup_enumeration = False
    has_quotients = False

    def __init__(self, p: int, state_bound: int | None = None):
        self.p = p
        self.state_bound = state_bound or _STATE_BOUND.get()

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentUniverse) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("laurent", self.p))

    def trivial(self) -> EPCSubgroup:
        return EPCSubgroup.trivial(self.p)

    def member(self, x: SeqVector, s: EPCSubgroup) -> bool:
        return ep_member(x, s)

    def intersect(self, a: EPCSubgroup, b: EPCSubgroup) -> EPCSubgroup:
        return ep_intersect(a, b, self.state_bound)

    def preimage(self, e: BandedEndo, s: EPCSubgroup, ambient: EPCSubgroup) -> EPCSubgroup:
        return ep_preimage(e, s, ambient, self.state_bound)

    def image(self, e: BandedEndo, s: EPCSubgroup, horizon: int | None = None
              ) -> tuple[EPCSubgroup, Certificate]:
        return ep_image(e, s, horizon or self.state_bound)

    def index(self, a: EPCSubgroup, b: EPCSubgroup):
        return ep_index(a, b)

    def equal(self, a: EPCSubgroup, b: EPCSubgroup) -> bool:
        return a == b

    def le(self, a: EPCSubgroup, b: EPCSubgroup) -> bool:
        return ep_le(a, b)

    def join(self, a: EPCSubgroup, b: EPCSubgroup) -> EPCSubgroup:
        return ep_join(a, b, self.state_bound)

    def tilde(self, v: EPCSubgroup, l: EPCSubgroup) -> EPCSubgroup:
        # the group is abelian, so x*L = L*x for every x
        return v

    def compose(self, first: BandedEndo, second: BandedEndo) -> BandedEndo:
        return endo_compose(second, first)

    def power(self, e: BandedEndo, k: int) -> BandedEndo:
        return _power(e, k)

    def identity(self) -> BandedEndo:
        return BandedEndo.identity(self.p)

    def settle_steps(self, e: BandedEndo, *subs: EPCSubgroup) -> int:
        """A step count covering the exceptional structure of e and subs."""
        real = [s for s in subs if not s.is_trivial]
        if not real:
            return 3
        span = max(s.horizon_top() for s in real) - min(s.base for s in real)
        return span + (e.hi - e.lo) + max(s.period for s in real) + 2

    def extrapolate(self, history: Sequence[EPCSubgroup], reps: int = 3
                    ) -> tuple[EPCSubgroup, Certificate] | None:
        """Guess the limit of a monotone chain from the prefix its last terms agree on."""
        if len(history) < reps:
            return None
        last = history[-reps:]
        bases = [s.base for s in last if not s.is_trivial]
        steps = {b - a for a, b in zip(bases, bases[1:])}
        if len(bases) == reps and len(steps) == 1 and steps.pop() > 0:
            # bases climbing at a constant rate: the intersection is trivial
            return EPCSubgroup.trivial(self.p), Certificate.certified(
                len(history), base_escape=bases)
        if len({s.base for s in last}) != 1:
            return None
        lo = last[-1].base
        hi = max(_check_bound(s) for s in last) + 4
        agree = lo
        while agree < hi and len({repr(s.vector(agree)) for s in last}) == 1:
            agree += 1
        if agree - lo < 8:
            return None
        ref = last[-1]
        try:
            cand, cert = normalize(self.p, lo, lambda n: ref.window(lo, n), agree,
                                   self.state_bound, max_window=agree, confirm=False)
        except InconclusiveError:
            return None
        return cand, Certificate.certified(agree, agreed_prefix=[lo, agree],
                                           **cert.evidence)


@lru_cache(maxsize=256)
def _power(e: BandedEndo, k: int) -> BandedEndo:
    if k == 0:
        return BandedEndo.identity(e.p)
    if k == 1:
        return e
    return endo_compose(e, _power(e, k - 1))
