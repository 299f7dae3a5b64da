"""Finitely supported sequences over GF(p) and banded eventually periodic endomorphisms."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "SeqVector",
    "RowFunctional",
    "Tail",
    "BandedEndo",
    "validate_endo",
    "endo_compose",
    "EndoError",
]


def _trim(offset: int, coeffs: Sequence[int], p: int) -> tuple[int, tuple[int, ...]]:
    c = [int(x) % p for x in coeffs]
    lo = 0
    while lo < len(c) and c[lo] == 0:
        lo += 1
    hi = len(c)
    while hi > lo and c[hi - 1] == 0:
        hi -= 1
    if lo == hi:
        return 0, ()
    return offset + lo, tuple(c[lo:hi])


@dataclass(frozen=True, init=False)
class SeqVector:
    """A finite sum of c_n t^n with coefficients in GF(p), trimmed on both sides."""

    p: int
    offset: int
    coeffs: tuple[int, ...]

    def __init__(self, p: int, offset: int = 0, coeffs: Sequence[int] = ()):
        off, c = _trim(offset, coeffs, p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "offset", off)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_terms(cls, p: int, terms: Iterable[tuple[int, int]]) -> "SeqVector":
        terms = [(int(n), int(c)) for n, c in terms]
        if not terms:
            return cls(p)
        lo = min(n for n, _ in terms)
        hi = max(n for n, _ in terms)
        buf = [0] * (hi - lo + 1)
        for n, c in terms:
            buf[n - lo] += c
        return cls(p, lo, buf)

    @classmethod
    def unit(cls, p: int, n: int) -> "SeqVector":
        return cls(p, n, (1,))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def bottom(self) -> int:
        return self.offset

    @property
    def top(self) -> int:
        return self.offset + len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        k = n - self.offset
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def terms(self) -> list[tuple[int, int]]:
        return [(self.offset + i, c) for i, c in enumerate(self.coeffs) if c]

    def shift(self, k: int) -> "SeqVector":
        return type(self)(self.p, self.offset + k, self.coeffs)

    def scale(self, a: int) -> "SeqVector":
        return type(self)(self.p, self.offset, [a * c for c in self.coeffs])

    def __add__(self, other: "SeqVector") -> "SeqVector":
        if other.is_zero():
            return self
        if self.is_zero():
            return type(self)(other.p, other.offset, other.coeffs)
        lo = min(self.offset, other.offset)
        hi = max(self.top, other.top)
        buf = [self[n] + other[n] for n in range(lo, hi + 1)]
        return type(self)(self.p, lo, buf)

    def __neg__(self) -> "SeqVector":
        return self.scale(-1)

    def __sub__(self, other: "SeqVector") -> "SeqVector":
        return self + (-other)

    def dot(self, other: "SeqVector") -> int:
        if self.is_zero() or other.is_zero():
            return 0
        lo = max(self.offset, other.offset)
        hi = min(self.top, other.top)
        return sum(self[n] * other[n] for n in range(lo, hi + 1)) % self.p

    def valuation(self) -> float:
        return float("inf") if self.is_zero() else self.offset

    def to_json(self) -> list[list[int]]:
        return [[n, c] for n, c in self.terms()]

    def __repr__(self) -> str:
        if self.is_zero():
            return f"{type(self).__name__}(0)"
        body = " + ".join(f"{c}*t^{n}" if c != 1 else f"t^{n}" for n, c in self.terms())
        return f"{type(self).__name__}({body})"


class RowFunctional(SeqVector):
    """A coordinate functional g -> sum_n c_n g_n with finite support."""


class EndoError(ValueError):
    """Raised when a banded endomorphism description is invalid."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class Tail:
    """Row family repeating with ``period``; phase i moves by ``shifts[i]`` each period."""

    period: int
    shifts: tuple[int, ...]
    templates: tuple[RowFunctional, ...]

    @classmethod
    def make(cls, period: int, shift, templates: Sequence[RowFunctional]) -> "Tail":
        shifts = tuple(shift) if isinstance(shift, (list, tuple)) else (int(shift),) * period
        templates = tuple(templates)
        # a zero phase has no meaningful shift; give it the first live one
        live = [int(d) for d, t in zip(shifts, templates) if not t.is_zero()]
        shifts = tuple(int(d) if not t.is_zero() or not live else live[0]
                       for d, t in zip(shifts, templates))
        return cls(int(period), shifts, templates)


@dataclass(frozen=True)
class BandedEndo:
    """A continuous linear endomorphism of F_p((t)) given by its coordinate rows.

    Output coordinate n is ``row(n) . g``.  Rows in ``[lo, hi)`` are listed
    explicitly (missing ones are zero).  Row ``hi + k*period + i`` is template
    ``i`` of ``up`` shifted by ``k * shifts[i]``; row ``lo - 1 - (k*period + i)``
    is template ``i`` of ``down`` shifted by ``-k * shifts[i]``.  A ``None``
    tail is identically zero.
    """

    p: int
    lo: int
    hi: int
    exceptional: tuple[tuple[int, RowFunctional], ...] = ()
    up: Tail | None = None
    down: Tail | None = None
    name: str = field(default="", compare=False)

    @lru_cache(maxsize=None)
    def _exc(self) -> dict:
        return dict(self.exceptional)

    @lru_cache(maxsize=65536)
    def row(self, n: int) -> RowFunctional:
        if self.lo <= n < self.hi:
            return self._exc().get(n, RowFunctional(self.p))
        if n >= self.hi:
            if self.up is None:
                return RowFunctional(self.p)
            k, ph = divmod(n - self.hi, self.up.period)
            return self.up.templates[ph].shift(k * self.up.shifts[ph])
        if self.down is None:
            return RowFunctional(self.p)
        k, ph = divmod(self.lo - 1 - n, self.down.period)
        return self.down.templates[ph].shift(-k * self.down.shifts[ph])

    @property
    def universe(self):
        from .laurent import LaurentUniverse

        return LaurentUniverse(self.p)

    def width(self) -> int:
        rows = [r for _, r in self.exceptional]
        for tail in (self.up, self.down):
            if tail is not None:
                rows.extend(tail.templates)
        return max((r.top - r.bottom for r in rows if not r.is_zero()), default=0)

    def active_rows(self, lo_coord: int, hi_coord: int | None = None
                    ) -> tuple[int, int | None] | None:
        """Smallest and largest row whose support meets [lo_coord, hi_coord].

        The largest is None when infinitely many rows are active; the result is
        None when no row is active.
        """
        def meets(r: RowFunctional) -> bool:
            return (not r.is_zero() and r.top >= lo_coord
                    and (hi_coord is None or r.bottom <= hi_coord))

        found = [n for n, r in self.exceptional if meets(r)]
        unbounded = False
        for tail, sign in ((self.down, -1), (self.up, 1)):
            if tail is None:
                continue
            start = self.lo - 1 if sign < 0 else self.hi
            for ph, (tpl, d) in enumerate(zip(tail.templates, tail.shifts)):
                if tpl.is_zero():
                    continue
                move = sign * d            # support moves by `move` per period
                base_n = start + sign * ph
                if move == 0:
                    if meets(tpl):
                        if sign > 0:
                            unbounded = True
                        found.append(base_n)
                    continue
                # k range for which the shifted support meets the window
                lo_k, hi_k = 0, None
                if move > 0:
                    lo_k = max(0, -((tpl.top - lo_coord) // move))
                    if hi_coord is not None:
                        hi_k = (hi_coord - tpl.bottom) // move
                else:
                    hi_k = (tpl.top - lo_coord) // (-move)
                    if hi_coord is not None:
                        lo_k = max(0, -((hi_coord - tpl.bottom) // (-move)))
                if hi_k is None:
                    unbounded = unbounded or sign > 0
                    found.append(base_n + sign * lo_k * tail.period)
                    if sign < 0:
                        raise EndoError(["output support unbounded below"])
                    continue
                if hi_k < lo_k:
                    continue
                found.append(base_n + sign * lo_k * tail.period)
                found.append(base_n + sign * hi_k * tail.period)
        if not found:
            return None
        return min(found), (None if unbounded else max(found))

    def apply(self, g: SeqVector) -> SeqVector:
        """Image of a finitely supported sequence (must have finitely supported image)."""
        if g.is_zero():
            return SeqVector(self.p)
        active = self.active_rows(g.bottom, g.top)
        if active is None:
            return SeqVector(self.p)
        first, last = active
        if last is None:
            raise EndoError(["image of a finite sequence is not finitely supported"])
        return SeqVector.from_terms(
            self.p, [(n, self.row(n).dot(g)) for n in range(first, last + 1)])

    def to_json(self) -> dict:
        def tail(t: Tail | None):
            if t is None:
                return "zero"
            shift = t.shifts[0] if len(set(t.shifts)) == 1 else list(t.shifts)
            return {"period": t.period, "shift": shift,
                    "templates": [r.to_json() for r in t.templates]}

        return {
            "p": self.p,
            "lo": self.lo,
            "hi": self.hi,
            "exceptional": {str(n): r.to_json() for n, r in self.exceptional if not r.is_zero()},
            "up_tail": tail(self.up),
            "down_tail": tail(self.down),
        }

    @classmethod
    def from_json(cls, d: dict, name: str = "") -> "BandedEndo":
        p = int(d["p"])
        exc = {int(k): RowFunctional.from_terms(p, v) for k, v in d.get("exceptional", {}).items()}
        lo = int(d["lo"]) if "lo" in d else (min(exc) if exc else 0)
        hi = int(d["hi"]) if "hi" in d else (max(exc) + 1 if exc else lo)

        def tail(t):
            if t is None or t == "zero":
                return None
            tpls = [RowFunctional.from_terms(p, x) for x in t["templates"]]
            return Tail.make(int(t["period"]), t.get("shift", 0), tpls)

        e = cls(p, lo, hi, tuple(sorted((n, r) for n, r in exc.items() if not r.is_zero())),
                tail(d.get("up_tail")), tail(d.get("down_tail")), name)
        validate_endo(e)
        return e

    @classmethod
    def identity(cls, p: int) -> "BandedEndo":
        one = (RowFunctional.unit(p, 0),)
        return cls(p, 0, 0, (), Tail(1, (1,), one), Tail(1, (1,), (RowFunctional.unit(p, -1),)),
                   "identity")

    @classmethod
    def zero(cls, p: int) -> "BandedEndo":
        return cls(p, 0, 0, (), None, None, "zero")


def validate_endo(e: BandedEndo) -> None:
    """Raise EndoError listing every violated structural condition."""
    problems: list[str] = []
    if e.p < 2 or any(e.p % k == 0 for k in range(2, int(e.p**0.5) + 1)):
        problems.append(f"p={e.p} is not prime")
    if e.lo > e.hi:
        problems.append(f"lo={e.lo} exceeds hi={e.hi}")
    for n, r in e.exceptional:
        if not e.lo <= n < e.hi:
            problems.append(f"exceptional row {n} outside [{e.lo}, {e.hi})")
        if r.p != e.p:
            problems.append(f"row {n} has the wrong prime")
    for label, tail in (("up", e.up), ("down", e.down)):
        if tail is None:
            continue
        if tail.period < 1:
            problems.append(f"{label}-tail period must be positive")
        if len(tail.templates) != tail.period or len(tail.shifts) != tail.period:
            problems.append(f"{label}-tail needs one template and shift per phase")
    if e.down is not None:
        for ph, (tpl, d) in enumerate(zip(e.down.templates, e.down.shifts)):
            if not tpl.is_zero() and d < 1:
                problems.append(f"output support unbounded below (down-tail phase {ph}, "
                                f"row {e.lo - 1 - ph})")
    if problems:
        raise EndoError(problems)


def _detect_tail(rowf, start: int, step: int, span: int, max_period: int):
    """Find (period, shifts) with row(n + step*period) == row(n) shifted, for n from start."""
    for q in range(1, max_period + 1):
        shifts = []
        ok = True
        for ph in range(q):
            n = start + step * ph
            a = rowf(n)
            b = rowf(n + step * q)
            if a.is_zero() != b.is_zero():
                ok = False
                break
            d = 0 if a.is_zero() else (b.offset - a.offset)
            if not a.is_zero() and a.shift(d).coeffs != b.coeffs:
                ok = False
                break
            shifts.append(d * step)
        if not ok:
            continue
        # confirm over a long stretch
        for k in range(q, span):
            ph = k % q
            n = start + step * k
            a, b = rowf(n), rowf(n + step * q)
            if a.is_zero() != b.is_zero():
                ok = False
                break
            if not a.is_zero() and (b.offset - a.offset != shifts[ph] * step or b.coeffs != a.coeffs):
                ok = False
                break
        if ok:
            return q, shifts
    return None


def endo_compose(e1: BandedEndo, e2: BandedEndo, max_period: int = 48) -> BandedEndo:
    """The composite e1 o e2 (apply e2 first), with its tail structure recovered."""
    if e1.p != e2.p:
        raise ValueError("cannot compose endomorphisms over different primes")
    p = e1.p

    @lru_cache(maxsize=None)
    def rowf(n: int) -> RowFunctional:
        acc = RowFunctional(p)
        for m, c in e1.row(n).terms():
            acc = acc + e2.row(m).scale(c)
        return acc

    base_hi = max(e1.hi, e2.hi) + 2 * (abs(e1.hi) + abs(e2.hi)) + 8
    base_lo = min(e1.lo, e2.lo) - 2 * (abs(e1.lo) + abs(e2.lo)) - 8
    span = 4 * max_period
    up = _detect_tail(rowf, base_hi, 1, span, max_period)
    down = _detect_tail(rowf, base_lo, -1, span, max_period)
    if up is None or down is None:
        raise EndoError(["composite rows have no detectable periodic tail"])
    qu, su = up
    qd, sd = down

    def same_shifted(a: RowFunctional, b: RowFunctional, d: int) -> bool:
        if a.is_zero() or b.is_zero():
            return a.is_zero() and b.is_zero()
        return b.offset - a.offset == d and b.coeffs == a.coeffs

    # pull the tail boundaries inwards as far as the pattern persists, keeping
    # hi from running past coordinate 0 so that uniform maps stay anchored there
    floor = min(max(0, base_lo + 1), base_hi)
    hi = base_hi
    while hi - 1 >= floor and same_shifted(rowf(hi - 1), rowf(hi - 1 + qu),
                                            su[(hi - 1 - base_hi) % qu]):
        hi -= 1
    lo = base_lo + 1
    while lo < hi and same_shifted(rowf(lo), rowf(lo - qd), -sd[(base_lo - lo) % qd]):
        lo += 1
    up_tail = Tail.make(qu, [su[(hi + k - base_hi) % qu] for k in range(qu)],
                        [rowf(hi + k) for k in range(qu)])
    down_tail = Tail.make(qd, [sd[(base_lo - (lo - 1 - k)) % qd] for k in range(qd)],
                          [rowf(lo - 1 - k) for k in range(qd)])
    if all(t.is_zero() for t in up_tail.templates):
        up_tail = None
    if all(t.is_zero() for t in down_tail.templates):
        down_tail = None
    exc = tuple((n, rowf(n)) for n in range(lo, hi) if not rowf(n).is_zero())
    out = BandedEndo(p, lo, hi, exc, up_tail, down_tail,
                     f"({e1.name or 'e1'})o({e2.name or 'e2'})")
    validate_endo(out)
    for n in range(lo - 3 * qd - 4, hi + 3 * qu + 4):
        assert out.row(n) == rowf(n), f"composite tail mismatch at row {n}"
    return out
