"""Exhaustive property suites over the finite catalog.

Each suite walks (group, endomorphism, subgroup) cases, checks one family of
identities with element-level brute force next to the engine's answer, and
returns a :class:`SuiteResult`.  Failures carry enough data to rebuild the
case as a fixture.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator

from . import engine as E
from .catalog import catalog, catalog_names, cyclic_product, enumerate_endos
from .finite import FiniteEndo, FiniteGroup, FiniteSubgroup, all_subgroups

__all__ = ["SuiteResult", "SUITES", "run_suite", "swap_case", "cases"]


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[dict] = field(default_factory=list)
    expected_failures: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, group: FiniteGroup, endo: FiniteEndo | None, what: str, **extra) -> None:
        rec = {"group": group.name, "check": what, **extra}
        if endo is not None:
            rec["endo"] = {"map": list(endo.image)}
            rec["table"] = group.table
        self.failures.append(rec)


@lru_cache(maxsize=None)
def _subgroups(name: str) -> tuple[FiniteSubgroup, ...]:
    return tuple(all_subgroups(catalog(name)))


@lru_cache(maxsize=None)
def _endos(name: str, seed: int) -> tuple[FiniteEndo, ...]:
    return tuple(enumerate_endos(catalog(name), seed=seed))


@lru_cache(maxsize=None)
def _fixture_cases() -> tuple:
    from .fixtures import fixture_problem, registry

    out = []
    for name, entry in sorted(registry().items()):
        if entry["universe"] == "finite":
            prob = fixture_problem(name)
            out.append((prob.group, prob.alpha, tuple(all_subgroups(prob.group))))
    return tuple(out)


def cases(max_order: int, seed: int = 0) -> Iterator[tuple[FiniteGroup, FiniteEndo, tuple]]:
    """(group, endo, all subgroups) over the catalog up to ``max_order``, then the finite fixtures."""
    for name in catalog_names(max_order):
        g = catalog(name)
        subs = _subgroups(name)
        for e in _endos(name, seed):
            yield g, e, subs
    yield from _fixture_cases()


def swap_case(p: int = 2) -> tuple[FiniteGroup, FiniteEndo, FiniteSubgroup]:
    """C_p x C_p with the coordinate swap and W = {(0, c)}."""
    g = cyclic_product([p, p], name=f"C{p}xC{p}")
    pos = {lab: i for i, lab in enumerate(g.labels)}
    swap = FiniteEndo(g, tuple(pos[(b, a)] for a, b in g.labels))
    w = FiniteSubgroup(frozenset(pos[(0, c)] for c in range(p)))
    return g, swap, w


# ------------------------------------------------------------------ helpers


def _minus_terms(e, u, k: int) -> list[FiniteSubgroup]:
    return E.minus_chain(e, u, k).terms


def _plus_terms(e, u, k: int) -> list[FiniteSubgroup]:
    return E.plus_chain(e, u, k).terms


def _prod(g: FiniteGroup, a: FiniteSubgroup, b: FiniteSubgroup) -> frozenset:
    return g.universe.product_set(a, b)


def _tidy(e, w) -> bool:
    return E.check_tidy(e, w).tidy


def _direct_l_set(g: FiniteGroup, e: FiniteEndo, u: FiniteSubgroup) -> frozenset:
    """The L-set straight from its definition: x = alpha^m(y), y in U_+, alpha^n(x) in U_-."""
    up, _ = E.u_plus(e, u)
    um, _ = E.u_minus(e, u)
    n = g.order
    out = set()
    for y in up.members:
        orbit = [y]
        for _ in range(2 * n):
            orbit.append(e(orbit[-1]))
        for m in range(n + 1):
            x = orbit[m]
            if any(orbit[m + k] in um.members for k in range(n + 1)):
                out.add(x)
    return frozenset(out)


# ------------------------------------------------------------------ suites


def suite_tidy_iff_minimizing(max_order: int = 12, seed: int = 0) -> SuiteResult:
    res = SuiteResult("tidy-iff-minimizing")
    for g, e, subs in cases(max_order, seed):
        u = g.universe
        for w in subs:
            res.cases += 1
            if _tidy(e, w) != u.le(u.image(e, w)[0], w):
                res.fail(g, e, "tidy <=> alpha(U) <= U", subgroup=list(w.elements))
    return res


def suite_stable(max_order: int = 16, seed: int = 0, depth: int = 4) -> SuiteResult:
    res = SuiteResult("stable")
    for g, e, subs in cases(max_order, seed):
        u = g.universe
        for U in subs:
            res.cases += 1
            img = u.image(e, U)[0]
            direct = img.order // u.intersect(img, U).order
            if E.displacement_index(e, U) != direct:
                res.fail(g, e, "displacement via preimage", subgroup=list(U.elements))
            minus = _minus_terms(e, U, 2 * depth + 1)
            plus = _plus_terms(e, U, depth)
            for j in range(depth + 1):
                for m in range(depth + 1):
                    for l in range(m + 1):
                        left = u.index(u.intersect(plus[j], minus[l]), u.intersect(plus[j], minus[m]))
                        right = u.index(minus[j + l], minus[j + m])
                        if left != right:
                            res.fail(g, e, "index bridge", subgroup=list(U.elements), j=j, l=l, m=m)
            up, _ = E.u_plus(e, U)
            long_plus = _plus_terms(e, U, g.order)
            seq = [u.index(t, u.intersect(t, minus[1])) for t in long_plus]
            if any(b > a for a, b in zip(seq, seq[1:])):
                res.fail(g, e, "non-increasing", subgroup=list(U.elements))
            limit = u.index(up, u.intersect(up, minus[1]))
            cover = _prod(g, up, minus[1])
            for t, val in zip(long_plus, seq):
                if t.members <= cover and val != limit:
                    res.fail(g, e, "stabilises at the U_+ value", subgroup=list(U.elements))
    return res


def suite_equivalents(max_order: int = 16, seed: int = 0, depth: int = 4) -> SuiteResult:
    res = SuiteResult("equivalents")
    for g, e, subs in cases(max_order, seed):
        for U in subs:
            res.cases += 1
            up, _ = E.u_plus(e, U)
            um, _ = E.u_minus(e, U)
            minus = _minus_terms(e, U, depth + 1)
            c1 = _prod(g, up, minus[1]) == U.members
            c2 = all(_prod(g, E.u_plus(e, minus[n])[0], minus[n + 1]) == minus[n].members
                     for n in range(depth + 1))
            c3 = all(_prod(g, up, minus[n]) == U.members for n in range(depth + 1))
            c4 = _prod(g, up, um) == U.members
            ta = E.is_tidy_above(e, U)
            if len({c1, c2, c3, c4, ta}) != 1:
                res.fail(g, e, "TA equivalences", subgroup=list(U.elements),
                         verdicts=[c1, c2, c3, c4, ta])
    return res


def _tidy_list(e, subs) -> list[FiniteSubgroup]:
    return [w for w in subs if _tidy(e, w)]


def suite_intersection(max_order: int = 16, seed: int = 0) -> SuiteResult:
    """Intersections of tidy subgroups are tidy, with U_+ and U_- distributing."""
    res = SuiteResult("intersection")
    for g, e, subs in cases(max_order, seed):
        u = g.universe
        tidy = _tidy_list(e, subs)
        parts = {w: (E.u_plus(e, w)[0], E.u_minus(e, w)[0]) for w in tidy}
        for i, w1 in enumerate(tidy):
            for w2 in tidy[i:]:
                res.cases += 1
                both = u.intersect(w1, w2)
                if not _tidy(e, both):
                    res.fail(g, e, "intersection tidy", w1=list(w1.elements), w2=list(w2.elements))
                plus, minus = E.u_plus(e, both)[0], E.u_minus(e, both)[0]
                if plus != u.intersect(parts[w1][0], parts[w2][0]) or \
                        minus != u.intersect(parts[w1][1], parts[w2][1]):
                    res.fail(g, e, "(W1 & W2)_+- = W1_+- & W2_+-",
                             w1=list(w1.elements), w2=list(w2.elements))
    return res


def suite_scalesame(max_order: int = 16, seed: int = 0) -> SuiteResult:
    res = SuiteResult("scalesame")
    for g, e, subs in cases(max_order, seed):
        values = {int(E.displacement_index(e, w)) for w in _tidy_list(e, subs)}
        res.cases += 1
        if len(values) != 1:
            res.fail(g, e, "tidy displacements differ", values=sorted(values))
    return res


def suite_powers(max_order: int = 16, seed: int = 0, top: int = 4) -> SuiteResult:
    res = SuiteResult("powers")
    for g, e, subs in cases(max_order, seed):
        powers = [e.power(k) for k in range(2, top + 1)]
        for w in _tidy_list(e, subs):
            res.cases += 1
            for k, ek in enumerate(powers, start=2):
                if not _tidy(ek, w):
                    res.fail(g, e, "tidy for alpha^k", subgroup=list(w.elements), k=k)
    return res


def suite_powers_converse_fails(primes=(2, 3)) -> SuiteResult:
    """The swap on C_p^2: W = {(0, c)} is tidy for alpha^2 but not for alpha."""
    res = SuiteResult("powers-converse-fails")
    for p in primes:
        g, swap, w = swap_case(p)
        res.cases += 1
        tidy2, tidy1 = _tidy(swap.power(2), w), _tidy(swap, w)
        if tidy2 and not tidy1:
            res.expected_failures += 1
        else:
            res.fail(g, swap, "converse counterexample not reproduced", tidy_alpha2=tidy2,
                     tidy_alpha=tidy1)
    return res


def suite_alphan(max_order: int = 16, seed: int = 0, top: int = 3) -> SuiteResult:
    res = SuiteResult("alphan")
    for g, e, subs in cases(max_order, seed):
        u = g.universe
        for w in _tidy_list(e, subs):
            wp, _ = E.u_plus(e, w)
            for n in range(top + 1):
                res.cases += 1
                low, fam = E.iterate_tidy_family(e, w, n)
                if not (_tidy(e, low) and _tidy(e, fam)):
                    res.fail(g, e, "W_[n] and W^[alpha,n] tidy", subgroup=list(w.elements), n=n)
                if not u.le(u.image(e.power(n), wp)[0], fam):
                    res.fail(g, e, "alpha^n(W_+) <= W^[alpha,n]", subgroup=list(w.elements), n=n)
                if g.is_abelian and n == 1 and low != w:
                    res.fail(g, e, "abelian W_[1] = W", subgroup=list(w.elements))
    return res


def suite_tidy_subgroups(max_order: int = 16, seed: int = 0, top: int = 3) -> SuiteResult:
    res = SuiteResult("tidy-subgroups")
    for g, e, subs in cases(max_order, seed):
        u = g.universe
        tidy = _tidy_list(e, subs)
        for w in tidy:
            res.cases += 1
            for n, wn in enumerate(_minus_terms(e, w, top)):
                if not _tidy(e, wn):
                    res.fail(g, e, "W_-n tidy", subgroup=list(w.elements), n=n)
            core = u.intersect(E.u_plus(e, w)[0], E.u_minus(e, w)[0])
            meet = frozenset(w.members)
            for h in tidy:
                if core.members <= h.members <= w.members:
                    meet &= h.members
            if meet != core.members:
                res.fail(g, e, "W_+ & W_- is the meet of tidy subgroups between",
                         subgroup=list(w.elements))
    return res


def suite_ik_nub_par(max_order: int = 16, seed: int = 0) -> SuiteResult:
    res = SuiteResult("ik-nub-par")
    for g, e, subs in cases(max_order, seed):
        u = g.universe
        res.cases += 1
        try:
            d = E.dynamics_subgroups(e)
        except (AssertionError, ValueError) as exc:
            res.fail(g, e, f"dynamics subgroups: {exc}")
            continue
        if not (u.le(d["bik"], d["nub"]) and u.le(d["nub"], d["lev"])):
            res.fail(g, e, "bik <= nub <= lev")
        if not d["quotient_bijective"]:
            res.fail(g, e, "induced map on par-/bik bijective")
        # nub is also the intersection of W_+ & W_- over tidy W
        meet = frozenset(range(g.order))
        for w in _tidy_list(e, subs):
            meet &= u.intersect(E.u_plus(e, w)[0], E.u_minus(e, w)[0]).members
        if meet != d["nub"].members:
            res.fail(g, e, "nub equals the meet of W_+ & W_- over tidy W")
    return res


def suite_exposure(max_order: int = 16, seed: int = 0) -> SuiteResult:
    """L_V = (alpha^E(V_+) & L_V)(V_- & L_V) for some E <= |G|, V tidy above."""
    res = SuiteResult("exposure")
    for g, e, subs in cases(max_order, seed):
        u = g.universe
        for v in subs:
            if not E.is_tidy_above(e, v):
                continue
            res.cases += 1
            lv, _ = E.script_l(e, v)
            vp, _ = E.u_plus(e, v)
            vm, _ = E.u_minus(e, v)
            right = u.intersect(vm, lv)
            cur = vp
            for _ in range(g.order + 1):
                if _prod(g, u.intersect(cur, lv), right) == lv.members:
                    break
                cur = u.image(e, cur)[0]
            else:
                res.fail(g, e, "no exposure exponent", subgroup=list(v.elements))
    return res


def suite_l_identity(max_order: int = 16, seed: int = 0, depth: int = 3) -> SuiteResult:
    """L-set from V_++ & V_-- against its definition, and invariance along U_-n."""
    res = SuiteResult("l-identity")
    for g, e, subs in cases(max_order, seed):
        for U in subs:
            res.cases += 1
            lu, _ = E.script_l(e, U)
            if lu.members != _direct_l_set(g, e, U):
                res.fail(g, e, "V_++ & V_-- equals the definition", subgroup=list(U.elements))
            um, _ = E.u_minus(e, U)
            for n, un in enumerate(_minus_terms(e, U, depth)):
                if E.script_l(e, un)[0] != lu or E.u_minus(e, un)[0] != um:
                    res.fail(g, e, "L and U_- invariant along the minus chain",
                             subgroup=list(U.elements), n=n)
    return res


def suite_moller_bridge(max_order: int = 12, seed: int = 0, top: int = 4) -> SuiteResult:
    """[alpha^n(U) : alpha^n(U) & U] by coset counting against [U : U & alpha^-n(U)]."""
    res = SuiteResult("moller-bridge")
    for g, e, subs in cases(max_order, seed):
        u = g.universe
        t = g.table
        for U in subs:
            for n in range(1, top + 1):
                res.cases += 1
                en = e.power(n)
                img = u.image(en, U)[0]
                meet = u.intersect(img, U).members
                cosets = {frozenset(t[x][y] for y in meet) for x in img.members}
                if len(cosets) != u.index(U, u.preimage(en, U, U)):
                    res.fail(g, e, "bridge", subgroup=list(U.elements), n=n)
    return res


def suite_bounded(max_order: int = 16, seed: int = 0) -> SuiteResult:
    """For tidy W: elements with a regressive sequence lie in W_+, and all lie in W_-."""
    res = SuiteResult("bounded")
    for g, e, subs in cases(max_order, seed):
        u = g.universe
        regressive = E.dynamics_subgroups(e)["par_minus"]
        for w in _tidy_list(e, subs):
            res.cases += 1
            wp, wm = E.u_plus(e, w)[0], E.u_minus(e, w)[0]
            if not u.intersect(w, regressive).members <= wp.members:
                res.fail(g, e, "regressive elements in W_+", subgroup=list(w.elements))
            if wm != w:
                res.fail(g, e, "forward orbits in W_-", subgroup=list(w.elements))
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "tidy-iff-minimizing": suite_tidy_iff_minimizing,
    "stable": suite_stable,
    "equivalents": suite_equivalents,
    "intersection": suite_intersection,
    "scalesame": suite_scalesame,
    "powers": suite_powers,
    "powers-converse-fails": suite_powers_converse_fails,
    "alphan": suite_alphan,
    "tidy-subgroups": suite_tidy_subgroups,
    "ik-nub-par": suite_ik_nub_par,
    "exposure": suite_exposure,
    "l-identity": suite_l_identity,
    "moller-bridge": suite_moller_bridge,
    "bounded": suite_bounded,
}


def run_suite(name: str, **kw) -> SuiteResult:
    try:
        fn = SUITES[name]
    except KeyError:
        raise KeyError(f"unknown property suite {name!r}; choose from {sorted(SUITES)}") from None
    if name == "powers-converse-fails":
        kw.pop("max_order", None)
        kw.pop("seed", None)
    return fn(**kw)
