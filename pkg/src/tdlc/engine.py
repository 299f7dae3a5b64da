"""Universe-agnostic chains, tidiness tests, the tidying procedure and the scale.

Every function takes an endomorphism ``alpha`` whose ``universe`` attribute
provides the subgroup operations (intersect, preimage, image, index, equality,
containment, join, composition).  Finite universes answer exactly; the
sequence universe returns certificates for every limit object.
"""

from __future__ import annotations

from typing import Callable

from .core import (
    INFINITE,
    CapabilityError,
    Certificate,
    ChainRecord,
    InconclusiveError,
    Index,
    ScaleResult,
    TidinessReport,
    TidyTrace,
    weakest,
)

__all__ = [
    "displacement_index",
    "minus_chain",
    "plus_chain",
    "u_plus",
    "u_minus",
    "is_tidy_above",
    "tidy_above_step",
    "v_plus_plus",
    "v_minus_minus",
    "script_l",
    "k_group",
    "check_tidy",
    "tidy_step3",
    "tidying_procedure",
    "scale",
    "moller_scale",
    "iterate_tidy_family",
    "dynamics_subgroups",
    "DEFAULT_HORIZON",
    "DEFAULT_MOLLER_N",
]

DEFAULT_HORIZON = 64
DEFAULT_MOLLER_N = 8


def _u(alpha):
    return alpha.universe


def _exact(u) -> bool:
    return bool(getattr(u, "has_exact_images", False))


def displacement_index(alpha, U) -> Index:
    """[alpha(U) : alpha(U) & U], computed as [U : U & alpha^-1(U)]."""
    u = _u(alpha)
    return u.index(U, u.preimage(alpha, U, U))


def minus_chain(alpha, U, n: int) -> ChainRecord:
    """U_0 = U, U_{-k-1} = U & alpha^-1(U_{-k}); step k records [U_{-k} : U_{-k-1}]."""
    if n < 0:
        raise ValueError("chain length must be non-negative")
    u = _u(alpha)
    terms = [U]
    for _ in range(n):
        terms.append(u.preimage(alpha, terms[-1], U))
    steps = [u.index(terms[k], terms[k + 1]) for k in range(n)]
    return ChainRecord("minus", terms, steps)


def plus_chain(alpha, U, n: int, horizon: int | None = None) -> ChainRecord:
    """U_0 = U, U_{k+1} = U & alpha(U_k); step k records [U_k : U_k & U_{-1}]."""
    if n < 0:
        raise ValueError("chain length must be non-negative")
    u = _u(alpha)
    terms = [U]
    certs = []
    for _ in range(n):
        img, cert = u.image(alpha, terms[-1], horizon)
        if not cert.ok:
            raise InconclusiveError("image not certified", cert)
        certs.append(cert)
        terms.append(u.intersect(U, img))
    u1 = u.preimage(alpha, U, U)
    steps = [u.index(t, u.intersect(t, u1)) for t in terms]
    return ChainRecord("plus", terms, steps, weakest(*certs))


def _limit(u, step: Callable, start, horizon: int, decreasing: bool, what: str):
    """Limit of the monotone chain start, step(start), ... with a certificate.

    Exact stabilisation is a true fixpoint of ``step``.  Otherwise the
    universe may propose a limit from the prefix on which the latest terms
    agree; it is accepted only if it is itself a fixpoint of ``step`` and lies
    on the correct side of the last term.
    """
    history = [start]
    certs = []
    for k in range(horizon):
        nxt, cert = step(history[-1])
        certs.append(cert)
        if u.equal(nxt, history[-1]):
            if _exact(u):
                return nxt, Certificate.exact(stabilized_at=k)
            return nxt, weakest(Certificate.certified(k + 1, stabilized_at=k), *certs)
        history.append(nxt)
        guess = u.extrapolate(history) if hasattr(u, "extrapolate") and k >= 3 else None
        if guess is not None:
            cand, gcert = guess
            again, _ = step(cand)
            side_ok = u.le(cand, nxt) if decreasing else u.le(nxt, cand)
            if u.equal(again, cand) and side_ok:
                return cand, weakest(Certificate.certified(
                    k + 1, fixpoint_checked=True, extrapolated=True, **gcert.evidence), *certs)
    raise InconclusiveError(f"{what} did not stabilise within {horizon} steps",
                            Certificate.inconclusive(horizon, what=what))


def u_plus(alpha, U, horizon: int = DEFAULT_HORIZON):
    """Greatest fixpoint of X -> U & alpha(X) below U, with certificate."""
    u = _u(alpha)

    def step(x):
        img, cert = u.image(alpha, x, None)
        if not cert.ok:
            raise InconclusiveError("image not certified", cert)
        return u.intersect(U, img), cert

    res, cert = _limit(u, step, U, horizon, True, "plus chain")
    img, _ = u.image(alpha, res, None)
    assert u.le(res, img), "alpha(U_+) must contain U_+"
    assert u.equal(u.intersect(U, img), res), "U & alpha(U_+) must equal U_+"
    return res, cert


def u_minus(alpha, U, horizon: int = DEFAULT_HORIZON):
    """Intersection of the minus chain, with certificate."""
    u = _u(alpha)

    def step(x):
        return u.preimage(alpha, x, U), Certificate.exact()

    return _limit(u, step, U, horizon, True, "minus chain")


def is_tidy_above(alpha, U, horizon: int = DEFAULT_HORIZON, plus=None) -> bool:
    """U = U_+ U_{-1}, decided by comparing [U : U_{-1}] with [U_+ : U_+ & U_{-1}]."""
    u = _u(alpha)
    up = plus if plus is not None else u_plus(alpha, U, horizon)[0]
    u1 = u.preimage(alpha, U, U)
    return u.index(U, u1) == u.index(up, u.intersect(up, u1))


def tidy_above_step(alpha, U, horizon: int = DEFAULT_HORIZON):
    """Smallest N with U_{-N} tidy above, and V = U_{-N}.

    (U_{-n})_+ = U_+ & U_{-n} and (U_{-n})_{-1} = U_{-n-1}, so only one fixpoint
    is computed.
    """
    u = _u(alpha)
    up, _ = u_plus(alpha, U, horizon)
    cur = U
    for n in range(horizon + 1):
        nxt = u.preimage(alpha, cur, U)
        cur_plus = u.intersect(up, cur)
        if u.index(cur, nxt) == u.index(cur_plus, u.intersect(cur_plus, nxt)):
            return n, cur
        cur = nxt
    raise InconclusiveError(f"no tidy-above U_-n for n <= {horizon}")


def _stable_chain(u, step, start, cap: int, increasing: bool):
    """Iterate a chain determined by its predecessor until it repeats (finite universes)."""
    cur = start
    for _ in range(cap):
        nxt = step(cur)
        if u.equal(nxt, cur):
            return cur
        cur = nxt
    raise AssertionError("chain failed to stabilise in a finite group")


def v_plus_plus(alpha, V, plus=None):
    """Union of alpha^n(V_+) (finite universes only)."""
    u = _u(alpha)
    if not _exact(u):
        raise CapabilityError("V_++ is not compact in general; use script_l")
    vp = plus if plus is not None else u_plus(alpha, V)[0]
    return _stable_chain(u, lambda x: u.image(alpha, x)[0], vp, u.group.order + 1, True)


def v_minus_minus(alpha, V, minus=None):
    """Union of alpha^-n(V_-) inside G (finite universes only)."""
    u = _u(alpha)
    if not _exact(u):
        raise CapabilityError("V_-- is not compact in general; use script_l")
    vm = minus if minus is not None else u_minus(alpha, V)[0]
    whole = u.whole()
    return _stable_chain(u, lambda x: u.preimage(alpha, x, whole), vm, u.group.order + 1, True)


def _settle(u, alpha, *subs) -> int:
    """Steps an increasing chain must run before its limit is guessed."""
    if hasattr(u, "settle_steps"):
        return u.settle_steps(alpha, *subs)
    return 3


def _increasing_closure(u, term: Callable, horizon: int, min_steps: int,
                        accept: Callable, what: str):
    """Closure of the union of the increasing chain term(0) <= term(1) <= ...

    A guess from the agreeing tail is accepted once ``min_steps`` terms have
    been computed, every term so far lies below it, it passes ``accept`` and
    the term at twice the current step still lies below it.
    """
    history = [term(0)]
    for k in range(1, horizon + 1):
        history.append(term(k))
        if k < max(3, min_steps):
            continue
        guess = u.extrapolate(history)
        if guess is None:
            continue
        cand, gcert = guess
        if all(u.le(h, cand) for h in history) and accept(cand) and u.le(term(2 * k), cand):
            return cand, Certificate.certified(k, confirmed_at=2 * k, **gcert.evidence)
    raise InconclusiveError(f"{what} not certified within {horizon} steps",
                            Certificate.inconclusive(horizon, what=what))


def script_l(alpha, V, horizon: int = DEFAULT_HORIZON):
    """L_V: closure of the points on orbits from V_+ that end in V_-."""
    u = _u(alpha)
    vp, c1 = u_plus(alpha, V, horizon)
    vm, c2 = u_minus(alpha, V, horizon)
    if _exact(u):
        lv = u.intersect(v_plus_plus(alpha, V, vp), v_minus_minus(alpha, V, vm))
        cert = Certificate.exact()
    else:
        # L_V is the closure of the increasing union over k of
        # alpha^k(V_+ & alpha^-2k(V_-)); V_+ <= alpha(V_+) and alpha(V_-) <= V_-
        # make the terms increase and cover every (m, n) in the definition
        def term(k):
            y = u.preimage(u.power(alpha, 2 * k), vm, vp)
            img, c = u.image(u.power(alpha, k), y, None)
            if not c.ok:
                raise InconclusiveError("image not certified", c)
            return img

        lv, cert = _increasing_closure(u, term, horizon, _settle(u, alpha, V, vp, vm),
                                       lambda c: u.equal(u.image(alpha, c, None)[0], c), "L_V")
    img, _ = u.image(alpha, lv, None)
    assert u.equal(img, lv), "L_V must be alpha-stable"
    return lv, weakest(cert, c1, c2)


def k_group(alpha, V, horizon: int = DEFAULT_HORIZON):
    """K_V: closure of alpha^m(v) for v in V_+ that alpha eventually kills."""
    u = _u(alpha)
    vp, c1 = u_plus(alpha, V, horizon)
    triv = u.trivial()
    if _exact(u):
        whole = u.whole()
        kill = _stable_chain(u, lambda x: u.preimage(alpha, x, whole), triv,
                             u.group.order + 1, True)
        y = u.intersect(vp, kill)
        kv = _stable_chain(u, lambda x: u.image(alpha, x)[0], y, u.group.order + 1, True)
        assert u.le(kv, script_l(alpha, V, horizon)[0]), "K_V must lie in L_V"
        cert = Certificate.exact()
    else:
        def term(k):
            y = u.preimage(u.power(alpha, 2 * k), triv, vp)
            img, c = u.image(u.power(alpha, k), y, None)
            if not c.ok:
                raise InconclusiveError("image not certified", c)
            return img

        kv, cert = _increasing_closure(u, term, horizon, _settle(u, alpha, V, vp),
                                       lambda c: True, "K_V")
    return kv, weakest(cert, c1)


def _below(alpha, V, vp, horizon: int):
    """Walk B_n = alpha^n(V_+) for both tidy-below tests.

    TB1 asks that B_n & V stays equal to V_+ (the union of the B_n meets V in
    V_+); TB2 asks that [B_{n+1} : B_n] is constant.  The walk ends when the
    chain stabilises, which settles both questions exactly, or at the horizon.
    """
    u = _u(alpha)
    cur = vp
    seq: list[Index] = []
    meet_bad = None
    for n in range(horizon):
        nxt, cert = u.image(alpha, cur, None)
        if not cert.ok:
            raise InconclusiveError("image not certified", cert)
        seq.append(u.index(nxt, cur))
        if meet_bad is None:
            meet = u.intersect(nxt, V)
            if not u.equal(meet, vp):
                meet_bad = (n + 1, meet)
        if u.equal(nxt, cur):
            return seq, meet_bad, n + 1
        cur = nxt
    if _exact(u):
        raise AssertionError("image chain must stabilise in a finite group")
    return seq, meet_bad, None


def check_tidy(alpha, U, horizon: int = DEFAULT_HORIZON) -> TidinessReport:
    u = _u(alpha)
    vp, _ = u_plus(alpha, U, horizon)
    ta = is_tidy_above(alpha, U, horizon, plus=vp)
    disp = displacement_index(alpha, U)
    seq, meet_bad, settled = _below(alpha, U, vp, horizon)
    tb1 = meet_bad is None
    values = [-1 if x is INFINITE else int(x) for x in seq]
    tb2 = len(set(values)) <= 1
    first_change = next((k for k in range(1, len(values)) if values[k] != values[0]), None)

    def cert(failed_at):
        if failed_at is not None:
            return Certificate.exact(failed_at=failed_at)
        if settled is not None:
            return Certificate.exact(stabilized_at=settled) if _exact(u) else \
                Certificate.certified(settled, stabilized_at=settled)
        return Certificate.certified(horizon, constant_for=len(seq))

    c1 = cert(meet_bad[0] if meet_bad else None)
    c2 = cert(first_change)
    meet = meet_bad[1] if meet_bad else None
    witnesses = {}
    if meet is not None:
        witnesses["vpp_meet_v"] = meet
    if not tb2:
        witnesses["tb2_sequence"] = seq
        if _exact(u):
            kv, _ = k_group(alpha, U, horizon)
            outside = sorted(kv.members - U.members)
            if outside:
                witnesses["kv_outside_v"] = outside[0]
    return TidinessReport(ta, tb1, c1, tb2, c2, disp, seq, witnesses)


def tidy_step3(alpha, V, L):
    """V~ = {x in V : xL in LV} and W = V~ L."""
    u = _u(alpha)
    vt = u.tilde(V, L)
    w = u.join(vt, L)
    if _exact(u):
        assert u.product_set(vt, L) == w.members, "V~ L must be a subgroup"
    dv, dw = displacement_index(alpha, V), displacement_index(alpha, w)
    assert dw <= dv, "step 3 must not increase the displacement"
    assert (dw == dv) == u.le(L, V), "equality exactly when L <= V"
    return vt, w


def tidying_procedure(alpha, U, horizon: int = DEFAULT_HORIZON) -> TidyTrace:
    n, v = tidy_above_step(alpha, U, horizon)
    disps = [displacement_index(alpha, U), displacement_index(alpha, v)]
    try:
        lv, lcert = script_l(alpha, v, horizon)
    except InconclusiveError as exc:
        return TidyTrace(n, v, None, exc.certificate, None, None, disps)
    vt, w = tidy_step3(alpha, v, lv)
    disps.append(displacement_index(alpha, w))
    trace = TidyTrace(n, v, lv, lcert, vt, w, disps)
    trace.final_report = check_tidy(alpha, w, horizon)
    if _exact(_u(alpha)):
        u = _u(alpha)
        assert u.le(u.image(alpha, w)[0], w), "a tidy subgroup of a finite group is invariant"
    return trace


def moller_scale(alpha, V, horizon: int = DEFAULT_MOLLER_N) -> ScaleResult:
    """Scale from the growth of [V : V & alpha^-n(V)], n = 1..horizon."""
    if horizon < 3:
        raise ValueError("Moller horizon must be at least 3")
    u = _u(alpha)
    log = []
    for n in range(1, horizon + 1):
        e = u.power(alpha, n)
        log.append((n, u.index(V, u.preimage(e, V, V))))
    if _exact(u):
        return ScaleResult(Index(1), Certificate.exact(reason="compact group"), log)
    exps = [ix.exponent for _, ix in log]
    incs = [b - a for a, b in zip(exps, exps[1:])]
    tail = incs[-3:]
    if len(set(tail)) == 1 and tail[0] >= 0:
        return ScaleResult(Index.power(u.p, tail[0]),
                           Certificate.certified(horizon, increments=incs), log)
    return ScaleResult(Index(1), Certificate.inconclusive(horizon, increments=incs), log)


def scale(alpha, seed, horizon: int = DEFAULT_HORIZON, moller_n: int = DEFAULT_MOLLER_N
          ) -> ScaleResult:
    """s(alpha): via the tidying procedure, falling back to Moller's formula."""
    u = _u(alpha)
    seed_disp = displacement_index(alpha, seed)
    try:
        trace = tidying_procedure(alpha, seed, horizon)
    except InconclusiveError:
        trace = None
    if _exact(u):
        w = trace.w
        assert displacement_index(alpha, w) == 1
        return ScaleResult(Index(1), Certificate.exact(reason="finite group"),
                           [(k, d) for k, d in enumerate(trace.displacements)], w)
    if trace is not None and trace.w is not None and trace.final_report.tidy:
        rep = trace.final_report
        cert = weakest(trace.l_certificate, rep.tb1_certificate, rep.tb2_certificate)
        if cert.ok:
            s = rep.displacement
            assert s <= seed_disp
            return ScaleResult(s, cert, [(k, d) for k, d in enumerate(trace.displacements)],
                               trace.w)
    res = moller_scale(alpha, seed, moller_n)
    if not res.certificate.ok:
        raise InconclusiveError("scale not certified by either method", res.certificate)
    return res


# ------------------------------------------------------------ finite-only tools


def _require_finite(alpha):
    u = _u(alpha)
    if not _exact(u):
        raise CapabilityError("operation needs exact images and element tests")
    return u


def iterate_tidy_family(alpha, W, n: int):
    """(W_[n], W^[alpha,n]) for a tidy subgroup W of a finite group."""
    u = _require_finite(alpha)
    wp, _ = u_plus(alpha, W)
    cur = W
    a_k = wp
    for k in range(n):
        if k:
            a_k = u.image(alpha, a_k)[0]
        aw = u.product_set(a_k, cur)
        t = u.group.table
        cur = type(W)(frozenset(x for x in cur.members
                                if all(t[x][y] in aw for y in a_k.members)))
    a_n = u.image(u.power(alpha, n), wp)[0]
    big = u.product_set(a_n, cur)
    fam = type(W)(big)
    assert u.join(a_n, cur).members == big, "W^[alpha,n] must be a subgroup"
    return cur, fam


def dynamics_subgroups(alpha) -> dict:
    """par, par-, lev, bik and nub for an endomorphism of a finite group."""
    from .finite import FiniteEndo, FiniteGroup, all_subgroups, quotient

    u = _require_finite(alpha)
    g = u.group
    whole, triv = u.whole(), u.trivial()
    par_minus = _stable_chain(u, lambda x: u.image(alpha, x)[0], whole, g.order + 1, False)
    kernel = _stable_chain(u, lambda x: u.preimage(alpha, x, whole), triv, g.order + 1, True)
    bik = u.intersect(kernel, par_minus)
    nub_members = set(whole.members)
    for s in all_subgroups(g, bound=max(64, g.order)):
        if u.le(u.image(alpha, s)[0], s):
            nub_members &= s.members
    nub = type(whole)(frozenset(nub_members))
    assert u.le(bik, nub) and u.le(nub, par_minus)
    # induced map on par- / bik
    elems = par_minus.elements
    pos = {x: i for i, x in enumerate(elems)}
    sub = FiniteGroup([[pos[g.table[a][b]] for b in elems] for a in elems],
                      name=f"par-({g.name})")
    q, proj = quotient(sub, type(whole)(frozenset(pos[x] for x in bik.members)))
    induced = [-1] * q.order
    for x in elems:
        k, v = proj[pos[x]], proj[pos[alpha(x)]]
        assert induced[k] in (-1, v), "induced map not well defined"
        induced[k] = v
    ind = FiniteEndo(q, tuple(induced))
    return {"par": whole, "par_minus": par_minus, "lev": par_minus, "bik": bik, "nub": nub,
            "quotient_bijective": ind.is_injective()}
