"""Evaluate named operations on a loaded problem and compare with expected values."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from .. import engine as E
from ..core import Certificate, Index
from ..finite import FiniteSubgroup, FiniteUniverse, endo_from_map
from ..laurent import EPCSubgroup
from ..orbits import escape_start, in_image_power, orbit_valuations
from ..schema import Problem, to_jsonable
from ..seqvec import EndoError, SeqVector, validate_endo

__all__ = ["Settings", "evaluate", "compare", "OPS", "EntryResult"]


@dataclass(frozen=True)
class Settings:
    horizon: int = E.DEFAULT_HORIZON
    moller_n: int = E.DEFAULT_MOLLER_N


def _alpha(prob: Problem, args: dict):
    k = int(args.get("power", 1))
    return prob.alpha if k == 1 else prob.universe.power(prob.alpha, k)


def _sub(prob: Problem, args: dict, key: str = "subgroup"):
    return prob.resolve(args[key]) if key in args else prob.default_subgroup()


def _image(u, alpha, s):
    img, cert = u.image(alpha, s, None)
    if not cert.ok:
        raise E.InconclusiveError("image not certified", cert)
    return img


def op_displacement_index(prob, args, st):
    return {"value": E.displacement_index(_alpha(prob, args), _sub(prob, args))}


def op_index(prob, args, st):
    return {"value": prob.universe.index(prob.resolve(args["a"]), prob.resolve(args["b"]))}


def op_minus_chain(prob, args, st):
    rec = E.minus_chain(_alpha(prob, args), _sub(prob, args), int(args["n"]))
    return {"terms": rec.terms, "steps": rec.step_indices}


def op_plus_chain(prob, args, st):
    rec = E.plus_chain(_alpha(prob, args), _sub(prob, args), int(args["n"]))
    return {"terms": rec.terms, "steps": rec.step_indices, "certificate": rec.certificate}


def op_u_plus(prob, args, st):
    val, cert = E.u_plus(_alpha(prob, args), _sub(prob, args), st.horizon)
    return {"value": val, "certificate": cert}


def op_u_minus(prob, args, st):
    val, cert = E.u_minus(_alpha(prob, args), _sub(prob, args), st.horizon)
    return {"value": val, "certificate": cert}


def op_image(prob, args, st):
    return {"value": _image(prob.universe, _alpha(prob, args), _sub(prob, args))}


def op_preimage(prob, args, st):
    u = prob.universe
    return {"value": u.preimage(_alpha(prob, args), _sub(prob, args),
                                _sub(prob, args, "ambient"))}


def op_intersect(prob, args, st):
    return {"value": prob.universe.intersect(prob.resolve(args["a"]), prob.resolve(args["b"]))}


def op_member(prob, args, st):
    return {"value": prob.universe.member(prob.element(args["element"]), _sub(prob, args))}


def op_is_tidy_above(prob, args, st):
    return {"value": E.is_tidy_above(_alpha(prob, args), _sub(prob, args), st.horizon)}


def op_tidy_above_step(prob, args, st):
    alpha = _alpha(prob, args)
    n, v = E.tidy_above_step(alpha, _sub(prob, args), st.horizon)
    return {"n": n, "v": v, "displacement": E.displacement_index(alpha, v)}


def op_script_l(prob, args, st):
    val, cert = E.script_l(_alpha(prob, args), _sub(prob, args), st.horizon)
    return {"value": val, "certificate": cert}


def op_k_group(prob, args, st):
    val, cert = E.k_group(_alpha(prob, args), _sub(prob, args), st.horizon)
    return {"value": val, "certificate": cert}


def op_check_tidy(prob, args, st):
    rep = E.check_tidy(_alpha(prob, args), _sub(prob, args), st.horizon)
    return {"ta": rep.ta, "tb1": rep.tb1, "tb2": rep.tb2, "tidy": rep.tidy,
            "displacement": rep.displacement, "tb2_sequence": rep.tb2_sequence,
            "tb1_certificate": rep.tb1_certificate, "tb2_certificate": rep.tb2_certificate}


def op_tidy_step3(prob, args, st):
    vt, w = E.tidy_step3(_alpha(prob, args), _sub(prob, args), prob.resolve(args["l"]))
    return {"v_tilde": vt, "w": w}


def op_tidying_procedure(prob, args, st):
    tr = E.tidying_procedure(_alpha(prob, args), _sub(prob, args), st.horizon)
    out = {"n": tr.n, "v": tr.v, "l": tr.l_group, "w": tr.w,
           "displacements": tr.displacements, "l_certificate": tr.l_certificate}
    if tr.final_report is not None:
        out["final_tidy"] = tr.final_report.tidy
    return out


def op_scale(prob, args, st):
    res = E.scale(_alpha(prob, args), _sub(prob, args), st.horizon, st.moller_n)
    return {"value": res.scale, "certificate": res.certificate}


def op_moller_scale(prob, args, st):
    res = E.moller_scale(_alpha(prob, args), _sub(prob, args),
                         int(args.get("horizon", st.moller_n)))
    return {"value": res.scale, "certificate": res.certificate,
            "log": [ix for _, ix in res.index_log]}


def op_image_meet(prob, args, st):
    """F & alpha(F) & ... & alpha^n(F) and its image."""
    u, alpha = prob.universe, _alpha(prob, args)
    cur = term = _sub(prob, args)
    for _ in range(int(args["n"])):
        term = _image(u, alpha, term)
        cur = u.intersect(cur, term)
    return {"value": cur, "image": _image(u, alpha, cur)}


def op_iterate_tidy_family(prob, args, st):
    low, fam = E.iterate_tidy_family(_alpha(prob, args), _sub(prob, args), int(args["n"]))
    return {"low": low, "family": fam}


def op_dynamics(prob, args, st):
    return E.dynamics_subgroups(_alpha(prob, args))


def op_validate_endo(prob, args, st):
    try:
        if isinstance(prob.universe, FiniteUniverse):
            endo_from_map(prob.group, [prob.element(x) for x in args["gens"]],
                          [prob.element(x) for x in args["images"]])
        else:
            validate_endo(prob.alpha)
    except (EndoError, ValueError):
        return {"ok": False}
    return {"ok": True}


def op_valuation_growth(prob, args, st):
    lo, hi = args["exponents"]
    steps = int(args["steps"])
    k0, vals, escapes = {}, {}, True
    for n in range(int(lo), int(hi) + 1):
        v = orbit_valuations(prob.alpha, SeqVector.unit(prob.p, n), steps)
        k = escape_start(v)
        vals[str(n)] = v
        k0[str(n)] = k
        escapes = escapes and k is not None
    return {"escapes": escapes, "k0": k0, "valuations": vals}


def op_range_member(prob, args, st):
    x = prob.element(args["element"])
    f = in_image_power(prob.alpha, x, int(args["n"]))
    return {"value": f is not None, "preimage": f}


OPS: dict[str, Callable[[Problem, dict, Settings], dict]] = {
    "displacement_index": op_displacement_index,
    "index": op_index,
    "minus_chain": op_minus_chain,
    "plus_chain": op_plus_chain,
    "u_plus": op_u_plus,
    "u_minus": op_u_minus,
    "image": op_image,
    "preimage": op_preimage,
    "intersect": op_intersect,
    "member": op_member,
    "is_tidy_above": op_is_tidy_above,
    "tidy_above_step": op_tidy_above_step,
    "script_l": op_script_l,
    "k_group": op_k_group,
    "check_tidy": op_check_tidy,
    "tidy_step3": op_tidy_step3,
    "tidying_procedure": op_tidying_procedure,
    "scale": op_scale,
    "moller_scale": op_moller_scale,
    "image_meet": op_image_meet,
    "iterate_tidy_family": op_iterate_tidy_family,
    "dynamics": op_dynamics,
    "validate_endo": op_validate_endo,
    "valuation_growth": op_valuation_growth,
    "range_member": op_range_member,
}


def evaluate(prob: Problem, op: str, args: dict, settings: Settings = Settings()) -> dict:
    try:
        fn = OPS[op]
    except KeyError:
        raise KeyError(f"unknown operation {op!r}") from None
    return fn(prob, args, settings)


# ------------------------------------------------------------------ comparison


def _same(prob: Problem, actual: Any, expected: Any) -> bool:
    if isinstance(actual, (FiniteSubgroup, EPCSubgroup)):
        return prob.universe.equal(actual, prob.resolve(expected))
    if isinstance(actual, Certificate):
        return actual.kind == expected
    if isinstance(actual, Index):
        return isinstance(expected, int) and actual.value == expected
    if isinstance(actual, (list, tuple)):
        return (isinstance(expected, list) and len(actual) == len(expected)
                and all(_same(prob, a, b) for a, b in zip(actual, expected)))
    if isinstance(actual, dict):
        return (isinstance(expected, dict)
                and all(k in actual and _same(prob, actual[k], v) for k, v in expected.items()))
    if isinstance(actual, float) and actual == float("inf"):
        return expected == "inf"
    return actual == expected


@dataclass
class EntryResult:
    op: str
    args: dict
    field: str
    ok: bool
    expected: Any
    actual: Any
    source: str = ""
    error: str | None = None

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        where = f"{self.op}({_fmt_args(self.args)}).{self.field}"
        if self.ok:
            return f"{status} {where}"
        if self.error:
            return f"{status} {where}: {self.error}"
        return f"{status} {where}: expected {self.expected!r}, got {self.actual!r}"


def _fmt_args(args: dict) -> str:
    return ", ".join(f"{k}={v if not isinstance(v, dict) else '{...}'}"
                     for k, v in sorted(args.items()))


def compare(prob: Problem, op: str, args: dict, actual: dict, expected: dict,
            source: str = "") -> list[EntryResult]:
    """One result per expected field; ``<field>_prefix`` compares a leading slice."""
    out = []
    for key, want in sorted(expected.items()):
        base, prefix = (key[: -len("_prefix")], True) if key.endswith("_prefix") else (key, False)
        if base not in actual:
            out.append(EntryResult(op, args, key, False, want, None, source,
                                   f"operation produced no field {base!r}"))
            continue
        got = actual[base]
        if prefix:
            got = list(got)[: len(want)]
        ok = _same(prob, got, want)
        out.append(EntryResult(op, args, key, ok, want, to_jsonable(got), source))
    return out
