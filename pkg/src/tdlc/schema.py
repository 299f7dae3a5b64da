"""JSON input and output formats (schema version 1).

An input file names a universe, an endomorphism and any number of named
subgroups::

    {"schema": 1, "universe": "finite",
     "group": {"kind": "cyclic-product", "factors": [2, 2, 2]},
     "endo": {"gens": [...], "images": [...]},
     "subgroups": {"F": {"generators": [[0, 1, 0]]}}}

    {"schema": 1, "universe": "laurent", "p": 2,
     "endo": {"hi": 0, "up_tail": {...}, "down_tail": "zero"},
     "subgroups": {"U": {"base": 0, "constraints": [[[1, 1]]]}}}

Finite elements are given by index or, for cyclic products, by their tuple
label.  Finite subgroups are ``{"elements": [...]}``, ``{"generators": [...]}``
or ``{"whole": true}``.  Laurent subgroups use the normal-form descriptor
written by :meth:`EPCSubgroup.to_json`; ``{"trivial": true}`` and
``{"whole": true}`` (meaning F_p[[t]]) are accepted as shorthands.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

from .catalog import catalog, cyclic_product
from .finite import FiniteEndo, FiniteGroup, FiniteSubgroup, closure, endo_from_map
from .laurent import EPCSubgroup
from .seqvec import BandedEndo, EndoError, SeqVector

__all__ = [
    "SCHEMA_VERSION",
    "InputError",
    "Problem",
    "load_problem",
    "load_file",
    "digest",
    "subgroup_to_json",
    "element_to_json",
    "group_to_json",
    "endo_to_json",
    "to_jsonable",
]

SCHEMA_VERSION = 1


class InputError(ValueError):
    """The input does not parse or does not describe a valid problem."""


@dataclass
class Problem:
    universe_kind: str
    alpha: Any
    subgroups: dict[str, Any]
    group: FiniteGroup | None = None
    p: int | None = None
    raw: dict = field(default_factory=dict)

    @property
    def universe(self):
        return self.alpha.universe

    def default_subgroup(self):
        """Seed used when no subgroup is named: the whole group, or F_p[[t]]."""
        if self.group is not None:
            return self.group.whole()
        return EPCSubgroup.power_series(self.p)

    def subgroup(self, name: str | None):
        if name is None:
            return self.default_subgroup()
        try:
            return self.subgroups[name]
        except KeyError:
            known = ", ".join(sorted(self.subgroups)) or "none"
            raise InputError(f"unknown subgroup {name!r} (known: {known})") from None

    def element(self, desc):
        if self.group is not None:
            return _finite_element(self.group, desc)
        return SeqVector.from_terms(self.p, desc)

    def resolve(self, ref):
        """A subgroup from a name or an inline descriptor."""
        if isinstance(ref, str):
            return self.subgroup(ref)
        if self.group is not None:
            return _finite_subgroup(self.group, ref)
        return _laurent_subgroup(self.p, ref)


def _require(d: dict, key: str, where: str):
    if key not in d:
        raise InputError(f"{where}: missing field {key!r}")
    return d[key]


# ------------------------------------------------------------------ finite


def _finite_group(desc) -> FiniteGroup:
    if isinstance(desc, str):
        try:
            return catalog(desc)
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
    kind = _require(desc, "kind", "group")
    try:
        if kind == "cyclic-product":
            return cyclic_product([int(f) for f in _require(desc, "factors", "group")])
        if kind == "cayley":
            return FiniteGroup(_require(desc, "table", "group"), name=desc.get("name"))
        if kind == "catalog":
            return catalog(_require(desc, "name", "group"))
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None
    except ValueError as exc:
        raise InputError(f"group: {exc}") from None
    raise InputError(f"group: unknown kind {kind!r}")


def _finite_element(g: FiniteGroup, desc) -> int:
    if isinstance(desc, int) and not isinstance(desc, bool):
        if not 0 <= desc < g.order:
            raise InputError(f"element index {desc} out of range for order {g.order}")
        return desc
    if isinstance(desc, (list, tuple)):
        label = tuple(desc)
        for i, lab in enumerate(g.labels):
            if lab == label:
                return i
    raise InputError(f"unknown element {desc!r}")


def _finite_subgroup(g: FiniteGroup, desc) -> FiniteSubgroup:
    if not isinstance(desc, dict):
        raise InputError(f"subgroup descriptor must be an object, got {desc!r}")
    if desc.get("whole"):
        return g.whole()
    if desc.get("trivial"):
        return g.trivial()
    if "elements" in desc:
        elems = {_finite_element(g, x) for x in desc["elements"]}
        sub = closure(g, elems)
        if set(sub.members) != elems | {g.identity}:
            raise InputError("listed elements do not form a subgroup")
        return sub
    if "generators" in desc:
        return closure(g, [_finite_element(g, x) for x in desc["generators"]])
    raise InputError("finite subgroup needs 'elements', 'generators', 'whole' or 'trivial'")


def _finite_endo(g: FiniteGroup, desc) -> FiniteEndo:
    try:
        if "map" in desc:
            images = [_finite_element(g, x) for x in desc["map"]]
            if len(images) != g.order:
                raise InputError("endo map must list one image per element")
            return FiniteEndo(g, tuple(images))
        gens = [_finite_element(g, x) for x in _require(desc, "gens", "endo")]
        images = [_finite_element(g, x) for x in _require(desc, "images", "endo")]
        return endo_from_map(g, gens, images)
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(f"endo: {exc}") from None


# ------------------------------------------------------------------ laurent


def _laurent_subgroup(p: int, desc) -> EPCSubgroup:
    if not isinstance(desc, dict):
        raise InputError(f"subgroup descriptor must be an object, got {desc!r}")
    if desc.get("trivial"):
        return EPCSubgroup.trivial(p)
    if desc.get("whole"):
        return EPCSubgroup.power_series(p, int(desc.get("base", 0)))
    d = dict(desc)
    if int(d.setdefault("p", p)) != p:
        raise InputError(f"subgroup prime {d['p']} differs from p={p}")
    try:
        return EPCSubgroup.from_json(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"subgroup: {exc}") from None


def _laurent_endo(p: int, desc) -> BandedEndo:
    d = dict(desc)
    if int(d.setdefault("p", p)) != p:
        raise InputError(f"endo prime {d['p']} differs from p={p}")
    try:
        return BandedEndo.from_json(d)
    except EndoError as exc:
        raise InputError("endo: " + "; ".join(exc.problems)) from None
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"endo: {exc}") from None


# ------------------------------------------------------------------ entry points


def load_problem(d: dict) -> Problem:
    if not isinstance(d, dict):
        raise InputError("input must be a JSON object")
    version = d.get("schema", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise InputError(f"unsupported schema version {version!r}")
    kind = _require(d, "universe", "input")
    subs = d.get("subgroups", {}) or {}
    if kind == "finite":
        g = _finite_group(_require(d, "group", "input"))
        endo_desc = d.get("endo", {"map": list(range(g.order))})
        alpha = _finite_endo(g, endo_desc)
        prob = Problem("finite", alpha, {}, group=g, raw=d)
    elif kind == "laurent":
        endo_desc = _require(d, "endo", "input")
        p = d.get("p", endo_desc.get("p") if isinstance(endo_desc, dict) else None)
        if p is None:
            raise InputError("laurent input needs 'p'")
        alpha = _laurent_endo(int(p), endo_desc)
        prob = Problem("laurent", alpha, {}, p=int(p), raw=d)
    else:
        raise InputError(f"unknown universe {kind!r}")
    for name, desc in subs.items():
        prob.subgroups[name] = prob.resolve(desc)
    return prob


def load_file(path) -> Problem:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    return load_problem(data)


def digest(d: dict) -> str:
    """sha256 of the canonical JSON encoding of an input."""
    text = json.dumps(d, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


# ------------------------------------------------------------------ output


def subgroup_to_json(s) -> dict:
    if isinstance(s, FiniteSubgroup):
        return {"elements": list(s.elements)}
    return s.to_json()


def element_to_json(x):
    if isinstance(x, SeqVector):
        return x.to_json()
    return int(x)


def group_to_json(g: FiniteGroup) -> dict:
    return {"kind": "cayley", "table": g.table, "name": g.name}


def endo_to_json(e) -> dict:
    if isinstance(e, FiniteEndo):
        return {"map": list(e.image)}
    return e.to_json()


def to_jsonable(obj):
    """Plain JSON values for engine results (subgroups become descriptors)."""
    from .core import INFINITE, Certificate, Index

    if isinstance(obj, (FiniteSubgroup, EPCSubgroup)):
        return subgroup_to_json(obj)
    if isinstance(obj, Index):
        return obj.value
    if obj is INFINITE:
        return "infinite"
    if isinstance(obj, Certificate):
        return obj.to_json()
    if isinstance(obj, SeqVector):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, float) and obj == float("inf"):
        return "inf"
    return obj
