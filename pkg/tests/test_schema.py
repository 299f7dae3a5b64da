import json

import pytest

from tdlc.core import INFINITE, Certificate, Index
from tdlc.fixtures import load_fixture
from tdlc.schema import (InputError, digest, load_file, load_problem, subgroup_to_json,
                         to_jsonable)

FINITE = {"schema": 1, "universe": "finite",
          "group": {"kind": "cyclic-product", "factors": [2, 2]},
          "endo": {"gens": [[1, 0], [0, 1]], "images": [[0, 1], [1, 0]]},
          "subgroups": {"A": {"generators": [[1, 0]]}, "B": {"elements": [[0, 0], [0, 1]]}}}


def test_finite_problem():
    prob = load_problem(FINITE)
    a, b = prob.subgroups["A"], prob.subgroups["B"]
    assert prob.universe.equal(prob.universe.image(prob.alpha, a)[0], b)
    assert prob.default_subgroup().order == 4


def test_catalog_group_by_name():
    prob = load_problem({"universe": "finite", "group": "S3"})
    assert prob.group.order == 6 and prob.alpha.is_injective()


@pytest.mark.parametrize("patch,message", [
    ({"schema": 2}, "schema version"),
    ({"universe": "compact"}, "unknown universe"),
    ({"group": {"kind": "free"}}, "unknown kind"),
    ({"endo": {"gens": [[1, 0]], "images": [[1, 1, 1]]}}, "unknown element"),
    ({"subgroups": {"A": {"elements": [[1, 0], [0, 1]]}}}, "do not form a subgroup"),
    ({"subgroups": {"A": {"size": 2}}}, "needs"),
])
def test_finite_input_errors(patch, message):
    with pytest.raises(InputError, match=message):
        load_problem({**FINITE, **patch})


def test_laurent_input_errors():
    doc = load_fixture("shift-t-inverse")
    with pytest.raises(InputError, match="differs"):
        load_problem({**doc, "subgroups": {"X": {"p": 3, "base": 0}}})
    bad_endo = dict(doc["endo"], down_tail={"period": 1, "shift": 0, "templates": [[[0, 1]]]})
    with pytest.raises(InputError, match="unbounded below"):
        load_problem({**doc, "endo": bad_endo})
    with pytest.raises(InputError, match="needs 'p'"):
        load_problem({"universe": "laurent", "endo": {"hi": 0}})


def test_unknown_subgroup_lists_known_names():
    prob = load_problem(load_fixture("shift-t-inverse"))
    with pytest.raises(InputError, match="known: U, V"):
        prob.subgroup("W")


def test_subgroup_json_round_trip():
    doc = load_fixture("ex-3-11-p2")
    prob = load_problem(doc)
    for name, sub in prob.subgroups.items():
        again = prob.resolve(subgroup_to_json(sub))
        assert prob.universe.equal(again, sub), name


def test_load_file_errors(tmp_path):
    with pytest.raises(InputError, match="cannot read"):
        load_file(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InputError, match="invalid JSON"):
        load_file(bad)


def test_digest_ignores_key_order():
    a = {"x": 1, "y": [1, 2]}
    assert digest(a) == digest(json.loads('{"y": [1, 2], "x": 1}'))
    assert digest(a) != digest({"x": 2, "y": [1, 2]})


def test_to_jsonable():
    out = to_jsonable({"i": Index.power(2, 3), "inf": INFINITE, "c": Certificate.exact(),
                       "x": float("inf")})
    assert out["i"] == 8 and out["inf"] == "infinite" and out["x"] == "inf"
    assert out["c"]["kind"] == "exact"
    json.dumps(out)
