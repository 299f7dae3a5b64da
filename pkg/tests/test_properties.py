import json

import pytest

from tdlc import properties
from tdlc.properties import SUITES, cases, run_suite
from tdlc.schema import load_problem


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes_on_small_groups(name):
    res = run_suite(name, max_order=6)
    assert res.cases > 0
    assert res.ok, res.failures[:3]


def test_converse_failure_is_expected():
    res = run_suite("powers-converse-fails")
    assert res.ok and res.expected_failures == 2


def test_cases_include_fixture_groups():
    names = {g.name for g, _, _ in cases(8)}
    assert {"C2", "C2xC2", "S3", "D4", "Q8"} <= names


def test_unknown_suite():
    with pytest.raises(KeyError, match="choose from"):
        run_suite("associativity")


def test_broken_checker_yields_loadable_counterexamples(monkeypatch):
    monkeypatch.setattr(properties, "_tidy", lambda e, w: True)
    res = run_suite("tidy-iff-minimizing", max_order=4)
    assert not res.ok
    from tdlc.cli import _counterexample

    doc = json.loads(json.dumps(_counterexample(res.failures[0])))
    prob = load_problem(doc)
    s = prob.subgroups["S"]
    u = prob.universe
    assert not u.le(u.image(prob.alpha, s)[0], s)
