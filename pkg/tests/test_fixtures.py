import pytest

from tdlc.fixtures import (SOURCES, UnknownFixture, fixture_names, load_fixture, registry,
                           run_fixture)
from tdlc.fixtures.oracle import check_entry, oracle_for
from tdlc.fixtures.runner import compare, evaluate
from tdlc.schema import load_problem

# (fixture, op) pairs that reproduce the worked examples
WORKED = {
    "ex-3-11-p2": {"displacement_index", "plus_chain", "minus_chain", "tidy_above_step",
                   "u_plus", "u_minus", "image"},
    "ex-3-11-p3": {"displacement_index", "plus_chain", "minus_chain", "tidy_above_step",
                   "u_plus", "u_minus", "image"},
    "ex-6-1": {"displacement_index", "u_plus", "u_minus", "check_tidy", "scale",
               "moller_scale"},
    "ex-3-1-p2": {"image", "image_meet"},
    "ex-3-1-p3": {"image", "image_meet"},
    "ex-8-5": {"validate_endo", "valuation_growth", "range_member"},
}


@pytest.mark.parametrize("name", fixture_names())
def test_fixture_passes(name):
    report = run_fixture(name)
    assert report.entries
    assert report.ok, "\n".join(e.line() for e in report.failures)


def test_registry_covers_worked_examples():
    for name, ops in WORKED.items():
        entries = load_fixture(name)["expected"]
        worked = {e["op"] for e in entries if e["source"] == "worked-example"}
        assert ops <= worked, (name, ops - worked)
        assert all("cite" in e for e in entries if e["source"] == "worked-example")


def test_registry_sources():
    for name, entry in registry().items():
        doc = load_fixture(name)
        used = {e["source"] for e in doc["expected"]}
        assert used <= set(SOURCES)
        assert sorted(used) == sorted(entry["sources"])
        assert all(e.get("oracle") for e in doc["expected"] if e["source"] == "oracle")


def test_unknown_fixture():
    with pytest.raises(UnknownFixture, match="known: "):
        load_fixture("no-such-example")


def test_mismatch_reports_both_values():
    doc = load_fixture("ex-3-11-p2")
    prob = load_problem(doc)
    actual = evaluate(prob, "displacement_index", {"subgroup": "U"})
    [res] = compare(prob, "displacement_index", {"subgroup": "U"}, actual, {"value": 8})
    assert not res.ok
    assert "expected 8, got 4" in res.line()


def test_subgroup_mismatch_is_detected():
    doc = load_fixture("ex-3-11-p2")
    prob = load_problem(doc)
    actual = evaluate(prob, "u_plus", {"subgroup": "U"})
    assert compare(prob, "u_plus", {"subgroup": "U"}, actual, {"value": "U3"})[0].ok
    assert not compare(prob, "u_plus", {"subgroup": "U"}, actual, {"value": "U2"})[0].ok


FINITE_ORACLE = [(n, i) for n in fixture_names() if load_fixture(n)["universe"] == "finite"
                 for i, e in enumerate(load_fixture(n)["expected"]) if e["source"] == "oracle"]


@pytest.mark.parametrize("name,i", FINITE_ORACLE)
def test_exhaustive_oracle_agrees(name, i):
    doc = load_fixture(name)
    entry = doc["expected"][i]
    for key, ok, value in check_entry(doc, entry, oracle_for(doc, entry["oracle"])):
        assert ok, (key, value)


def test_oracle_detects_wrong_value():
    doc = load_fixture("shift-t-inverse")
    entry = {"op": "displacement_index", "args": {"subgroup": "U"}, "expect": {"value": 4},
             "oracle": "dense-window"}
    [(key, ok, value)] = check_entry(doc, entry)
    assert not ok and value == 2
