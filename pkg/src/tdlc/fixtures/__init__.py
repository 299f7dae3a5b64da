"""Embedded worked examples with frozen expected values.

Each fixture is a JSON input file (see :mod:`tdlc.schema`) extended with a
``name`` and an ``expected`` list.  Every expected entry names an operation
from :data:`tdlc.fixtures.runner.OPS`, its arguments, the expected fields and
where the value comes from (``source``): ``worked-example`` values carry a
``cite`` locator, ``oracle`` values name the independent ``oracle`` that
produced them (``dense-window`` or ``exhaustive``), and ``immediate`` values
are true by construction.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from ..core import CapabilityError, InconclusiveError
from ..schema import InputError, Problem, load_problem
from .runner import OPS, EntryResult, Settings, compare, evaluate

__all__ = [
    "SOURCES",
    "UnknownFixture",
    "FixtureReport",
    "registry",
    "fixture_names",
    "load_fixture",
    "fixture_problem",
    "run_fixture",
    "OPS",
    "Settings",
]

SOURCES = ("worked-example", "oracle", "immediate")


class UnknownFixture(KeyError):
    def __str__(self) -> str:
        return self.args[0]


@dataclass
class FixtureReport:
    name: str
    entries: list[EntryResult] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    @property
    def failures(self) -> list[EntryResult]:
        return [e for e in self.entries if not e.ok]

    def lines(self) -> list[str]:
        return [e.line() for e in self.entries]


def _data():
    return resources.files(__package__).joinpath("data")


@lru_cache(maxsize=None)
def registry() -> dict:
    """The registry index: fixture name -> {file, sources, description}."""
    index = json.loads(_data().joinpath("index.json").read_text(encoding="utf-8"))
    return {f["name"]: f for f in index["fixtures"]}


def fixture_names() -> list[str]:
    return sorted(registry())


@lru_cache(maxsize=None)
def _raw(name: str) -> str:
    try:
        entry = registry()[name]
    except KeyError:
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}"
                             ) from None
    return _data().joinpath(entry["file"]).read_text(encoding="utf-8")


def load_fixture(name: str) -> dict:
    """A fresh copy of the fixture's JSON document."""
    return json.loads(_raw(name))


def fixture_problem(name: str) -> Problem:
    return load_problem(load_fixture(name))


def run_fixture(name: str, settings: Settings = Settings()) -> FixtureReport:
    """Run every expected entry of a fixture and compare canonical forms."""
    doc = load_fixture(name)
    start = time.perf_counter()
    prob = load_problem(doc)
    report = FixtureReport(name)
    for item in doc.get("expected", []):
        op, args = item["op"], item.get("args", {})
        try:
            actual = evaluate(prob, op, args, settings)
        except (InconclusiveError, CapabilityError, InputError, KeyError) as exc:
            report.entries.extend(
                EntryResult(op, args, k, False, v, None, item.get("source", ""),
                            f"{type(exc).__name__}: {exc}")
                for k, v in sorted(item["expect"].items()))
            continue
        report.entries.extend(compare(prob, op, args, actual, item["expect"],
                                      item.get("source", "")))
    report.seconds = time.perf_counter() - start
    return report
