"""Command-line interface: ``tdlc scale|tidy|check|examples``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any

from . import engine as E
from .core import Certificate, InconclusiveError, TidinessReport
from .fixtures import UnknownFixture, fixture_names, registry, run_fixture
from .fixtures.runner import Settings
from .laurent import DEFAULT_STATE_BOUND, state_bound
from .properties import SUITES, run_suite
from .schema import SCHEMA_VERSION, InputError, Problem, digest, load_file, to_jsonable

EXIT_OK, EXIT_PROPERTY, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3

# suites whose documented sweep is the order <= 12 catalog
_ORDER_12 = {"tidy-iff-minimizing", "moller-bridge"}


class _Run:
    """Collects one command's results and renders the report."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.results: dict[str, Any] = {}
        self.subgroups: dict[str, Any] = {}
        self.lines: list[str] = []
        self.raw: dict | None = None
        self.start = time.perf_counter()

    def say(self, line: str = "") -> None:
        self.lines.append(line)

    def keep(self, name: str, sub) -> str:
        """Store a result subgroup under ``result_<name>`` and return that name."""
        key = f"result_{name}"
        self.subgroups[key] = sub
        return key

    def command(self) -> dict:
        a = self.args
        keys = ("input", "subgroup", "horizon", "state_bound", "moller_n", "seed",
                "properties", "max_order", "names")
        return {"name": a.command, **{k: getattr(a, k) for k in keys
                                      if getattr(a, k, None) not in (None, [])}}

    def report(self, code: int) -> dict:
        out: dict[str, Any] = {"schema": SCHEMA_VERSION, "command": self.command(),
                               "results": to_jsonable(self.results), "exit_code": code}
        if self.raw is not None:
            out["inputs_digest"] = digest(self.raw)
            # echo the problem so the report is itself a valid input file
            for key in ("universe", "p", "group", "endo"):
                if key in self.raw:
                    out[key] = self.raw[key]
            subs = dict(self.raw.get("subgroups", {}))
            subs.update(to_jsonable(self.subgroups))
            out["subgroups"] = subs
        if self.args.timing:
            out["timing"] = {"seconds": round(time.perf_counter() - self.start, 3)}
        return out

    def finish(self, code: int) -> int:
        if self.args.json:
            json.dump(self.report(code), sys.stdout, indent=2, sort_keys=True)
            sys.stdout.write("\n")
        else:
            for line in self.lines:
                print(line)
            if self.args.timing:
                print(f"time: {time.perf_counter() - self.start:.2f}s")
        return code


# ------------------------------------------------------------------ formatting


def _cert_word(cert: Certificate) -> str:
    if cert.kind == "exact":
        return "exact"
    if cert.kind == "horizon":
        return f"certified (horizon {cert.horizon})"
    return "inconclusive"


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _describe(sub) -> str:
    if hasattr(sub, "describe"):
        return sub.describe()
    return "{" + ", ".join(map(str, sub.elements)) + "}"


def _report_json(run: _Run, rep: TidinessReport, prefix: str) -> dict:
    out = {"ta": rep.ta, "tb1": rep.tb1, "tb2": rep.tb2, "tidy": rep.tidy,
           "displacement": rep.displacement, "tb2_sequence": rep.tb2_sequence,
           "tb1_certificate": rep.tb1_certificate, "tb2_certificate": rep.tb2_certificate}
    wit = {}
    for key, val in sorted(rep.witnesses.items()):
        if key == "vpp_meet_v":
            wit[key] = run.keep(f"{prefix}_vpp_meet_v", val)
        else:
            wit[key] = val
    if wit:
        out["witnesses"] = wit
    return out


def _report_lines(rep: TidinessReport) -> list[str]:
    seq = ", ".join(str(int(x)) for x in rep.tb2_sequence[:12])
    more = ", ..." if len(rep.tb2_sequence) > 12 else ""
    lines = [f"TA {_yes(rep.ta)}, TB1 {_yes(rep.tb1)}, TB2 {_yes(rep.tb2)}"
             f" (index sequence {seq}{more}); displacement {int(rep.displacement)}"]
    if not rep.tb2:
        lines.append(f"TB2 fails: [alpha^(n+1)(V_+) : alpha^n(V_+)] is not constant "
                     f"({_cert_word(rep.tb2_certificate)})")
    if not rep.tb1:
        lines.append("TB1 fails: some alpha^n(V_+) meets V outside V_+")
    return lines


# ------------------------------------------------------------------ commands


def _load(run: _Run) -> Problem:
    if not run.args.input:
        raise InputError("--input is required")
    prob = load_file(run.args.input)
    run.raw = prob.raw
    return prob


def cmd_scale(run: _Run) -> int:
    a = run.args
    prob = _load(run)
    seed = prob.subgroup(a.subgroup)
    with state_bound(a.state_bound):
        try:
            res = E.scale(prob.alpha, seed, a.horizon, a.moller_n)
        except InconclusiveError as exc:
            run.results = {"scale": None, "certificate": exc.certificate}
            run.say(f"scale: inconclusive ({exc})")
            return EXIT_INCONCLUSIVE
    run.results = {"scale": res.scale, "certificate": res.certificate,
                   "index_log": [[k, ix] for k, ix in res.index_log]}
    where = f" (p={prob.p})" if prob.p is not None else ""
    run.say(f"scale = {int(res.scale)}{where}, {_cert_word(res.certificate)}")
    if res.witness is not None:
        run.results["witness"] = run.keep("witness", res.witness)
        run.say(f"tidy witness: {_describe(res.witness)}")
    return EXIT_OK


def cmd_tidy(run: _Run) -> int:
    a = run.args
    prob = _load(run)
    name = a.subgroup
    u = prob.subgroup(name)
    label = name or "default"
    with state_bound(a.state_bound):
        try:
            before = E.check_tidy(prob.alpha, u, a.horizon)
            trace = E.tidying_procedure(prob.alpha, u, a.horizon)
        except InconclusiveError as exc:
            run.results = {"certificate": exc.certificate}
            run.say(f"tidy: inconclusive ({exc})")
            return EXIT_INCONCLUSIVE
    run.results["input_report"] = _report_json(run, before, "input")
    run.say(f"subgroup {label}:")
    run.lines.extend("  " + line for line in _report_lines(before))
    run.results["n"] = trace.n
    run.results["v"] = run.keep("v", trace.v)
    run.say(f"step 1: N = {trace.n}, displacement {int(trace.displacements[1])}")
    run.results["l_certificate"] = trace.l_certificate
    if trace.w is None:
        run.results["displacements"] = trace.displacements
        run.say(f"step 2: L_V {_cert_word(trace.l_certificate)}; stopping")
        return EXIT_INCONCLUSIVE
    run.results["l"] = run.keep("l", trace.l_group)
    run.results["w"] = run.keep("w", trace.w)
    run.results["displacements"] = trace.displacements
    run.results["final_report"] = _report_json(run, trace.final_report, "final")
    run.say(f"step 2: L_V {_cert_word(trace.l_certificate)}")
    run.say(f"step 3: W = {_describe(trace.w)}")
    run.say("displacements: " + " -> ".join(str(int(d)) for d in trace.displacements))
    run.say("final subgroup:")
    run.lines.extend("  " + line for line in _report_lines(trace.final_report))
    return EXIT_OK if trace.final_report.tidy else EXIT_INCONCLUSIVE


def cmd_check(run: _Run) -> int:
    a = run.args
    names = a.properties or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise InputError(f"unknown properties {unknown}; choose from {sorted(SUITES)}")
    code = EXIT_OK
    for name in names:
        kw = {"seed": a.seed}
        if a.max_order is not None:
            kw["max_order"] = a.max_order
        elif name in _ORDER_12:
            kw["max_order"] = 12
        res = run_suite(name, **kw)
        entry: dict[str, Any] = {"cases": res.cases, "failures": len(res.failures),
                                 "ok": res.ok}
        if res.expected_failures:
            entry["expected_failures"] = res.expected_failures
        if res.failures:
            entry["counterexamples"] = [_counterexample(f) for f in res.failures[:5]]
            code = EXIT_PROPERTY
        run.results[name] = entry
        extra = f", {res.expected_failures} expected failures" if res.expected_failures else ""
        status = "PASS" if res.ok else f"FAIL ({len(res.failures)} failures)"
        run.say(f"{name}: {status} ({res.cases} cases{extra})")
        for f in res.failures[:5]:
            run.say("  " + json.dumps(_counterexample(f), sort_keys=True))
    return code


def _counterexample(f: dict) -> dict:
    """A failing case as a loadable finite input."""
    out: dict[str, Any] = {"schema": SCHEMA_VERSION, "universe": "finite", "check": f["check"]}
    if "table" in f:
        out["group"] = {"kind": "cayley", "table": f["table"], "name": f["group"]}
        out["endo"] = f["endo"]
    else:
        out["group"] = f["group"]
    if "subgroup" in f:
        out["subgroups"] = {"S": {"elements": f["subgroup"]}}
    details = {k: v for k, v in f.items()
               if k not in ("table", "endo", "group", "check", "subgroup")}
    if details:
        out["details"] = details
    return out


def cmd_examples(run: _Run) -> int:
    a = run.args
    if a.list:
        for name in fixture_names():
            entry = registry()[name]
            run.results[name] = {"universe": entry["universe"], "sources": entry["sources"]}
            run.say(f"{name}: {entry['universe']} ({', '.join(entry['sources'])})")
        return EXIT_OK
    names = a.names or fixture_names()
    settings = Settings(a.horizon, a.moller_n)
    code = EXIT_OK
    for name in names:
        with state_bound(a.state_bound):
            rep = run_fixture(name, settings)
        run.results[name] = {"ok": rep.ok, "checks": len(rep.entries),
                             "failures": [e.line() for e in rep.failures]}
        run.say(f"{name}: {'PASS' if rep.ok else 'FAIL'} ({len(rep.entries)} checks)")
        for e in rep.entries if a.verbose else rep.failures:
            run.say("  " + e.line())
        if not rep.ok:
            code = EXIT_PROPERTY
    return code


COMMANDS = {"scale": cmd_scale, "tidy": cmd_tidy, "check": cmd_check, "examples": cmd_examples}


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report on stdout")
    common.add_argument("--timing", action="store_true", help="include the elapsed time")
    common.add_argument("--horizon", type=_positive, default=E.DEFAULT_HORIZON,
                        help="fixpoint horizon (default %(default)s)")
    common.add_argument("--state-bound", type=_positive, default=DEFAULT_STATE_BOUND,
                        help="window bound for sequence-space eliminations (default %(default)s)")
    common.add_argument("--moller-n", type=_positive, default=E.DEFAULT_MOLLER_N,
                        help="terms used by the Moller fallback (default %(default)s)")
    common.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")

    parser = argparse.ArgumentParser(prog="tdlc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("scale", "compute the scale of the endomorphism"),
                           ("tidy", "run the tidying procedure on a subgroup")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--input", required=True, help="JSON input file")
        p.add_argument("--subgroup", help="name of a subgroup in the input")
    p = sub.add_parser("check", parents=[common], help="run property suites over the catalog")
    p.add_argument("--properties", type=lambda s: [x for x in s.split(",") if x],
                   help="comma-separated suite names (default: all)")
    p.add_argument("--max-order", type=_positive, help="largest catalog group order")
    p = sub.add_parser("examples", parents=[common], help="run the embedded fixtures")
    p.add_argument("names", nargs="*", help="fixture names (default: all)")
    p.add_argument("--list", action="store_true", help="list fixtures and exit")
    p.add_argument("--verbose", "-v", action="store_true", help="show every check")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    run = _Run(args)
    try:
        code = COMMANDS[args.command](run)
    except (InputError, UnknownFixture) as exc:
        print(f"tdlc: error: {exc}", file=sys.stderr)
        run.results = {"error": str(exc)}
        code = EXIT_INPUT
        if not args.json:
            return code
    return run.finish(code)


if __name__ == "__main__":
    sys.exit(main())
