"""Command-line front end: ``boolelab {run,bounds,feasible,label,report}``.

Exit codes: 0 success, 1 usage error, 2 capacity error, 3 a "violated"
verdict when ``--assert-respected`` is given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .bounds import CapacityError, DEFAULT_MAX_VARIABLES, detect_cyclicity, enumerate_bounds
from .core import Expression, TrialLog, lg_expression
from .experiment import Experiment
from .feasibility import FeasibilityProblem, check_feasibility
from .labeling import LabelingScheme, label, slot_labels, variables
from .scenarios import Report, analyze, get_scenario, list_scenarios

OUT_ENV = "BOOLELAB_OUT"
EXIT_OK, EXIT_USAGE, EXIT_CAPACITY, EXIT_VIOLATED = 0, 1, 2, 3

NAMED_EXPRESSIONS = {
    "lg": lambda: lg_expression(("1", "2")),
    "lg-three": lambda: lg_expression(("1", "2", "3")),
    "chain": lambda: Expression.from_pairs([[("a", "1"), ("b", "2")], [("b", "1"), ("c", "2")]]),
    "single": lambda: Expression.from_pairs([[("a", "1"), ("b", "2")]]),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_expression(text: str, co_dated: bool = False) -> Expression:
    """A named expression, a JSON file, or inline ``a@1*b@2 + a@1*c@2``."""
    if text in NAMED_EXPRESSIONS:
        return NAMED_EXPRESSIONS[text]()
    path = Path(text)
    if path.suffix == ".json" and path.exists():
        data = json.loads(path.read_text())
        return Expression.from_dict(data.get("expression", data))
    terms = []
    for term in text.split("+"):
        slots = []
        for factor in term.split("*"):
            factor = factor.strip()
            if not factor:
                raise UsageError(f"empty factor in expression {text!r}")
            setting, _, station = factor.partition("@")
            slots.append((setting.strip(), station.strip() or "1"))
        terms.append(slots)
    try:
        return Expression.from_pairs(terms, co_dated)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _scheme(text: str) -> LabelingScheme:
    try:
        return LabelingScheme.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _targets(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"targets must be comma-separated numbers, got {text!r}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    schemes = ", ".join(s.value for s in LabelingScheme)
    p = _Parser(prog="boolelab", description="Labeling-dependent Boole/Bell bounds and simulations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_format(sp, default="text"):
        sp.add_argument("--format", choices=("text", "json", "csv"), default=default, help="output format on stdout")

    def add_expr(sp):
        sp.add_argument("--expr", default="lg", help=f"named ({', '.join(NAMED_EXPRESSIONS)}), JSON file, or inline 'a@1*b@2+...'")
        sp.add_argument("--co-dated", action="store_true", help="inline expression: all terms share one date")
        sp.add_argument("--labeling", type=_scheme, default=LabelingScheme.SETTING_ONLY, help=f"labeling scheme: {schemes}")

    r = sub.add_parser("run", help="run a built-in scenario or an experiment file")
    r.add_argument("scenario", nargs="?", help="scenario name (see --list)")
    r.add_argument("--experiment", help="experiment definition JSON instead of a scenario")
    r.add_argument("--list", action="store_true", help="list built-in scenarios and exit")
    r.add_argument("--n", type=int, help="number of trial groups")
    r.add_argument("--seed", type=int, help="64-bit unsigned seed")
    r.add_argument("--rotation", choices=("round-robin", "uniform-random"), help="how dates are allotted to terms")
    r.add_argument("--labeling", type=_scheme, default=LabelingScheme.SETTING_ONLY, help=f"headline scheme: {schemes}")
    r.add_argument("--workers", type=int, default=1, help="worker threads")
    r.add_argument("--out", help=f"directory for report.json, log.jsonl, log.csv, summary.csv (default ${OUT_ENV})")
    r.add_argument("--assert-respected", action="store_true", help="exit 3 if the headline verdict is violated")
    add_format(r)

    b = sub.add_parser("bounds", help="tight bounds of an expression under a labeling scheme")
    add_expr(b)
    b.add_argument("--max-variables", type=int, default=DEFAULT_MAX_VARIABLES, help="enumeration cap")
    b.add_argument("--workers", type=int, default=1, help="worker threads")
    add_format(b)

    f = sub.add_parser("feasible", help="does a joint distribution reproduce the target correlations?")
    add_expr(f)
    f.add_argument("--targets", type=_targets, help="comma-separated target expectation per term")
    f.add_argument("--problem", help="FeasibilityProblem JSON document (overrides --expr/--labeling/--targets)")
    add_format(f)

    lab = sub.add_parser("label", help="logical variable ids of an expression or a single descriptor")
    add_expr(lab)
    lab.add_argument("--setting", help="label one descriptor: setting id")
    lab.add_argument("--station", help="station id")
    lab.add_argument("--time", type=int, default=0, help="time index")
    lab.add_argument("--slot", type=int, default=0, help="slot serial")
    add_format(lab)

    rep = sub.add_parser("report", help="analyse a saved log.jsonl")
    rep.add_argument("log", help="path to a log.jsonl written by 'run'")
    rep.add_argument("--labeling", type=_scheme, default=LabelingScheme.SETTING_ONLY, help=f"headline scheme: {schemes}")
    rep.add_argument("--assert-respected", action="store_true", help="exit 3 if the headline verdict is violated")
    add_format(rep)
    return p


# --------------------------------------------------------------------------


def _report_text(report: Report, headline: LabelingScheme) -> str:
    c = report.correlations
    lines = [f"scenario: {report.scenario}", f"model: {report.log.model_name}", f"n: {report.n}", f"seed: {report.seed}"]
    for i, t in enumerate(c.per_term):
        lines.append(f"term {i}: estimate {t.estimate:.6f} count {t.count} std_error {t.std_error:.6f}")
    lines.append(f"gamma_mean: {c.gamma_mean:.6f} (std_error {c.combined_std_error:.6f})")
    for (s, st), m in sorted(c.singles.items()):
        lines.append(f"single {s}@{st}: {m:.6f}")
    for scheme, bound in report.bounds.items():
        v = c.verdicts[scheme.value]
        mark = "*" if scheme is headline else " "
        lines.append(
            f"{mark}{scheme.value:24s} bound [{bound.min}, {bound.max}] nontrivial {str(bound.nontrivial).lower():5s} "
            f"cycle {str(report.cyclicity[scheme].has_cycle).lower():5s} verdict {v.label} margin {v.margin:.6f}"
        )
    return "\n".join(lines) + "\n"


def _emit_report(report: Report, args) -> int:
    if args.format == "json":
        out = _dump({**report.to_dict(), "headline": args.labeling.value})
    elif args.format == "csv":
        out = report.correlations.to_csv()
    else:
        out = _report_text(report, args.labeling)
    sys.stdout.write(out)
    if args.assert_respected and report.verdict(args.labeling) == "violated":
        return EXIT_VIOLATED
    return EXIT_OK


def _cmd_run(args) -> int:
    if args.list:
        for name, desc, anchor in list_scenarios():
            sys.stdout.write(f"{name}\t{anchor}\t{desc}\n")
        return EXIT_OK
    if args.experiment:
        exp, name = Experiment.load(args.experiment), Path(args.experiment).stem
    elif args.scenario:
        try:
            exp, name = get_scenario(args.scenario).build(), args.scenario
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    else:
        raise UsageError("run needs a scenario name, --experiment or --list")
    if args.n is not None and args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    log = exp.run(args.n, args.seed, args.rotation, args.workers)
    report = analyze(log, name=name)
    out_dir = args.out or os.environ.get(OUT_ENV)
    if out_dir:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / "report.json").write_text(_dump({**report.to_dict(), "headline": args.labeling.value}))
        (d / "log.jsonl").write_text(log.to_jsonl())
        (d / "log.csv").write_text(log.to_csv())
        (d / "summary.csv").write_text(report.correlations.to_csv())
    return _emit_report(report, args)


def _cmd_bounds(args) -> int:
    expr = parse_expression(args.expr, args.co_dated)
    bound = enumerate_bounds(expr, args.labeling, max_variables=args.max_variables, workers=args.workers)
    cyc = detect_cyclicity(expr, args.labeling)
    data = {**bound.to_dict(), "cyclicity": cyc.to_dict()}
    if args.format == "json":
        sys.stdout.write(_dump(data))
    elif args.format == "csv":
        sys.stdout.write("scheme,min,max,trivial_min,trivial_max,nontrivial,variable_count,has_cycle\n")
        sys.stdout.write(
            f"{bound.scheme.value},{bound.min},{bound.max},{bound.trivial_min},{bound.trivial_max},"
            f"{str(bound.nontrivial).lower()},{bound.variable_count},{str(cyc.has_cycle).lower()}\n"
        )
    else:
        witness = " ".join(f"{k}={v:+d}" for k, v in bound.witness_min.items())
        sys.stdout.write(
            f"labeling: {bound.scheme.value}\nvariables: {bound.variable_count}\nmin: {bound.min}\nmax: {bound.max}\n"
            f"trivial: [{bound.trivial_min}, {bound.trivial_max}]\nnontrivial: {str(bound.nontrivial).lower()}\n"
            f"has_cycle: {str(cyc.has_cycle).lower()}\ncycle_terms: {cyc.cycle_witness}\nwitness_min: {witness}\n"
        )
    return EXIT_OK


def _cmd_feasible(args) -> int:
    if args.problem:
        problem = FeasibilityProblem.from_dict(json.loads(Path(args.problem).read_text()))
    else:
        if args.targets is None:
            raise UsageError("feasible needs --targets or --problem")
        expr = parse_expression(args.expr, args.co_dated)
        try:
            problem = FeasibilityProblem(expr, args.labeling, tuple(args.targets))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    v = check_feasibility(problem)
    if args.format == "json":
        sys.stdout.write(_dump({**v.to_dict(), "labeling": problem.scheme.value}))
    elif args.format == "csv":
        sys.stdout.write("probability," + ",".join(v.variables) + "\n")
        for assignment, p in v.witness_distribution():
            sys.stdout.write(f"{p!r}," + ",".join(str(assignment[x]) for x in v.variables) + "\n")
    else:
        sys.stdout.write(("feasible" if v.feasible else "infeasible") + "\n")
        if v.certificate is not None:
            sys.stdout.write(f"certificate: sum of targets {sum(problem.targets)!r} outside bound "
                             f"[{v.certificate.min}, {v.certificate.max}]\n")
        for assignment, p in v.witness_distribution():
            sys.stdout.write(f"{p!r} " + " ".join(f"{k}={x:+d}" for k, x in assignment.items()) + "\n")
    return EXIT_OK


def _cmd_label(args) -> int:
    if args.setting:
        key = label(args.setting, args.station or "1", args.time, args.slot, args.labeling)
        sys.stdout.write(_dump({"id": key}) if args.format == "json" else key + "\n")
        return EXIT_OK
    expr = parse_expression(args.expr, args.co_dated)
    rows = slot_labels(expr, args.labeling)
    names = variables(expr, args.labeling)
    if args.format == "json":
        sys.stdout.write(_dump({"labeling": args.labeling.value, "count": len(names), "variables": names, "slots": rows}))
    elif args.format == "csv":
        sys.stdout.write("term,slot,setting,station,id\n")
        for ti, (term, row) in enumerate(zip(expr.terms, rows)):
            for si, (slot, key) in enumerate(zip(term.slots, row)):
                sys.stdout.write(f"{ti},{si},{slot.setting},{slot.station},{key}\n")
    else:
        sys.stdout.write(f"labeling: {args.labeling.value}\ncount: {len(names)}\n")
        for ti, row in enumerate(rows):
            sys.stdout.write(f"term {ti}: {' * '.join(row)}\n")
    return EXIT_OK


def _cmd_report(args) -> int:
    log = TrialLog.from_jsonl(Path(args.log).read_text())
    return _emit_report(analyze(log, name=Path(args.log).stem), args)


COMMANDS = {"run": _cmd_run, "bounds": _cmd_bounds, "feasible": _cmd_feasible, "label": _cmd_label, "report": _cmd_report}


def _bind_targets(argv: list[str]) -> list[str]:
    # "--targets -1,-1,-1" would otherwise be read as an option
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--targets" and i + 1 < len(argv):
            out.append(f"--targets={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _bind_targets(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except CapacityError as exc:
        sys.stderr.write(f"boolelab: capacity error: {exc}\n")
        return EXIT_CAPACITY
    except (UsageError, FileNotFoundError, KeyError, ValueError) as exc:
        sys.stderr.write(f"boolelab: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
