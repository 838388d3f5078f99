"""Command line front end.

    paphelp validate TABLE
    paphelp solve TABLE --order 6
    paphelp check-pap SmallGroup_216_153 --order 6 --format machine

TABLE is a path to a JSON character table, the name of a bundled fixture
(``paphelp validate --list``), or ``abelian:2,4`` for the abelian group with
the given invariant factors.

Exit codes: 0 completed, 1 usage error, 2 table validation failure,
3 resource limit hit for at least one order.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

from .engine import EngineError, PAPVector, VirtualUnit
from .group_model import (
    CharacterTable,
    TableError,
    build_abelian_table,
    fixture_names,
    load_fixture,
    load_table,
)
from .solver import (
    AnalysisReport,
    OrderReport,
    PAPAssumptionError,
    SolutionSet,
    SolverOptions,
    _flags,
    _order_verdicts,
    analyze,
)

__all__ = ["main", "run", "CliConfig", "resolve_table", "report_to_document", "report_from_document"]

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_RESOURCE = 0, 1, 2, 3

COMMANDS = ("validate", "solve", "check-zc", "check-pap", "check-genbp", "check-sp", "check-pq")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    command: str
    table: str | None
    orders: object = "all"
    pap: bool = False
    acknowledge_pap: bool = False
    brauer: object = True
    cl_congruences: bool = True
    folklore_congruences: bool = True
    budget: int = 10**8
    workers: int = 1
    format: str = "text"
    out: str | None = None
    list_fixtures: bool = False

    @classmethod
    def from_args(cls, args) -> "CliConfig":
        if args.command == "validate":
            return cls(args.command, args.table, format=args.format, out=args.out, list_fixtures=args.list)
        if args.pap and args.command == "check-pap":
            raise UsageError("check-pap inspects the standard method; drop --pap")
        if args.budget < 1 or args.workers < 1:
            raise UsageError("--budget and --workers must be positive")
        return cls(
            command=args.command,
            table=args.table,
            orders=_parse_orders(args.order),
            pap=args.pap,
            acknowledge_pap=args.acknowledge_pap_assumption,
            brauer=_parse_brauer(args.brauer),
            cl_congruences=not args.no_cl_congruences,
            folklore_congruences=not args.no_folklore_congruences,
            budget=args.budget,
            workers=args.workers,
            format=args.format,
            out=args.out,
        )

    def solver_options(self) -> SolverOptions:
        return SolverOptions(
            use_brauer=self.brauer,
            use_cl_congruences=self.cl_congruences,
            use_folklore_congruences=self.folklore_congruences,
            budget=self.budget,
            workers=self.workers,
        )


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def resolve_table(spec: str) -> CharacterTable:
    if spec.startswith("abelian:"):
        try:
            factors = [int(x) for x in spec[len("abelian:"):].split(",") if x]
        except ValueError:
            raise UsageError(f"bad invariant factors in {spec!r}") from None
        if not factors or any(f < 1 for f in factors):
            raise UsageError(f"bad invariant factors in {spec!r}")
        return build_abelian_table(factors)
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        if not path.is_file():
            raise UsageError(f"no such file: {spec}")
        return load_table(path)
    if spec in fixture_names():
        return load_fixture(spec)
    raise UsageError(f"{spec!r} is neither a file nor a bundled fixture ({', '.join(fixture_names())})")


def _parse_orders(text: str):
    if text == "all":
        return "all"
    try:
        orders = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad --order {text!r}") from None
    if any(n < 1 for n in orders):
        raise UsageError("orders must be positive")
    return orders


def _parse_brauer(text: str):
    if text == "auto":
        return True
    if text == "none":
        return False
    try:
        primes = tuple(sorted({int(x) for x in text.split(",")}))
    except ValueError:
        raise UsageError(f"bad --brauer {text!r}") from None
    return primes


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="paphelp", description="HeLP and PAP-adapted HeLP analysis of integral group rings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("table", nargs="?", help="JSON table, fixture name or abelian:f1,f2,...")
        p.add_argument("--format", choices=("text", "machine"), default="text")
        p.add_argument("--out", help="write the report to this file instead of stdout")
        if name == "validate":
            p.add_argument("--list", action="store_true", help="list bundled fixtures")
            continue
        p.add_argument("--order", default="all", help="n, n1,n2,... or all (default: all divisors of the exponent)")
        p.add_argument("--pap", action="store_true", help="use the PAP-adapted method")
        p.add_argument("--acknowledge-pap-assumption", action="store_true")
        p.add_argument("--brauer", default="auto", help="auto, none, or a comma separated prime list")
        p.add_argument("--no-cl-congruences", action="store_true")
        p.add_argument("--no-folklore-congruences", action="store_true")
        p.add_argument("--budget", type=int, default=10**8, help="search node budget per order")
        p.add_argument("--workers", type=int, default=1)
    return parser


# --- machine documents -------------------------------------------------------


def _order_document(table: CharacterTable, rep: OrderReport) -> dict:
    doc = {"n": rep.n}
    if rep.error:
        doc["status"] = "resource_limit"
        doc["error"] = rep.error
        doc["solutions"] = []
    elif table.exponent % rep.n:
        doc["status"] = "impossible_by_exponent"
        doc["solutions"] = []
    else:
        doc["status"] = "completed"
        sols = rep.solutions
        doc["solutions"] = [
            {
                "entries": m.to_json(table),
                "trivial": t,
                "nonnegative": nn,
                "pap_ok": ok,
            }
            for m, t, nn, ok in zip(sols.members, sols.is_trivial, sols.all_nonnegative, sols.pap_ok)
        ]
    doc["verdicts"] = {
        "zc_by_help": rep.zc_by_help,
        "pap_by_help": rep.pap_by_help,
        "genbp": rep.genbp,
        "order_excluded": rep.order_excluded,
        "group_has_order": rep.group_has_order,
    }
    doc["pap_violations"] = [
        {
            "solution": X.to_json(table),
            "violations": [
                {"d": d, "class": table.classes[c].name, "pushed_sum": pushed, "entry": actual}
                for d, c, pushed, actual in bad
            ],
        }
        for X, bad in rep.pap_violations
    ]
    return doc


def report_to_document(report: AnalysisReport, command: str = "solve") -> dict:
    t = report.table
    return {
        "table_name": t.name,
        "command": command,
        "method": report.method,
        "options": report.options.describe(),
        "per_order": [_order_document(t, o) for o in report.orders],
        "group_summary": {
            "spectrum": report.spectrum_summary(),
            "prime_graph": report.prime_graph_summary(),
        },
        "provenance": {str(n): v for n, v in sorted(report.provenance.items())},
    }


def report_from_document(doc: dict, table: CharacterTable) -> AnalysisReport:
    """Rebuild a report from its machine document, recomputing every verdict."""
    kind = doc["method"]
    opts = doc["options"]
    ub = opts["brauer"]
    options = SolverOptions(
        use_brauer=ub if isinstance(ub, bool) else tuple(ub),
        use_cl_congruences=opts["cohn_livingstone_congruences"],
        use_folklore_congruences=opts["folklore_congruences"],
        budget=opts.get("budget", 10**8),
    )
    orders = []
    for od in doc["per_order"]:
        n = od["n"]
        rep = OrderReport(n, None, group_has_order=n in table.spectrum)
        if od["status"] == "resource_limit":
            rep.error = od["error"]
        elif od["status"] == "impossible_by_exponent":
            rep.solutions = SolutionSet(n, kind, [])
            rep.order_excluded = not rep.group_has_order
            rep.genbp = "holds"
            rep.zc_by_help = "proven"
            rep.pap_by_help = None if kind == "pap" else "proven"
        else:
            cls = PAPVector if kind == "pap" else VirtualUnit
            members = [cls.from_json(s["entries"], table) for s in od["solutions"]]
            sols = SolutionSet(n, kind, members)
            _flags(table, sols)
            rep.solutions = sols
            _order_verdicts(table, rep, kind)
        orders.append(rep)
    provenance = {int(k): v for k, v in doc.get("provenance", {}).items()}
    return AnalysisReport(table, kind, options, orders, provenance)


# --- text rendering ----------------------------------------------------------


def _fmt_entries(doc: dict) -> str:
    if "rows" in doc:
        parts = []
        for d, entries in doc["rows"].items():
            inner = ", ".join(f"{c}:{x}" for c, x in entries.items())
            parts.append(f"d={d} {{{inner}}}")
        return "; ".join(parts)
    return "{" + ", ".join(f"{c}:{x}" for c, x in doc["values"].items()) + "}"


def render_text(doc: dict, command: str) -> str:
    out = [f"table {doc['table_name']}  method {doc['method']}  options {json.dumps(doc['options'], sort_keys=True)}"]
    for od in doc["per_order"]:
        v = od["verdicts"]
        head = f"n={od['n']}"
        if od["status"] == "resource_limit":
            out.append(f"{head}: resource limit ({od['error']})")
            continue
        if od["status"] == "impossible_by_exponent":
            out.append(f"{head}: impossible by exponent")
            continue
        sols = od["solutions"]
        if command == "solve":
            out.append(f"{head}: {len(sols)} solution(s)")
            for s in sols:
                flags = [k for k in ("trivial", "nonnegative", "pap_ok") if s[k]]
                out.append(f"  {_fmt_entries(s['entries'])}  [{' '.join(flags) or '-'}]")
        elif command == "check-zc":
            out.append(f"{head}: zc {v['zc_by_help']} ({len(sols)} solution(s), "
                       f"{sum(not s['nonnegative'] for s in sols)} with negative entries)")
        elif command == "check-pap":
            out.append(f"{head}: pap {v['pap_by_help']}")
            for entry in od["pap_violations"]:
                out.append(f"  solution {_fmt_entries(entry['solution'])}")
                for bad in entry["violations"]:
                    out.append(
                        f"    d={bad['d']} class {bad['class']}: sum over D^d=C of X[1][D] = "
                        f"{bad['pushed_sum']} but X[d][C] = {bad['entry']}"
                    )
        elif command == "check-genbp":
            out.append(f"{head}: genbp {v['genbp']}")
    gs = doc["group_summary"]
    if command == "check-sp" or command == "solve":
        sp = gs["spectrum"]
        line = f"spectrum: group {sp['group_spectrum']} units {sp['unit_spectrum']}"
        if sp["unchecked_orders"]:
            line += f" unchecked orders {sp['unchecked_orders']}"
        out.append(f"{line} -> {sp['verdict']}")
    if command == "check-pq" or command == "solve":
        pq = gs["prime_graph"]
        line = f"prime graph: group edges {pq['group_edges']} unit edges {pq['unit_edges']}"
        if pq["unchecked_edges"]:
            line += f" unchecked {pq['unchecked_edges']}"
        out.append(f"{line} -> {pq['verdict']}")
    return "\n".join(out) + "\n"


def _validate_text(table: CharacterTable) -> str:
    lines = [
        f"table {table.name}: valid",
        f"  order {table.order}, exponent {table.exponent}, {table.num_classes} classes",
        f"  classes {' '.join(table.class_names())}",
        f"  degrees {list(table.degrees)}",
        f"  brauer primes {sorted(table.brauer)}",
        f"  pap_assumed {table.pap_assumed}",
    ]
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def run(cfg: CliConfig) -> int:
    if cfg.command == "validate" and cfg.list_fixtures:
        _emit("\n".join(fixture_names()) + "\n", cfg.out)
        return EXIT_OK
    if not cfg.table:
        raise UsageError("a table argument is required")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        table = resolve_table(cfg.table)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if cfg.command == "validate":
        if cfg.format == "machine":
            text = _dump({
                "table_name": table.name,
                "valid": True,
                "order": table.order,
                "exponent": table.exponent,
                "classes": table.class_names(),
                "brauer_primes": sorted(table.brauer),
                "pap_assumed": table.pap_assumed,
            })
        else:
            text = _validate_text(table)
        _emit(text, cfg.out)
        return EXIT_OK

    report = analyze(table, cfg.orders, cfg.solver_options(), pap=cfg.pap, acknowledge_pap=cfg.acknowledge_pap)
    doc = report_to_document(report, cfg.command)
    _emit(_dump(doc) if cfg.format == "machine" else render_text(doc, cfg.command), cfg.out)
    return EXIT_RESOURCE if any(o.error for o in report.orders) else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(CliConfig.from_args(args))
    except TableError as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (UsageError, EngineError, PAPAssumptionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
