"""Command-line front end.

Exit status: 0 on success, 1 when a mathematical check fails, 2 on bad input
or usage.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import List, Optional

from .engine import DEFAULT_EXACT_CAP, SERIES_FIELDS, return_series, series_record
from .errors import WalkError
from .lattice import dump_law, is_symmetric, law_to_json, load_law, mean, second_moment
from .laws import bundled_laws
from .montecarlo import (
    SimConfig,
    first_return_histogram,
    returns_rows,
    simulate_meetings,
    simulate_returns,
)
from .verify import constant_audit, records_to_jsonl, summarize, verify_reduction, verify_sweep

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2


def emit_law_bundle(directory) -> List[Path]:
    """Write the bundled laws as ``<name>.json`` files into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, law in bundled_laws().items():
        path = directory / f"{name}.json"
        dump_law(law, path)
        paths.append(path)
    return paths


def _csv(fields, rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _jsonl(rows) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)


def _fmt(value) -> str:
    return "" if value is None else repr(value)


def _law_cmd(args, out) -> int:
    if args.action == "bundle":
        for path in emit_law_bundle(args.dir):
            out.write(f"{path}\n")
        return EXIT_OK
    law = load_law(args.law)
    if args.action == "validate":
        out.write(f"ok: {len(law)} atoms, denominator {law.denominator}\n")
    else:
        mx, my = mean(law)
        m2 = second_moment(law)
        info = {
            "law": law_to_json(law),
            "symmetric": is_symmetric(law),
            "mean": [str(mx), str(my)],
            "second_moment": str(m2),
            "radius": law.radius,
        }
        out.write(json.dumps(info, sort_keys=True) + "\n")
    return EXIT_OK


def _series_cmd(args, out) -> int:
    law = load_law(args.law)
    rows = [series_record(r) for r in return_series(law, args.n_max, args.backend, args.exact_cap)]
    out.write(_csv(SERIES_FIELDS, rows) if args.output == "csv" else _jsonl(rows))
    return EXIT_OK


def _verify_cmd(args, out) -> int:
    law = load_law(args.law)
    if args.reduction:
        report = verify_reduction(law, args.n_max, args.exact_cap)
        out.write(json.dumps(report.to_json(), sort_keys=True) + "\n")
        return EXIT_OK if report.ok else EXIT_CHECK_FAILED
    records = verify_sweep(law, args.n_max, args.exact_cap)
    summary = summarize(records)
    out.write(records_to_jsonl(records, summary))
    return EXIT_OK if summary["all_pass"] else EXIT_CHECK_FAILED


def _audit_cmd(args, out) -> int:
    result = constant_audit(load_law(args.law), args.n_max, args.exact_cap)
    out.write(json.dumps(result.to_json(), sort_keys=True) + "\n")
    return EXIT_OK if result.ok else EXIT_CHECK_FAILED


def _simulate_cmd(args, out) -> int:
    law = load_law(args.law)
    cfg = SimConfig(args.seed, args.trials, args.horizon, law)
    if args.kind == "returns":
        stats = simulate_returns(cfg)
        exact = None
        if args.horizon <= args.exact_cap:
            exact = [r.p_return for r in return_series(law, args.horizon, "exact", args.exact_cap)]
        rows = returns_rows(stats, exact)
        if args.output == "csv":
            rows = [{k: (v if k == "n" else _fmt(v)) for k, v in r.items()} for r in rows]
            out.write(_csv(("n", "frequency", "exact", "abs_err", "sigma"), rows))
        else:
            out.write(_jsonl(rows))
    elif args.kind == "meetings":
        stats = simulate_meetings(cfg)
        if args.output == "csv":
            rows = [{"trial": i, "meeting_count": c} for i, c in enumerate(stats.meeting_counts)]
            out.write(_csv(("trial", "meeting_count"), rows))
        else:
            out.write(json.dumps({
                "trials": stats.trials,
                "horizon": stats.horizon,
                "mean_meetings": stats.mean_meetings,
                "fraction_met_at_least_once": stats.fraction_met_at_least_once,
                "meeting_counts": stats.meeting_counts,
            }, sort_keys=True) + "\n")
    else:
        hist = first_return_histogram(cfg)
        rows = [{"n": n, "count": c} for n, c in hist.counts.items()]
        rows.append({"n": "overflow", "count": hist.overflow})
        out.write(_csv(("n", "count"), rows) if args.output == "csv" else _jsonl(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recurwalk",
        description="Exact and simulated random walks on Z^2; finite-n recurrence checks.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def law_arg(p):
        p.add_argument("--law", required=True, help="step-law JSON file")

    def cap_arg(p):
        p.add_argument("--exact-cap", type=int, default=DEFAULT_EXACT_CAP,
                       help="largest n the exact backend accepts (default %(default)s)")

    p = sub.add_parser("law", help="validate, describe or emit step-law files")
    p.set_defaults(func=_law_cmd)
    law_sub = p.add_subparsers(dest="action", required=True, metavar="ACTION")
    law_arg(law_sub.add_parser("validate", help="check a law file"))
    law_arg(law_sub.add_parser("show", help="print symmetry and moments of a law"))
    law_sub.add_parser("bundle", help="write the bundled laws").add_argument(
        "--dir", required=True, help="output directory")

    p = sub.add_parser("series", help="return-probability series and partial sums")
    law_arg(p)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--backend", choices=("exact", "float"), default="exact")
    p.add_argument("--output", choices=("csv", "json"), default="csv")
    cap_arg(p)
    p.set_defaults(func=_series_cmd)

    p = sub.add_parser("verify", help="check the proof chain for n = 1..n-max")
    law_arg(p)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--reduction", action="store_true",
                   help="check the two-walk reduction instead (any law)")
    cap_arg(p)
    p.set_defaults(func=_verify_cmd)

    p = sub.add_parser("audit", help="audit the constant in P[S_2n=0] >= C/(4n)")
    law_arg(p)
    p.add_argument("--n-max", type=int, required=True)
    cap_arg(p)
    p.set_defaults(func=_audit_cmd)

    p = sub.add_parser("simulate", help="seeded Monte Carlo simulation")
    p.add_argument("kind", choices=("returns", "meetings", "histogram"))
    law_arg(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--output", choices=("csv", "json"), default="csv")
    cap_arg(p)
    p.set_defaults(func=_simulate_cmd)
    return parser


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except WalkError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
