"""Command-line entry point: ``crowdlabor <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from crowdlabor.calibration import fit_lognormal, point_elasticity, supply_fraction
from crowdlabor.estimation import impute_wage
from crowdlabor.focal import focal_point_test
from crowdlabor.harness.analysis import AnalysisOptions, analyze, emit_json, emit_series
from crowdlabor.harness.config import DEFAULT_MU, DEFAULT_SIGMA, PRESETS, PopulationConfig
from crowdlabor.harness.records import (
    RecordError,
    infer_schedules,
    read_estimate_wages,
    read_records,
    records_to_csv,
    write_estimates,
)
from crowdlabor.harness.simulate import simulate_experiment
from crowdlabor.schedule import make_schedule


def _num(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _table(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2)
    if not rows:
        return ""
    cols = list(rows[0])
    if fmt == "text":
        cells = [[c for c in cols]] + [
            [f"{v:.10g}" if isinstance(v, float) else str(v) for v in r.values()] for r in rows
        ]
        widths = [max(len(row[i]) for row in cells) for i in range(len(cols))]
        return "\n".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_num(v) for v in r.values()])
    return buf.getvalue()


def _write(text: str, output: str | None) -> None:
    if output in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")


def _read_input(path: str) -> io.StringIO:
    if path == "-":
        return io.StringIO(sys.stdin.read())
    with open(path, newline="") as fh:
        return io.StringIO(fh.read())


def _schedules(args, records=None):
    if args.config:
        cfg = PopulationConfig.load(args.config)
        return {g.label: g.schedule for g in cfg.groups}
    if args.group:
        out = {}
        for spec in args.group:
            label, _, pbar = spec.partition("=")
            if not label or not pbar:
                raise SystemExit(f"--group expects LABEL=MAX_EARNINGS, got {spec!r}")
            out[label] = make_schedule(float(pbar), args.half_life, args.cap, args.show_up_fee)
        return out
    if records is None:
        raise SystemExit("schedules needed: pass --config or --group LABEL=MAX_EARNINGS")
    return infer_schedules(records, args.half_life, args.cap)


def _load_records(args):
    text = _read_input(args.input).getvalue()
    schedules = _schedules(args, read_records(io.StringIO(text)))
    return read_records(io.StringIO(text), schedules), schedules


def _wage_grid(args) -> list[float]:
    if args.wages:
        return [float(w) for w in args.wages.split(",")]
    return list(np.geomspace(args.w_min, args.w_max, args.points))


def cmd_schedule(args) -> None:
    s = make_schedule(args.max_earnings, args.half_life, args.cap, args.show_up_fee)
    rows = []
    for y in (int(v) for v in args.rows.split(",")):
        total = s.total_payment(y)
        nxt = s.extrapolated_marginal(y + 1)
        rows.append(
            {"y": y, "P(y)": total, "P(y)/Pbar": total / s.pbar, "p(y+1)": nxt, "p(y+1)/Pbar": nxt / s.pbar}
        )
    _write(_table(rows, args.format), args.output)


def cmd_simulate(args) -> None:
    if args.config:
        cfg = PopulationConfig.load(args.config)
    else:
        cfg = PRESETS[args.preset]()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.n_workers is not None:
        overrides["n_workers"] = args.n_workers
    if args.rho is not None:
        overrides["rho"] = args.rho
    if overrides:
        cfg = PopulationConfig.from_dict({**cfg.to_dict(), **overrides})
    records = simulate_experiment(cfg, censor_nonstarters=args.censor_nonstarters)
    if args.format == "json":
        text = json.dumps([r.__dict__ for r in records], indent=2)
    else:
        text = records_to_csv(records)
    _write(text, args.output)


def cmd_impute(args) -> None:
    records, schedules = _load_records(args)
    rows = [(r.worker_id, impute_wage(schedules[r.group], r.y, r.t_bar)) for r in records if r.y > 0]
    n_zero = sum(r.y == 0 for r in records)
    if n_zero:
        print(f"{n_zero} worker(s) with zero output excluded", file=sys.stderr)
    buf = io.StringIO()
    write_estimates(rows, buf)
    _write(buf.getvalue(), args.output)


def cmd_calibrate(args) -> None:
    wages = read_estimate_wages(_read_input(args.input), include_censored=not args.exclude_censored)
    probs = tuple(float(p) for p in args.probs.split(","))
    result = fit_lognormal(wages, probs)
    if args.format == "csv":
        rows = [{"key": "mu", "value": result.mu}, {"key": "sigma", "value": result.sigma},
                {"key": "n", "value": result.n}]
        rows += [{"key": f"q{p:g}", "value": q} for p, q in result.quantiles.items()]
        _write(_table(rows, "csv"), args.output)
    else:
        _write(json.dumps(result.to_dict(), indent=2), args.output)


def cmd_supply(args) -> None:
    rows = []
    for w in _wage_grid(args):
        frac = supply_fraction(args.mu, args.sigma, w)
        rows.append({"wage_usd_per_hr": float(w), "fraction": frac, "supply": args.n_s * frac})
    _write(_table(rows, args.format), args.output)


def cmd_elasticity(args) -> None:
    rows = [
        {"wage_usd_per_hr": float(w), "elasticity": point_elasticity(args.mu, args.sigma, w)}
        for w in _wage_grid(args)
    ]
    _write(_table(rows, args.format), args.output)


def cmd_focal(args) -> None:
    records, schedules = _load_records(args)
    labels = [args.only] if args.only else sorted({r.group for r in records})
    results = {}
    for g in labels:
        ys = [r.y for r in records if r.group == g and r.y > 0]
        if not ys:
            raise SystemExit(f"group {g!r} has no workers with positive output")
        results[g] = focal_point_test(
            ys, schedules[g], m=args.modulus, mode=args.pw_mode, max_y=args.max_y,
            exclude_terminal=args.exclude_terminal,
        )
    if args.format == "csv":
        rows = [
            {"group": g, "successes": r.successes, "n": r.n, "q": r.q, "p_value": r.p_value}
            for g, r in results.items()
        ]
        _write(_table(rows, "csv"), args.output)
    else:
        _write(json.dumps({g: r.to_dict() for g, r in results.items()}, indent=2), args.output)


def cmd_analyze(args) -> None:
    records, schedules = _load_records(args)
    options = AnalysisOptions(
        early_quit_cutoff=args.early_quit,
        baseline=args.baseline,
        robust=args.robust,
        include_censored=not args.exclude_censored,
        pw_mode=args.pw_mode,
        exclude_terminal=args.exclude_terminal,
    )
    report = analyze(records, schedules, options)
    if args.series_dir:
        emit_series(report, args.series_dir)
    _write(emit_json(report), args.output)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (overrides config)")
    common.add_argument("--output", "-o", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json", "text"), default=None)

    sched = argparse.ArgumentParser(add_help=False)
    sched.add_argument("--config", help="population config JSON supplying group schedules")
    sched.add_argument("--group", action="append", metavar="LABEL=MAX_EARNINGS",
                       help="schedule for one group (repeatable)")
    sched.add_argument("--half-life", type=float, default=10.0)
    sched.add_argument("--cap", type=int, default=200)
    sched.add_argument("--show-up-fee", type=float, default=0.0)

    focal = argparse.ArgumentParser(add_help=False)
    focal.add_argument("--pw-mode", choices=("set", "multiset"), default="set")
    focal.add_argument("--exclude-terminal", action="store_true",
                       help="drop the whole-cent band just below the asymptote from the realizable set")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--mu", type=float, default=DEFAULT_MU)
    grid.add_argument("--sigma", type=float, default=DEFAULT_SIGMA)
    grid.add_argument("--wages", help="comma-separated wages in dollars/hour")
    grid.add_argument("--w-min", type=float, default=0.05)
    grid.add_argument("--w-max", type=float, default=50.0)
    grid.add_argument("--points", type=int, default=100)

    parser = argparse.ArgumentParser(prog="crowdlabor", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schedule", parents=[common], help="tabulate a payment schedule")
    p.add_argument("--max-earnings", type=float, default=10.0)
    p.add_argument("--half-life", type=float, default=10.0)
    p.add_argument("--cap", type=int, default=200)
    p.add_argument("--show-up-fee", type=float, default=0.0)
    p.add_argument("--rows", default="1,5,25", help="comma-separated outputs y")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("simulate", parents=[common], help="generate synthetic session records")
    p.add_argument("--config", help="population config JSON")
    p.add_argument("--preset", choices=sorted(PRESETS), default="experiment-b")
    p.add_argument("--n-workers", type=int)
    p.add_argument("--rho", type=float)
    p.add_argument("--censor-nonstarters", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("impute", parents=[common, sched], help="impute reservation wages")
    p.add_argument("input", help="session records CSV ('-' for stdin)")
    p.set_defaults(func=cmd_impute)

    p = sub.add_parser("calibrate", parents=[common], help="fit the log-normal wage distribution")
    p.add_argument("input", help="wage estimates CSV ('-' for stdin)")
    p.add_argument("--exclude-censored", action="store_true")
    p.add_argument("--probs", default="0.25,0.5,0.75")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("supply", parents=[common, grid], help="extensive-margin supply curve")
    p.add_argument("--n-s", type=float, default=1.0, help="population size")
    p.set_defaults(func=cmd_supply)

    p = sub.add_parser("elasticity", parents=[common, grid], help="point elasticity of supply")
    p.set_defaults(func=cmd_elasticity)

    p = sub.add_parser("focal-test", parents=[common, sched, focal], help="modulo-m earnings test")
    p.add_argument("input", help="session records CSV ('-' for stdin)")
    p.add_argument("--modulus", type=int, default=5)
    p.add_argument("--max-y", type=int, default=None)
    p.add_argument("--only", help="restrict to one group")
    p.set_defaults(func=cmd_focal)

    p = sub.add_parser("analyze", parents=[common, sched, focal], help="full analysis report")
    p.add_argument("input", help="session records CSV ('-' for stdin)")
    p.add_argument("--early-quit", type=int, default=10)
    p.add_argument("--baseline")
    p.add_argument("--robust", choices=("HC0", "HC1"), default="HC1")
    p.add_argument("--exclude-censored", action="store_true")
    p.add_argument("--series-dir", help="directory for figure-data CSVs")
    p.set_defaults(func=cmd_analyze)
    return parser


DEFAULT_FORMATS = {"calibrate": "json", "focal-test": "json", "analyze": "json"}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = DEFAULT_FORMATS.get(args.command, "csv")
    try:
        args.func(args)
    except (RecordError, ValueError, OSError) as exc:
        print(f"crowdlabor {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
