"""Analysis pipeline over session records: regressions, imputed wages, calibration, focal test, figure data."""

from __future__ import annotations

import csv
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from crowdlabor.calibration import CalibrationResult, fit_lognormal, point_elasticity
from crowdlabor.estimation import WageEstimate, impute_wage
from crowdlabor.focal import FocalTestResult, focal_point_test
from crowdlabor.harness.records import SessionRecord, fmt
from crowdlabor.schedule import PaymentSchedule, whole_cents
from crowdlabor.stats import RegressionFit, geometric_mean, kde, ols_robust


@dataclass(frozen=True)
class AnalysisOptions:
    early_quit_cutoff: int = 10
    baseline: str | None = None  # group absorbed into the intercept; default first label in sorted order
    robust: str = "HC1"
    include_censored: bool = True
    quantile_probs: tuple[float, ...] = (0.25, 0.5, 0.75)
    focal_modulus: int = 5
    pw_mode: str = "set"
    focal_max_y: int | None = None
    exclude_terminal: bool = False
    kde_points: int = 200


@dataclass
class AnalysisReport:
    groups: list[str]
    counts: dict[str, int]
    regressions: dict[str, RegressionFit | None]
    geometric_means: dict[str, float]
    estimates: list[tuple[str, WageEstimate]]
    calibration: CalibrationResult | None
    elasticity_table: list[dict]
    focal: dict[str, FocalTestResult]
    series: dict[str, list[dict]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "groups": self.groups,
            "counts": self.counts,
            "regressions": {k: (v.to_dict() if v else None) for k, v in self.regressions.items()},
            "geometric_mean_wage_usd_per_hr": self.geometric_means,
            "calibration": self.calibration.to_dict() if self.calibration else None,
            "elasticity_table": self.elasticity_table,
            "focal": {k: v.to_dict() for k, v in self.focal.items()},
            "notes": self.notes,
        }


def _design(groups: Sequence[str], labels: Sequence[str], baseline: str) -> tuple[np.ndarray, list[str]]:
    others = [g for g in labels if g != baseline]
    cols = [np.ones(len(groups))] + [np.array([g == o for g in groups], dtype=float) for o in others]
    return np.column_stack(cols), ["const", *others]


def _regress(name, X, y, names, variant, notes) -> RegressionFit | None:
    try:
        return ols_robust(X, y, variant=variant, names=names)
    except ValueError as exc:
        notes.append(f"{name}: skipped ({exc})")
        return None


def analyze(
    records: Sequence[SessionRecord],
    schedules: Mapping[str, PaymentSchedule],
    options: AnalysisOptions = AnalysisOptions(),
) -> AnalysisReport:
    """Run the full regression / imputation / calibration suite on ``records``.

    Regressions use the workers who completed at least one block (non-starters
    are invisible on a real platform). Output histograms include everyone.
    """
    if not records:
        raise ValueError("no records to analyze")
    missing = {r.group for r in records} - set(schedules)
    if missing:
        raise ValueError(f"no schedule for groups {sorted(missing)}")
    workers = [r for r in records if r.y > 0]
    if not workers:
        raise ValueError("every record has zero output; no reservation wage can be imputed")

    labels = sorted({r.group for r in records})
    baseline = options.baseline or labels[0]
    if baseline not in labels:
        raise ValueError(f"baseline group {baseline!r} not present")
    notes: list[str] = []

    # Regressions on participants.
    groups = [r.group for r in workers]
    X, names = _design(groups, labels, baseline)
    y = np.array([r.y for r in workers], dtype=float)
    t_bar = np.array([r.t_bar for r in workers])
    estimates = [(r.worker_id, impute_wage(schedules[r.group], r.y, r.t_bar)) for r in workers]
    log_wage = np.log([e.omega_usd_per_hr for _, e in estimates])
    regressions = {
        "output_levels": _regress("output_levels", X, y, names, options.robust, notes),
        "output_logs": _regress("output_logs", X, np.log(y), names, options.robust, notes),
        "block_time": _regress("block_time", X, t_bar, names, options.robust, notes),
        "log_wage": _regress("log_wage", X, log_wage, names, options.robust, notes),
        "early_quit": _regress(
            "early_quit", X, (y < options.early_quit_cutoff).astype(float), names, options.robust, notes
        ),
    }

    n_censored = sum(e.censored for _, e in estimates)
    counts = {
        "n_total": len(records),
        "n_zero": len(records) - len(workers),
        "n_imputed": len(estimates) - n_censored,
        "n_censored_at_cap": n_censored,
    }

    geo = {}
    for g in labels:
        wages = [e.omega_usd_per_hr for (_, e), r in zip(estimates, workers) if r.group == g]
        if wages:
            geo[g] = geometric_mean(wages)

    pooled = [e.omega_usd_per_hr for _, e in estimates if options.include_censored or not e.censored]
    calibration = None
    table = []
    if len(pooled) >= 2:
        try:
            calibration = fit_lognormal(pooled, options.quantile_probs)
        except ValueError as exc:
            notes.append(f"calibration: skipped ({exc})")
    if calibration is not None:
        points = {f"p{100 * p:g}": q for p, q in calibration.quantiles.items()}
        points["mean"] = float(np.mean(pooled))
        table = [
            {"label": k, "wage_usd_per_hr": w, "elasticity": point_elasticity(calibration.mu, calibration.sigma, w)}
            for k, w in points.items()
        ]

    focal = {}
    for g in labels:
        ys = [r.y for r in workers if r.group == g]
        if ys:
            try:
                focal[g] = focal_point_test(
                    ys,
                    schedules[g],
                    m=options.focal_modulus,
                    mode=options.pw_mode,
                    max_y=options.focal_max_y,
                    exclude_terminal=options.exclude_terminal,
                )
            except ValueError as exc:
                notes.append(f"focal test {g}: skipped ({exc})")

    report = AnalysisReport(
        groups=labels,
        counts=counts,
        regressions=regressions,
        geometric_means=geo,
        estimates=estimates,
        calibration=calibration,
        elasticity_table=table,
        focal=focal,
        notes=notes,
    )
    report.series = figure_series(records, schedules, estimates, options, notes)
    return report


def figure_series(records, schedules, estimates, options: AnalysisOptions, notes: list[str]) -> dict[str, list[dict]]:
    """Plot-ready rows: unit-bin output histograms, log-wage KDE with rug, earnings panels."""
    labels = sorted({r.group for r in records})
    hist = []
    panels = []
    for g in labels:
        ys = [r.y for r in records if r.group == g]
        counts = Counter(ys)
        hist.extend({"group": g, "y": y, "count": counts.get(y, 0)} for y in range(0, max(ys) + 1))
        s = schedules[g]
        cells = Counter((whole_cents(s.total_payment(y)), y) for y in ys if y > 0)
        panels.extend(
            {"group": g, "whole_cents": c, "y": y, "count": n} for (c, y), n in sorted(cells.items())
        )

    by_group: dict[str, list[float]] = {}
    group_of = {r.worker_id: r.group for r in records}
    for wid, e in estimates:
        by_group.setdefault(group_of[wid], []).append(math.log(e.omega_usd_per_hr))
    density = []
    rug = []
    all_logs = [v for vals in by_group.values() for v in vals]
    if all_logs:
        lo, hi = min(all_logs), max(all_logs)
        pad = max(1.0, 0.1 * (hi - lo))
        grid = np.linspace(lo - pad, hi + pad, options.kde_points)
        for g, vals in sorted(by_group.items()):
            rug.extend({"group": g, "log_wage": v} for v in sorted(vals))
            try:
                dens = kde(vals, grid)
            except ValueError as exc:
                notes.append(f"kde {g}: skipped ({exc})")
                continue
            density.extend({"group": g, "log_wage": float(x), "density": float(d)} for x, d in zip(grid, dens))
    return {
        "output_histogram": hist,
        "log_wage_kde": density,
        "log_wage_rug": rug,
        "earnings_panels": panels,
    }


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def emit_json(report: AnalysisReport | dict, path: str | Path | None = None) -> str:
    data = report.to_dict() if isinstance(report, AnalysisReport) else report
    text = json.dumps(_clean(data), indent=2, sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def emit_series(report: AnalysisReport, directory: str | Path) -> list[Path]:
    """Write one CSV per figure series (plus the elasticity table) into ``directory``."""
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    tables = dict(report.series)
    tables["elasticity_table"] = report.elasticity_table
    for name, rows in tables.items():
        path = out_dir / f"{name}.csv"
        with open(path, "w", newline="") as fh:
            if rows:
                w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
                w.writeheader()
                for row in rows:
                    w.writerow({k: fmt(v) if isinstance(v, float) else v for k, v in row.items()})
        written.append(path)
    return written
