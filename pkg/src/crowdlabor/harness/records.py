"""Session records and the CSV formats used to exchange them."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, TextIO

from crowdlabor.estimation import WageEstimate
from crowdlabor.schedule import PaymentSchedule, make_schedule

RECORD_COLUMNS = ("worker_id", "group", "y", "t_bar_s", "earnings_cents", "misses")
ESTIMATE_COLUMNS = (
    "worker_id",
    "y",
    "t_bar_s",
    "omega_cents_per_s",
    "omega_usd_per_hr",
    "lower_usd_per_hr",
    "upper_usd_per_hr",
    "censored",
)
EARNINGS_TOL = 1e-6


class RecordError(ValueError):
    """A malformed input row; carries the 1-based data row number and column name."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.row = row
        self.column = column


@dataclass(frozen=True)
class SessionRecord:
    """What is observed about one worker: output, mean seconds per block, earnings.

    ``t_bar`` is 0 for workers who never completed a block.
    """

    worker_id: str
    group: str
    y: int
    t_bar: float
    earnings: float
    misses: int | None = None


def fmt(x: float) -> str:
    # repr is the shortest string that round-trips a double exactly.
    return repr(float(x))


def write_records(records: Iterable[SessionRecord], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(RECORD_COLUMNS)
    for r in sorted(records, key=lambda r: r.worker_id):
        w.writerow(
            [r.worker_id, r.group, r.y, fmt(r.t_bar), fmt(r.earnings), "" if r.misses is None else r.misses]
        )


def records_to_csv(records: Iterable[SessionRecord]) -> str:
    buf = io.StringIO()
    write_records(records, buf)
    return buf.getvalue()


def emit_records_csv(records: Iterable[SessionRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        write_records(records, fh)


def _parse_int(raw: str, row: int, column: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise RecordError(f"expected an integer, got {raw!r}", row, column) from None


def _parse_float(raw: str, row: int, column: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise RecordError(f"expected a number, got {raw!r}", row, column) from None
    if not math.isfinite(value):
        raise RecordError(f"expected a finite number, got {raw!r}", row, column)
    return value


def read_records(
    fh: TextIO, schedules: Mapping[str, PaymentSchedule] | None = None
) -> list[SessionRecord]:
    """Parse a session CSV; with ``schedules`` given, earnings are checked against them."""
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None:
        raise RecordError("empty file: header required")
    header = [h.strip() for h in header]
    if tuple(header) != RECORD_COLUMNS:
        missing = [c for c in RECORD_COLUMNS if c not in header]
        extra = [c for c in header if c not in RECORD_COLUMNS]
        raise RecordError(
            f"header must be {','.join(RECORD_COLUMNS)}; missing={missing} extra={extra}"
        )
    records = []
    for row_no, row in enumerate(reader, start=1):
        if not row:
            continue
        if len(row) != len(RECORD_COLUMNS):
            raise RecordError(f"expected {len(RECORD_COLUMNS)} fields, got {len(row)}", row_no)
        worker_id, group, y_raw, t_raw, e_raw, m_raw = (c.strip() for c in row)
        if not worker_id:
            raise RecordError("empty worker_id", row_no, "worker_id")
        if not group:
            raise RecordError("empty group", row_no, "group")
        y = _parse_int(y_raw, row_no, "y")
        if y < 0:
            raise RecordError(f"output must be non-negative, got {y}", row_no, "y")
        t_bar = _parse_float(t_raw, row_no, "t_bar_s")
        if t_bar < 0 or (y > 0 and t_bar == 0):
            raise RecordError(f"invalid mean block time {t_bar}", row_no, "t_bar_s")
        earnings = _parse_float(e_raw, row_no, "earnings_cents")
        if earnings < 0:
            raise RecordError(f"earnings must be non-negative, got {earnings}", row_no, "earnings_cents")
        misses = None if m_raw == "" else _parse_int(m_raw, row_no, "misses")
        if misses is not None and misses < 0:
            raise RecordError(f"misses must be non-negative, got {misses}", row_no, "misses")
        if schedules is not None:
            if group not in schedules:
                raise RecordError(f"no schedule for group {group!r}", row_no, "group")
            s = schedules[group]
            if y > s.cap:
                raise RecordError(f"output {y} exceeds the cap {s.cap}", row_no, "y")
            expected = s.total_payment(y)
            if abs(expected - earnings) > EARNINGS_TOL:
                raise RecordError(
                    f"earnings {earnings} do not match the schedule ({expected})", row_no, "earnings_cents"
                )
        records.append(SessionRecord(worker_id, group, y, t_bar, earnings, misses))
    return records


def ingest_csv(
    path: str | Path, schedules: Mapping[str, PaymentSchedule] | None = None
) -> list[SessionRecord]:
    with open(path, newline="") as fh:
        return read_records(fh, schedules)


def write_estimates(rows: Iterable[tuple[str, WageEstimate]], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(ESTIMATE_COLUMNS)
    for worker_id, e in sorted(rows, key=lambda r: r[0]):
        w.writerow(
            [
                worker_id,
                e.y,
                fmt(e.t_bar),
                fmt(e.omega_hat),
                fmt(e.omega_usd_per_hr),
                fmt(e.lower_usd_per_hr),
                fmt(e.upper_usd_per_hr),
                int(e.censored),
            ]
        )


def read_estimate_wages(fh: TextIO, include_censored: bool = True) -> list[float]:
    """Dollars-per-hour wages from an estimate CSV."""
    reader = csv.DictReader(fh)
    if reader.fieldnames is None or tuple(reader.fieldnames) != ESTIMATE_COLUMNS:
        raise RecordError(f"header must be {','.join(ESTIMATE_COLUMNS)}")
    wages = []
    for row_no, row in enumerate(reader, start=1):
        censored = _parse_int(row["censored"], row_no, "censored")
        if censored and not include_censored:
            continue
        wages.append(_parse_float(row["omega_usd_per_hr"], row_no, "omega_usd_per_hr"))
    return wages


def infer_schedules(
    records: Iterable[SessionRecord], half_life: float = 10.0, cap: int = 200
) -> dict[str, PaymentSchedule]:
    """Recover each group's asymptote from earnings, assuming no show-up fee."""
    estimates: dict[str, list[float]] = {}
    for r in records:
        estimates.setdefault(r.group, [])
        if r.y > 0:
            estimates[r.group].append(r.earnings / -math.expm1(-math.log(2) / half_life * r.y))
    out = {}
    for group, values in estimates.items():
        if not values:
            raise RecordError(f"cannot infer a schedule for group {group!r}: nobody worked")
        values.sort()
        pbar = round(values[len(values) // 2], 6)
        out[group] = make_schedule(pbar, half_life, cap)
    return out
