"""Solve-time summaries: all-AMD baseline vs predicted vs ideal orderings."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from .errors import ParseError, ReportError
from .fill import TimingRecord
from .orderings import OrderingLabel

REPORT_COLUMNS = ("matrix", "predicted_label", "baseline", "predicted", "ideal", "speedup")


@dataclass(frozen=True)
class ReportRow:
    name: str
    predicted_label: OrderingLabel
    baseline: float
    predicted: float
    ideal: float

    @property
    def speedup(self) -> float:
        return self.baseline / self.predicted


@dataclass(frozen=True)
class ReportSummary:
    rows: tuple
    total_time_baseline: float
    total_time_predicted: float
    total_time_ideal: float
    reduction_percent: float
    mean_speedup: float
    #: how much slower the predicted orderings are than the per-row optimum
    ideal_overhead_percent: float
    total_prediction_time: float | None = None


def summarize(timings: dict, predictions, prediction_times=None) -> ReportSummary:
    """Build the summary for every matrix named in ``predictions``.

    ``timings`` maps names to :class:`TimingRecord`; ``predictions`` is a
    sequence of ``(name, label)`` pairs (or a dict) and fixes the row order.
    The two must cover exactly the same matrices.
    """
    pairs = list(predictions.items()) if isinstance(predictions, dict) else list(predictions)
    if not pairs:
        raise ReportError("no predictions to report on")
    names = [n for n, _ in pairs]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ReportError(f"duplicate predictions for: {', '.join(dupes)}")
    no_timing = [n for n in names if n not in timings]
    no_pred = sorted(set(timings) - set(names))
    if no_timing or no_pred:
        parts = []
        if no_timing:
            parts.append(f"no timing row for {', '.join(no_timing)}")
        if no_pred:
            parts.append(f"no prediction for {', '.join(no_pred)}")
        raise ReportError("; ".join(parts))

    rows = []
    for name, label in pairs:
        rec: TimingRecord = timings[name]
        label = OrderingLabel.parse(label)
        secs = rec.seconds
        rows.append(ReportRow(name, label, secs[OrderingLabel.AMD], secs[label], min(secs.values())))
    base = math.fsum(r.baseline for r in rows)
    pred = math.fsum(r.predicted for r in rows)
    ideal = math.fsum(r.ideal for r in rows)
    ptime = None if prediction_times is None else math.fsum(prediction_times)
    return ReportSummary(
        rows=tuple(rows),
        total_time_baseline=base,
        total_time_predicted=pred,
        total_time_ideal=ideal,
        reduction_percent=100.0 * (base - pred) / base,
        mean_speedup=math.fsum(r.speedup for r in rows) / len(rows),
        ideal_overhead_percent=100.0 * (pred - ideal) / ideal,
        total_prediction_time=ptime,
    )


def read_predictions(source) -> list:
    """``[(name, label, seconds or None), ...]`` from ``name,label[,seconds]`` lines.

    A leading header row (first field ``matrix`` or ``name``) is skipped.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, newline="") as fh:
            return read_predictions(fh)
    out = []
    for lineno, row in enumerate(csv.reader(source), start=1):
        row = [c.strip() for c in row]
        if not row or not any(row):
            continue
        if lineno == 1 and row[0].lower() in ("matrix", "name"):
            continue
        if len(row) not in (2, 3):
            raise ParseError(f"expected name,label[,seconds], got {len(row)} fields", lineno)
        try:
            label = OrderingLabel.parse(row[1])
            secs = float(row[2]) if len(row) == 3 and row[2] else None
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        out.append((row[0], label, secs))
    return out


def _num(x, digits=4):
    return f"{x:.{digits}f}"


def render_table(s: ReportSummary) -> str:
    """Human-readable per-matrix table followed by the totals."""
    width = max([len("matrix")] + [len(r.name) for r in s.rows])
    lines = [
        f"{'matrix':<{width}}  {'label':<6}  {'AMD(s)':>12}  {'predicted(s)':>12}  {'ideal(s)':>12}  {'speedup':>8}"
    ]
    for r in s.rows:
        lines.append(
            f"{r.name:<{width}}  {r.predicted_label.value:<6}  {_num(r.baseline):>12}  "
            f"{_num(r.predicted):>12}  {_num(r.ideal):>12}  {_num(r.speedup, 2):>8}"
        )
    lines.append("")
    lines.append(f"total AMD time        {_num(s.total_time_baseline)} s")
    lines.append(f"total predicted time  {_num(s.total_time_predicted)} s")
    lines.append(f"total ideal time      {_num(s.total_time_ideal)} s")
    if s.total_prediction_time is not None:
        lines.append(f"total prediction time {_num(s.total_prediction_time)} s")
    lines.append(f"time reduction        {_num(s.reduction_percent, 2)} %")
    lines.append(f"overhead vs ideal     {_num(s.ideal_overhead_percent, 2)} %")
    lines.append(f"mean speedup          {_num(s.mean_speedup, 2)}")
    return "\n".join(lines) + "\n"


def report_csv(s: ReportSummary) -> str:
    """Machine-readable rows; full float precision."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in s.rows:
        w.writerow([r.name, r.predicted_label.value, repr(r.baseline), repr(r.predicted), repr(r.ideal), repr(r.speedup)])
    return out.getvalue()
