import csv
import io

import pytest

from conftest import fixture_path
from reorder_advisor import ParseError, ReportError
from reorder_advisor.fill import TimingRecord, label_from_timings, read_timings
from reorder_advisor.orderings import OrderingLabel
from reorder_advisor.report import read_predictions, render_table, report_csv, summarize


def rec(name, rcm, amd, nd, hybrid):
    return TimingRecord(name, {"RCM": rcm, "AMD": amd, "ND": nd, "HYBRID": hybrid})


def test_toy_summary():
    s = summarize(read_timings(fixture_path("toy_timings.csv")), [("m1", "RCM"), ("m2", "AMD")])
    assert s.total_time_baseline == 6.0 and s.total_time_predicted == 4.0
    assert round(s.reduction_percent, 2) == 33.33
    assert s.mean_speedup == 1.5
    assert [r.speedup for r in s.rows] == [2.0, 1.0]


def test_ideal_predictions_reach_ideal_total(rng):
    timings = {}
    for i in range(20):
        t = rng.uniform(0.1, 10, 4)
        timings[f"m{i}"] = rec(f"m{i}", *t)
    best = [(n, label_from_timings(r)) for n, r in timings.items()]
    s = summarize(timings, best)
    assert s.total_time_predicted == s.total_time_ideal
    assert s.ideal_overhead_percent == 0


def test_invariants(rng):
    timings = {f"m{i}": rec(f"m{i}", *rng.uniform(0.1, 10, 4)) for i in range(30)}
    labels = ["RCM", "AMD", "ND", "HYBRID"]
    preds = [(n, labels[int(rng.integers(4))]) for n in timings]
    s = summarize(timings, preds)
    assert s.total_time_ideal <= s.total_time_predicted and s.total_time_ideal <= s.total_time_baseline
    assert s.reduction_percent == pytest.approx(
        100 * (s.total_time_baseline - s.total_time_predicted) / s.total_time_baseline
    )
    assert s.mean_speedup == pytest.approx(sum(r.baseline / r.predicted for r in s.rows) / 30)


def test_published_totals():
    # one row carrying the published test-set totals: AMD, predicted, ideal
    timings = {"test_set": rec("test_set", 5000.0, 2684.3150, 1198.0040, 999.5337)}
    s = summarize(timings, [("test_set", "ND")])
    assert round(s.reduction_percent, 2) == 55.37
    assert round(s.ideal_overhead_percent, 2) == 19.86


def test_row_mismatch_names_keys():
    timings = {"a": rec("a", 1, 1, 1, 1), "b": rec("b", 1, 1, 1, 1)}
    with pytest.raises(ReportError) as exc:
        summarize(timings, [("a", "AMD"), ("c", "RCM")])
    assert "c" in str(exc.value) and "b" in str(exc.value)


def test_duplicates_and_empty():
    timings = {"a": rec("a", 1, 1, 1, 1)}
    with pytest.raises(ReportError):
        summarize(timings, [("a", "AMD"), ("a", "AMD")])
    with pytest.raises(ReportError):
        summarize(timings, [])


def test_read_predictions_formats():
    rows = read_predictions(io.StringIO("matrix,label\nm1,scotch\nm2,AMD\n"))
    assert rows == [("m1", OrderingLabel.HYBRID, None), ("m2", OrderingLabel.AMD, None)]
    rows = read_predictions(io.StringIO("m1,ND,0.016\n"))
    assert rows == [("m1", OrderingLabel.ND, 0.016)]
    with pytest.raises(ParseError):
        read_predictions(io.StringIO("m1,FOO\n"))
    with pytest.raises(ParseError):
        read_predictions(io.StringIO("m1\n"))


def test_rendering():
    s = summarize(read_timings(fixture_path("toy_timings.csv")), [("m1", "RCM"), ("m2", "AMD")], [0.01, 0.02])
    text = render_table(s)
    assert "33.33 %" in text and "1.50" in text and "0.0300 s" in text
    rows = list(csv.reader(io.StringIO(report_csv(s))))
    assert rows[0] == ["matrix", "predicted_label", "baseline", "predicted", "ideal", "speedup"]
    assert rows[1] == ["m1", "RCM", "4.0", "2.0", "2.0", "2.0"]
