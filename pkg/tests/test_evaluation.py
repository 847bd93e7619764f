from types import SimpleNamespace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from salad.detection import DetectionVerdict, VerdictKind
from salad.errors import ConfigError, InvalidWindow, OutOfRange
from salad.evaluation import EvalConfig, LabelWindow, fscore, score


def _alert(t, kind=VerdictKind.ANOMALY):
    return SimpleNamespace(t=t, verdict=DetectionVerdict(t, kind, 1.0, 1.0, 0.5))


def _alerts(ts):
    return [_alert(t) for t in ts]


def test_slack_includes_left_edge():
    rep = score(_alerts([97]), [LabelWindow(100, 110)], EvalConfig(3))
    assert (rep.tp, rep.fp, rep.fn) == (1, 0, 0)


def test_outside_slack_is_fp():
    rep = score(_alerts([96]), [LabelWindow(100, 110)], EvalConfig(3))
    assert (rep.tp, rep.fp, rep.fn) == (0, 1, 1)


def test_no_alerts():
    rep = score([], [LabelWindow(5, 9)], EvalConfig(3))
    assert (rep.tp, rep.fn, rep.precision, rep.recall, rep.fscore) == (0, 1, 0.0, 0.0, 0.0)


def test_non_anomaly_verdicts_ignored():
    alerts = [_alert(100, VerdictKind.NORMAL), _alert(300, VerdictKind.PATTERN_CHANGE)]
    rep = score(alerts, [LabelWindow(100, 100)], EvalConfig(3))
    assert (rep.tp, rep.fp, rep.fn) == (0, 0, 1)


def test_fp_counted_per_run():
    rep = score(_alerts([10, 11, 12, 20, 40, 41]), [], EvalConfig(3))
    assert rep.fp == 3 and rep.point_fp == 6


def test_run_touching_window_is_not_fp():
    rep = score(_alerts([111, 112, 113, 114, 115]), [LabelWindow(100, 110)], EvalConfig(3))
    assert (rep.tp, rep.fp) == (1, 0) and rep.point_fp == 2


def test_one_alert_cannot_confirm_two_windows():
    labels = [LabelWindow(100, 100), LabelWindow(104, 104)]
    rep = score(_alerts([102]), labels, EvalConfig(3))
    assert (rep.tp, rep.fn) == (1, 1)
    rep = score(_alerts([101, 103]), labels, EvalConfig(3))
    assert (rep.tp, rep.fn) == (2, 0)


def test_invalid_window():
    with pytest.raises(InvalidWindow):
        LabelWindow(5, 4)
    with pytest.raises(InvalidWindow):
        LabelWindow(-1, 4)


def test_negative_slack():
    with pytest.raises(ConfigError):
        EvalConfig(-1)


@pytest.mark.parametrize("p,r,expected", [(0.978, 0.957, 0.967), (0.913, 1.0, 0.955), (1.0, 1.0, 1.0)])
def test_fscore_values(p, r, expected):
    assert fscore(p, r) == pytest.approx(expected, abs=5e-4)


def test_fscore_zero_and_range():
    assert fscore(0.0, 0.0) == 0.0
    with pytest.raises(OutOfRange):
        fscore(1.2, 0.5)


@given(st.floats(0.01, 1.0), st.floats(0.01, 1.0))
def test_fscore_symmetric_and_bounded(p, r):
    f = fscore(p, r)
    assert f == pytest.approx(fscore(r, p))
    assert min(p, r) - 1e-12 <= f <= max(p, r) + 1e-12


windows_st = st.lists(st.tuples(st.integers(0, 500), st.integers(0, 20)), max_size=6)
times_st = st.lists(st.integers(0, 550), max_size=30)


@settings(max_examples=150, deadline=None)
@given(windows_st, times_st, st.integers(0, 10))
def test_monotone_in_slack(wins, times, slack):
    labels = [LabelWindow(s, s + d) for s, d in wins]
    narrow = score(_alerts(times), labels, EvalConfig(slack))
    wide = score(_alerts(times), labels, EvalConfig(slack + 3))
    assert wide.tp >= narrow.tp and wide.fn <= narrow.fn
    assert narrow.tp + narrow.fn == len(labels)


@settings(max_examples=100, deadline=None)
@given(windows_st, times_st, st.randoms())
def test_order_invariant(wins, times, rnd):
    labels = [LabelWindow(s, s + d) for s, d in wins]
    shuffled = list(times)
    rnd.shuffle(shuffled)
    a = score(_alerts(times), labels, EvalConfig(3))
    b = score(_alerts(shuffled), labels, EvalConfig(3))
    assert (a.tp, a.fp, a.fn, a.point_fp) == (b.tp, b.fp, b.fn, b.point_fp)


def test_precision_recall_definitions():
    rep = score(_alerts([5, 50, 51, 200]), [LabelWindow(5, 5), LabelWindow(100, 101)], EvalConfig(0))
    assert (rep.tp, rep.fp, rep.fn) == (1, 2, 1)
    assert rep.precision == pytest.approx(1 / 3) and rep.recall == 0.5
