import io as pyio
import json

import numpy as np
import pytest

from conftest import points_from
from salad import io as sio
from salad.conversion import RawPoint
from salad.errors import OutOfOrderPoint, ParseError, SeriesTooShort
from salad.pipeline import Mode, PipelineConfig, SaladPipeline, TimingStats, run, run_repad_baseline, run_salad, stream


def _csv(values):
    return ["timestamp,value\n"] + [f"2014-07-01 {i:05d},{float(v)!r}\n" for i, v in enumerate(values)]


def test_constant_series_has_no_anomalies():
    b = 6
    alerts, timing = run_salad(points_from([4.0] * (3 * b + 12)), PipelineConfig(b=b))
    assert alerts and not any(a.is_anomaly for a in alerts)
    assert timing.count == len(alerts)


def test_first_alert_at_2b_plus_8():
    b = 5
    alerts, _ = run_salad(points_from(3 + np.sin(np.arange(60) / 2)), PipelineConfig(b=b))
    assert [a.t for a in alerts] == list(range(2 * b + 8, 60))


def test_too_short_series():
    with pytest.raises(SeriesTooShort):
        run_salad(points_from([1.0] * 20), PipelineConfig(b=5))


def test_index_gap_rejected():
    pts = points_from([1.0] * 40)
    pts[10] = RawPoint(11, 1.0)
    with pytest.raises(OutOfOrderPoint):
        run_salad(pts, PipelineConfig(b=4))


def test_repad_constant_and_spike():
    alerts, _ = run_repad_baseline(points_from([2.0] * 60), PipelineConfig(b=4))
    assert not any(a.is_anomaly for a in alerts)
    values = [2.0] * 80
    values[60] = 8.0
    alerts, _ = run_repad_baseline(points_from(values), PipelineConfig(b=4))
    assert 60 in {a.t for a in alerts if a.is_anomaly}


def test_repeat_runs_identical():
    pts = points_from(3 + np.sin(np.arange(70) / 3))
    cfg = PipelineConfig(b=6, seed=4, timing=False)
    first, _ = run_salad(pts, cfg)
    second, _ = run_salad(pts, cfg)
    assert first == second


def test_stream_matches_batch():
    values = list(3 + np.sin(np.arange(80) / 3))
    values[60] = 9.0
    cfg = PipelineConfig(b=6, seed=2, timing=False)
    batch, _ = run_salad(points_from(values), cfg)
    got = []
    summary = stream(_csv(values), cfg, got.append)
    assert [(a.t, a.verdict) for a in got] == [(a.t, a.verdict) for a in batch]
    assert summary.points == 80 and summary.decided == len(batch)
    assert got[0].timestamp == f"2014-07-01 {got[0].t:05d}"


def test_stream_reports_bad_line():
    lines = _csv([1.0, 2.0, 3.0])
    lines[2] = "x,notanumber\n"
    with pytest.raises(ParseError, match="line 3"):
        stream(lines, PipelineConfig(b=4), lambda a: None)


def test_stream_empty_feed():
    summary = stream([], PipelineConfig(b=4), lambda a: None)
    assert summary.points == 0 and summary.decided == 0


def test_bad_header():
    with pytest.raises(ParseError, match="line 1"):
        list(sio.iter_points(["time,v\n", "0,1\n"]))


def test_trace_has_one_row_per_decided_point(tmp_path):
    pts = points_from(3 + np.sin(np.arange(60) / 2))
    alerts, _, pipe = run(pts, PipelineConfig(b=5))
    sio.write_trace(tmp_path / "trace.csv", pipe.trace)
    rows = (tmp_path / "trace.csv").read_text().splitlines()
    assert rows[0].split(",") == sio.TRACE_FIELDS
    assert [int(r.split(",")[0]) for r in rows[1:]] == [a.t for a in alerts]


def test_alert_file_round_trip(tmp_path):
    values = [2.0] * 40
    values[30] = 7.0
    alerts, _ = run_repad_baseline(points_from(values), PipelineConfig(b=4))
    sio.write_alerts(tmp_path / "a.jsonl", alerts)
    back = sio.read_alerts(tmp_path / "a.jsonl")
    assert [(a.t, a.verdict, a.raw_value) for a in back] == [(a.t, a.verdict, a.raw_value) for a in alerts]
    first = json.loads((tmp_path / "a.jsonl").read_text().splitlines()[0])
    assert list(first) == sio.ALERT_FIELDS


def test_bad_alert_record(tmp_path):
    (tmp_path / "a.jsonl").write_text('{"t": 1}\n')
    with pytest.raises(ParseError, match="line 1"):
        sio.read_alerts(tmp_path / "a.jsonl")


def test_points_round_trip(tmp_path):
    sio.write_points(tmp_path / "p.csv", [1.5, 2.25, -3.0])
    pts = sio.read_points(tmp_path / "p.csv")
    assert [p.value for p in pts] == [1.5, 2.25, -3.0] and [p.t for p in pts] == [0, 1, 2]


def test_timing_stats():
    st = TimingStats.from_samples([1.0, 3.0, None])
    assert (st.mean, st.std, st.count) == (2.0, 1.0, 2)
    assert TimingStats.from_samples([]).count == 0


def test_incremental_push_rejects_skips():
    pipe = SaladPipeline(PipelineConfig(b=4, mode=Mode.REPAD))
    pipe.push(RawPoint(0, 1.0))
    with pytest.raises(OutOfOrderPoint):
        pipe.push(RawPoint(2, 1.0))


def test_stream_writes_alerts_as_decided():
    buf = pyio.StringIO()
    stream(_csv([2.0] * 30), PipelineConfig(b=4, mode=Mode.REPAD), lambda a: sio.write_alert(buf, a))
    assert len(buf.getvalue().splitlines()) == 30 - 7
