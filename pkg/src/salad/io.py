"""File formats: point CSV, label JSON, alert JSON lines, and trace CSV.

Point files carry a ``timestamp,value`` header; the row ordinal is the time
index and timestamps are opaque labels. Label files are JSON::

    {"windows": [{"s": 1500, "e": 1500, "note": "spike"}]}

Alert files hold one JSON object per decided point.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict
from pathlib import Path
from typing import IO, Iterable, Iterator, List

from .conversion import RawPoint
from .detection import DetectionVerdict, VerdictKind
from .errors import InvalidWindow, ParseError
from .evaluation import LabelWindow
from .pipeline import AnomalyAlert, TraceRow

POINT_HEADER = ["timestamp", "value"]
ALERT_FIELDS = [
    "t", "timestamp", "value", "verdict", "aare_first", "aare_recheck",
    "threshold", "decision_time_seconds",
]
TRACE_FIELDS = [
    "t", "timestamp", "value", "predicted_value", "a_value", "predicted_a",
    "detection_aare", "threshold", "verdict",
]


def iter_points(lines: Iterable[str]) -> Iterator[RawPoint]:
    """Yield points from CSV lines; an empty feed yields nothing."""
    it = iter(lines)
    header = None
    lineno = 0
    for raw in it:
        lineno += 1
        if raw.strip():
            header = raw
            break
    if header is None:
        return
    cols = [c.strip() for c in next(csv.reader([header]))]
    if cols != POINT_HEADER:
        raise ParseError(f"expected header 'timestamp,value', got {header.strip()!r}", lineno)
    t = 0
    for raw in it:
        lineno += 1
        if not raw.strip():
            continue
        row = next(csv.reader([raw]))
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", lineno)
        try:
            value = float(row[1])
        except ValueError:
            raise ParseError(f"value {row[1]!r} is not a number", lineno) from None
        if not math.isfinite(value):
            raise ParseError(f"value {row[1]!r} is not finite", lineno)
        stamp = row[0].strip() or None
        yield RawPoint(t=t, value=value, timestamp=stamp)
        t += 1


def read_points(path) -> List[RawPoint]:
    with open(path, newline="") as fh:
        return list(iter_points(fh))


def write_points(path, values, timestamps=None) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(POINT_HEADER)
        for i, v in enumerate(values):
            w.writerow([timestamps[i] if timestamps is not None else i, repr(float(v))])


def read_labels(path) -> List[LabelWindow]:
    try:
        doc = json.loads(Path(path).read_text())
        entries = doc["windows"] if isinstance(doc, dict) else doc
        windows = [LabelWindow(int(w["s"]), int(w["e"]), w.get("note")) for w in entries]
    except InvalidWindow:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"malformed label file {path}: {exc}") from None
    return windows


def write_labels(path, windows: Iterable[LabelWindow]) -> None:
    doc = {"windows": [{"s": w.s, "e": w.e, **({"note": w.note} if w.note else {})} for w in windows]}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def alert_record(alert: AnomalyAlert) -> dict:
    v = alert.verdict
    return {
        "t": alert.t,
        "timestamp": alert.timestamp,
        "value": alert.raw_value,
        "verdict": v.kind.value,
        "aare_first": v.aare_first,
        "aare_recheck": v.aare_recheck,
        "threshold": v.threshold,
        "decision_time_seconds": alert.decision_time,
    }


def alert_from_record(rec: dict) -> AnomalyAlert:
    verdict = DetectionVerdict(
        t=int(rec["t"]),
        kind=VerdictKind(rec["verdict"]),
        aare_first=float(rec["aare_first"]),
        aare_recheck=None if rec["aare_recheck"] is None else float(rec["aare_recheck"]),
        threshold=float(rec["threshold"]),
    )
    dt = rec.get("decision_time_seconds")
    return AnomalyAlert(
        t=int(rec["t"]),
        timestamp=rec.get("timestamp"),
        raw_value=float(rec["value"]),
        verdict=verdict,
        decision_time=None if dt is None else float(dt),
    )


def write_alert(fh: IO[str], alert: AnomalyAlert) -> None:
    fh.write(json.dumps(alert_record(alert)) + "\n")


def write_alerts(path, alerts: Iterable[AnomalyAlert]) -> None:
    with open(path, "w") as fh:
        for a in alerts:
            write_alert(fh, a)


def read_alerts(path) -> List[AnomalyAlert]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                out.append(alert_from_record(json.loads(line)))
            except (ValueError, KeyError, TypeError) as exc:
                raise ParseError(f"bad alert record: {exc}", lineno) from None
    return out


def write_trace(path, rows: Iterable[TraceRow]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=TRACE_FIELDS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: ("" if val is None else val) for k, val in asdict(row).items()})
