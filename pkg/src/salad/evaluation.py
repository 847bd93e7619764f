"""Event-level scoring with a valid detection period around each label."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .errors import ConfigError, InvalidWindow, OutOfRange


@dataclass(frozen=True)
class LabelWindow:
    s: int
    e: int
    note: Optional[str] = None

    def __post_init__(self):
        if self.s < 0 or self.s > self.e:
            raise InvalidWindow(f"invalid label window s={self.s}, e={self.e}")

    def expanded(self, slack: int) -> tuple[int, int]:
        return self.s - slack, self.e + slack


@dataclass(frozen=True)
class EvalConfig:
    slack: int = 3

    def __post_init__(self):
        if self.slack < 0:
            raise ConfigError(f"slack must be >= 0, got {self.slack}")


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    fscore: float
    point_fp: int = 0
    timing: Optional[object] = None
    detected: List[int] = field(default_factory=list)


def fscore(precision: float, recall: float) -> float:
    for name, x in (("precision", precision), ("recall", recall)):
        if not 0.0 <= x <= 1.0:
            raise OutOfRange(f"{name} must lie in [0, 1], got {x}")
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _anomaly_times(alerts) -> List[int]:
    ts = []
    for a in alerts:
        kind = getattr(a, "verdict", a)
        if getattr(kind, "is_anomaly", False):
            ts.append(int(a.t))
    return sorted(set(ts))


def _match(windows: Sequence[tuple[int, int]], times: List[int]) -> List[int]:
    """Indices of windows detected under a one-alert-per-window assignment.

    Greedy by right edge, taking the earliest unused alert in range; this is
    a maximum matching for intervals against points.
    """
    used = [False] * len(times)
    detected = []
    for idx in sorted(range(len(windows)), key=lambda i: (windows[i][1], windows[i][0])):
        lo, hi = windows[idx]
        j = bisect.bisect_left(times, lo)
        while j < len(times) and times[j] <= hi and used[j]:
            j += 1
        if j < len(times) and times[j] <= hi:
            used[j] = True
            detected.append(idx)
    return sorted(detected)


def score(alerts, labels: Sequence[LabelWindow], config: EvalConfig = EvalConfig(), timing=None) -> EvalReport:
    """Count TP/FN per label window and FP per run of flagged points outside all windows.

    A window counts as detected when an Anomaly verdict falls inside
    ``[s - slack, e + slack]``; each alert can confirm one window only.
    """
    for w in labels:
        if w.s > w.e:
            raise InvalidWindow(f"invalid label window s={w.s}, e={w.e}")
    expanded = [w.expanded(config.slack) for w in labels]
    times = _anomaly_times(alerts)
    detected = _match(expanded, times)
    tp = len(detected)
    fn = len(labels) - tp

    def outside(t):
        return all(not (lo <= t <= hi) for lo, hi in expanded)

    runs: List[List[int]] = []
    for t in times:
        if runs and runs[-1][-1] == t - 1:
            runs[-1].append(t)
        else:
            runs.append([t])
    fp = sum(all(outside(t) for t in run) for run in runs)
    point_fp = sum(outside(t) for t in times)

    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    return EvalReport(
        tp=tp, fp=fp, fn=fn,
        precision=precision, recall=recall, fscore=fscore(precision, recall),
        point_fp=point_fp, timing=timing, detected=detected,
    )
