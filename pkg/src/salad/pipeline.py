"""Drivers wiring conversion into detection, plus the short-window baseline."""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .conversion import Converter, RawPoint
from .detection import DetectionVerdict, Detector
from .errors import ConfigError, OutOfOrderPoint, SeriesTooShort

REPAD_STAGE = 3
# the baseline needs this many points before a verdict is meaningful
REPAD_MIN_POINTS = 20


class Mode(str, enum.Enum):
    SALAD = "salad"
    REPAD = "repad"


@dataclass(frozen=True)
class PipelineConfig:
    b: int = 100
    slack: int = 3
    seed: int = 0
    mode: Mode = Mode.SALAD
    timing: bool = True

    def __post_init__(self):
        if self.b < 4:
            raise ConfigError(f"b must be >= 4, got {self.b}")
        if self.slack < 0:
            raise ConfigError(f"slack must be >= 0, got {self.slack}")
        object.__setattr__(self, "mode", Mode(self.mode))


@dataclass(frozen=True)
class AnomalyAlert:
    t: int
    timestamp: Optional[str]
    raw_value: float
    verdict: DetectionVerdict
    decision_time: Optional[float]

    @property
    def is_anomaly(self) -> bool:
        return self.verdict.is_anomaly


@dataclass(frozen=True)
class TimingStats:
    mean: float = 0.0
    std: float = 0.0
    count: int = 0

    @classmethod
    def from_samples(cls, samples: Sequence[float]) -> "TimingStats":
        samples = [s for s in samples if s is not None]
        if not samples:
            return cls()
        mu = sum(samples) / len(samples)
        var = sum((s - mu) ** 2 for s in samples) / len(samples)
        return cls(mu, math.sqrt(var), len(samples))


@dataclass
class TraceRow:
    t: int
    timestamp: Optional[str]
    value: float
    predicted_value: Optional[float]
    a_value: Optional[float]
    predicted_a: Optional[float]
    detection_aare: Optional[float]
    threshold: Optional[float]
    verdict: Optional[str]


class SaladPipeline:
    """Incremental driver: push one point, get its alert once decided."""

    def __init__(self, config: PipelineConfig):
        self.config = config
        if config.mode is Mode.SALAD:
            self.converter: Optional[Converter] = Converter(config.b, seed=config.seed)
            self.detector = Detector(start_t=self.converter.first_output_t, seed=config.seed)
        else:
            self.converter = None
            self.detector = Detector(start_t=0, seed=config.seed, stage=REPAD_STAGE)
        self.next_t = 0
        self.trace: List[TraceRow] = []

    @property
    def first_decision_t(self) -> int:
        return self.detector.first_decision_t

    def push(self, point: RawPoint) -> Optional[AnomalyAlert]:
        if point.t != self.next_t:
            raise OutOfOrderPoint(f"expected t={self.next_t}, got t={point.t}")
        started = time.perf_counter()
        predicted_value = a_value = None
        if self.converter is not None:
            conv = self.converter.ingest(point)
            predicted_value = conv.predicted
            det = None
            if conv.output is not None:
                a_value = conv.output.value
                det = self.detector.ingest(conv.output.t, a_value)
        else:
            det = self.detector.ingest(point.t, point.value)
        elapsed = time.perf_counter() - started
        self.next_t += 1

        if det is None or det.verdict is None:
            return None
        verdict = det.verdict
        self.trace.append(TraceRow(
            t=point.t,
            timestamp=point.timestamp,
            value=point.value,
            predicted_value=predicted_value if self.converter is not None else det.predicted,
            a_value=a_value,
            predicted_a=det.predicted if self.converter is not None else None,
            detection_aare=det.aare,
            threshold=det.threshold,
            verdict=verdict.kind.value,
        ))
        return AnomalyAlert(
            t=point.t,
            timestamp=point.timestamp,
            raw_value=point.value,
            verdict=verdict,
            decision_time=elapsed if self.config.timing else None,
        )


def _check_points(points: Sequence[RawPoint], minimum: int) -> None:
    if len(points) <= minimum:
        raise SeriesTooShort(f"need more than {minimum} points, got {len(points)}")
    for i, p in enumerate(points):
        if p.t != i:
            raise OutOfOrderPoint(f"point {i} has index {p.t}")


def _replay(points, config) -> Tuple[List[AnomalyAlert], TimingStats, SaladPipeline]:
    pipe = SaladPipeline(config)
    alerts = [a for a in map(pipe.push, points) if a is not None]
    return alerts, TimingStats.from_samples([a.decision_time for a in alerts]), pipe


def run_salad(points: Sequence[RawPoint], config: PipelineConfig):
    """Batch replay in SALAD mode; returns (alerts, timing)."""
    config = _with_mode(config, Mode.SALAD)
    _check_points(points, 2 * config.b + 10)
    alerts, timing, _ = _replay(points, config)
    return alerts, timing


def run_repad_baseline(points: Sequence[RawPoint], config: PipelineConfig):
    """Short look-back baseline: the detection loop applied to raw values."""
    config = _with_mode(config, Mode.REPAD)
    _check_points(points, REPAD_MIN_POINTS)
    alerts, timing, _ = _replay(points, config)
    return alerts, timing


def run(points: Sequence[RawPoint], config: PipelineConfig):
    """Replay in whichever mode the config names, keeping the pipeline for its trace."""
    minimum = 2 * config.b + 10 if config.mode is Mode.SALAD else REPAD_MIN_POINTS
    _check_points(points, minimum)
    return _replay(points, config)


def _with_mode(config: PipelineConfig, mode: Mode) -> PipelineConfig:
    if config.mode is mode:
        return config
    return PipelineConfig(b=config.b, slack=config.slack, seed=config.seed, mode=mode, timing=config.timing)


@dataclass
class StreamSummary:
    points: int = 0
    decided: int = 0
    anomalies: int = 0
    timing: TimingStats = field(default_factory=TimingStats)


def stream(source: Iterable[str], config: PipelineConfig,
           sink: Callable[[AnomalyAlert], None]) -> StreamSummary:
    """Parse a line feed (CSV with a ``timestamp,value`` header) and alert as points are decided."""
    from .io import iter_points

    pipe = SaladPipeline(config)
    summary = StreamSummary()
    times = []
    for point in iter_points(source):
        alert = pipe.push(point)
        summary.points += 1
        if alert is None:
            continue
        summary.decided += 1
        summary.anomalies += alert.is_anomaly
        times.append(alert.decision_time)
        sink(alert)
    summary.timing = TimingStats.from_samples(times)
    return summary
