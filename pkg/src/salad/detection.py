"""Double-check detector over a stream of values (calibrated AARE or raw).

Model M2 is trained on the three most recent values and predicts the next
one. Each step's short AARE compares the last three values with their
predictions; it is tested against mean + 3 sigma of all short AAREs so
far, itself included.
On a breach a candidate model is trained on the three values before ``t``
and the step is re-tested: passing replaces M2 (pattern change), failing
again reports an anomaly and keeps M2.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Optional


from . import model as mc
from .conversion import derive_seed
from .errors import OutOfOrderPoint
from .thresholds import detection_threshold, epsilon_floor, short_aare

DETECTION_STAGE = 2
LOOK_BACK = 3
# earlier short AAREs needed before a verdict; the value under test makes three
MIN_HISTORY = 2


class VerdictKind(str, enum.Enum):
    NORMAL = "Normal"
    PATTERN_CHANGE = "PatternChange"
    ANOMALY = "Anomaly"


@dataclass(frozen=True)
class DetectionVerdict:
    t: int
    kind: VerdictKind
    aare_first: float
    aare_recheck: Optional[float]
    threshold: float

    @property
    def is_anomaly(self) -> bool:
        return self.kind is VerdictKind.ANOMALY


@dataclass
class DetectionStep:
    t: int
    predicted: Optional[float]
    aare: Optional[float] = None
    threshold: Optional[float] = None
    verdict: Optional[DetectionVerdict] = None


class Detector:
    """Owns M2 and the short-AARE history.

    ``start_t`` is the index of the first value this detector will see;
    values must then arrive with consecutive indices.
    """

    def __init__(self, start_t: int = 0, seed: int = 0, net: mc.NetworkConfig = mc.DETECTION_NET,
                 stage: int = DETECTION_STAGE):
        self.start_t = start_t
        self.seed = seed
        self.net = net
        self.stage = stage
        self.values = deque(maxlen=LOOK_BACK + 1)
        self.predictions: dict[int, float] = {}
        self.det_aare_history: list[float] = []
        self.model_m2: Optional[mc.SequenceModel] = None
        self.next_t = start_t
        self.max_abs = 0.0
        self.trainings = 0
        self.replacements = 0

    @property
    def first_aare_t(self) -> int:
        # first model trained after LOOK_BACK values predicts start+LOOK_BACK;
        # three consecutive predictions are available two steps later
        return self.start_t + LOOK_BACK + 2

    @property
    def first_decision_t(self) -> int:
        return self.first_aare_t + MIN_HISTORY

    @property
    def epsilon_denom(self) -> float:
        return epsilon_floor(self.max_abs)

    def _train(self, window, t: int) -> mc.SequenceModel:
        self.trainings += 1
        return mc.train(window, self.net.with_seed(derive_seed(self.seed, self.stage, t))).model

    def _last(self, n: int, lag: int = 0) -> list[float]:
        buf = list(self.values)
        return buf[len(buf) - lag - n: len(buf) - lag]

    def _aare_at(self, t: int) -> float:
        predicted = [self.predictions[z] for z in range(t - 2, t + 1)]
        return short_aare(self._last(3), predicted, self.epsilon_denom)

    def _predict_following(self, t: int) -> None:
        self.predictions[t + 1] = mc.predict_next(self.model_m2, self._last(LOOK_BACK))
        self.predictions.pop(t - 3, None)

    def _retrain(self, t: int) -> None:
        self.model_m2 = self._train(self._last(LOOK_BACK), t)
        self.replacements += 1

    def ingest(self, t: int, value: float) -> DetectionStep:
        if t != self.next_t:
            raise OutOfOrderPoint(f"expected t={self.next_t}, got t={t}")
        value = float(value)
        self.values.append(value)
        self.next_t += 1
        self.max_abs = max(self.max_abs, abs(value))
        step = DetectionStep(t=t, predicted=self.predictions.get(t))

        if len(self.predictions) == 0 and t - self.start_t + 1 < LOOK_BACK:
            return step
        have_three = all(z in self.predictions for z in range(t - 2, t + 1))
        if not have_three:
            self._retrain(t)
            self._predict_following(t)
            return step
        if len(self.det_aare_history) < MIN_HISTORY:
            step.aare = self._aare_at(t)
            self.det_aare_history.append(step.aare)
            self._retrain(t)
            self._predict_following(t)
            return step

        first = self._aare_at(t)
        thd = detection_threshold(self.det_aare_history + [first])
        if first <= thd:
            verdict = DetectionVerdict(t, VerdictKind.NORMAL, first, None, thd)
            recorded = first
        else:
            window = self._last(LOOK_BACK, lag=1)
            candidate = self._train(window, t)
            original = self.predictions[t]
            self.predictions[t] = mc.predict_next(candidate, window)
            recheck = self._aare_at(t)
            if recheck <= thd:
                verdict = DetectionVerdict(t, VerdictKind.PATTERN_CHANGE, first, recheck, thd)
                self.model_m2 = candidate
                self.replacements += 1
            else:
                verdict = DetectionVerdict(t, VerdictKind.ANOMALY, first, recheck, thd)
                self.predictions[t] = original
            recorded = recheck
        self.det_aare_history.append(recorded)
        step.predicted = self.predictions[t]
        self._predict_following(t)
        step.aare = recorded
        step.threshold = thd
        step.verdict = verdict
        return step
