"""Streaming conversion of a raw series into calibrated AARE values.

A model M1 is trained on the first ``b`` points and predicts each next
point. Once ``2b - 1`` points have been seen, every step yields a window
AARE over the last ``b`` predictions. From ``t = 2b + 1`` on, each AARE is
tested against a three-sigma threshold over all AAREs so far; a breach
retrains M1 on the ``b`` points before ``t`` and recomputes the value.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import model as mc
from .errors import ConfigError, OutOfOrderPoint
from .thresholds import conversion_threshold, epsilon_floor, window_aare

CONVERSION_STAGE = 1


@dataclass(frozen=True)
class RawPoint:
    t: int
    value: float
    timestamp: Optional[str] = None


@dataclass(frozen=True)
class CalibratedAare:
    t: int
    value: float
    recalibrated: bool = False


@dataclass
class ConversionStep:
    """Diagnostics for one ingested point (``aare`` is None during warm-up)."""

    t: int
    predicted: Optional[float]
    aare: Optional[float] = None
    threshold: Optional[float] = None
    output: Optional[CalibratedAare] = None


def derive_seed(base: int, stage: int, t: int) -> int:
    return int(np.random.SeedSequence([int(base) & 0xFFFFFFFFFFFFFFFF, stage, t]).generate_state(1)[0])


class Converter:
    """Owns M1 and the AARE history; feed points strictly in index order."""

    def __init__(self, b: int, seed: int = 0, net: mc.NetworkConfig = mc.CONVERSION_NET):
        if b < 2:
            raise ConfigError(f"b must be >= 2, got {b}")
        self.b = b
        self.seed = seed
        self.net = net
        self.raw = deque(maxlen=b + 1)
        self.predictions: dict[int, float] = {}
        self.aare_history: list[float] = []
        self.model_m1: Optional[mc.SequenceModel] = None
        self.next_t = 0
        self.max_abs = 0.0
        self.trainings = 0

    @property
    def first_output_t(self) -> int:
        return 2 * self.b + 1

    @property
    def epsilon_denom(self) -> float:
        return epsilon_floor(self.max_abs)

    def _train(self, window, t: int) -> mc.SequenceModel:
        self.trainings += 1
        return mc.train(window, self.net.with_seed(derive_seed(self.seed, CONVERSION_STAGE, t))).model

    def _recent(self, n: int, end: int) -> list[float]:
        # values v_{end-n+1} .. v_end; end is at most the newest index
        lag = (self.next_t - 1) - end
        buf = list(self.raw)
        return buf[len(buf) - lag - n: len(buf) - lag]

    def _aare_at(self, t: int) -> float:
        b = self.b
        observed = self._recent(b, t)
        predicted = [self.predictions[y] for y in range(t - b + 1, t + 1)]
        return window_aare(observed, predicted, self.epsilon_denom)

    def _predict_following(self, t: int) -> float:
        pred = mc.predict_next(self.model_m1, self._recent(self.b, t))
        self.predictions[t + 1] = pred
        self.predictions.pop(t - self.b, None)
        return pred

    def ingest(self, point: RawPoint) -> ConversionStep:
        t = point.t
        if t != self.next_t:
            raise OutOfOrderPoint(f"expected t={self.next_t}, got t={t}")
        value = float(point.value)
        if not np.isfinite(value):
            raise ConfigError(f"non-finite value at t={t}")
        self.raw.append(value)
        self.next_t += 1
        self.max_abs = max(self.max_abs, abs(value))
        b = self.b
        step = ConversionStep(t=t, predicted=self.predictions.get(t))

        if t < b - 1:
            return step
        if t == b - 1:
            self.model_m1 = self._train(self._recent(b, t), t)
            self._predict_following(t)
            return step
        if t < 2 * b - 1:
            self._predict_following(t)
            return step
        if t < 2 * b + 1:
            step.aare = self._aare_at(t)
            self.aare_history.append(step.aare)
            self.model_m1 = self._train(self._recent(b, t), t)
            self._predict_following(t)
            return step

        aare = self._aare_at(t)
        thd = conversion_threshold(self.aare_history + [aare])
        recalibrated = False
        if aare > thd:
            window = self._recent(b, t - 1)
            self.model_m1 = self._train(window, t)
            self.predictions[t] = mc.predict_next(self.model_m1, window)
            step.predicted = self.predictions[t]
            aare = self._aare_at(t)
            recalibrated = True
        self.aare_history.append(aare)
        self._predict_following(t)
        step.aare = aare
        step.threshold = thd
        step.output = CalibratedAare(t=t, value=aare, recalibrated=recalibrated)
        return step
