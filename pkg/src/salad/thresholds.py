"""Relative-error windows and three-sigma thresholds shared by both stages."""

import math

import numpy as np

from .errors import ConfigError, InsufficientHistory, LengthMismatch


def mean_relative_error(observed, predicted, epsilon: float) -> float:
    """Average of |obs - pred| / max(|obs|, epsilon) over paired values."""
    if not epsilon > 0:
        raise ConfigError(f"epsilon must be > 0, got {epsilon}")
    obs = np.asarray(observed, dtype=float)
    pred = np.asarray(predicted, dtype=float)
    if obs.shape != pred.shape or obs.ndim != 1 or obs.size == 0:
        raise LengthMismatch(f"observed {obs.shape} vs predicted {pred.shape}")
    return float(np.mean(np.abs(obs - pred) / np.maximum(np.abs(obs), epsilon)))


def window_aare(observed, predicted, epsilon: float) -> float:
    return mean_relative_error(observed, predicted, epsilon)


def short_aare(actual, predicted, epsilon: float) -> float:
    if len(actual) != 3 or len(predicted) != 3:
        raise LengthMismatch(
            f"short_aare takes exactly 3 values each, got {len(actual)} and {len(predicted)}"
        )
    return mean_relative_error(actual, predicted, epsilon)


def three_sigma(history, min_len: int) -> float:
    # population std: divide by the number of entries actually present
    arr = np.asarray(history, dtype=float)
    if arr.size < min_len:
        raise InsufficientHistory(f"need >= {min_len} values, got {arr.size}")
    mu = arr.mean()
    return float(mu + 3.0 * math.sqrt(np.mean((arr - mu) ** 2)))


def conversion_threshold(history) -> float:
    return three_sigma(history, 2)


def detection_threshold(history) -> float:
    return three_sigma(history, 3)


def epsilon_floor(scale: float) -> float:
    """Relative-error denominator floor for values of magnitude ``scale``."""
    return 1e-8 * max(1.0, abs(scale))
