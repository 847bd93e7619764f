"""Single-hidden-layer LSTM regressor trained by full BPTT.

One scalar feature per step; the window is fed as one sequence and every
step is trained to predict the following value. Gates are stacked in the
order input, forget, cell candidate, output.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, Sequence

import numpy as np

from . import _kernels
from .errors import ConfigError, EmptyInput, NonFiniteLoss, WindowTooShort

PARAM_NAMES = ("w_in", "w_rec", "bias", "w_out", "b_out")
GATES = ("input", "forget", "cell", "output")


@dataclass(frozen=True)
class NetworkConfig:
    hidden_units: int = 10
    epoch_cap: int = 100
    early_stop_patience: int = 5
    early_stop_min_delta: float = 1e-5
    learning_rate: float = 0.01
    seed: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    # "train": predict with the scaler fitted on the training window;
    # "window": refit the scaler on each prediction input
    input_scaling: str = "train"

    def __post_init__(self):
        if self.hidden_units < 1:
            raise ConfigError(f"hidden_units must be >= 1, got {self.hidden_units}")
        if self.epoch_cap < 1:
            raise ConfigError(f"epoch_cap must be >= 1, got {self.epoch_cap}")
        if self.early_stop_patience < 1:
            raise ConfigError("early_stop_patience must be >= 1")
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.input_scaling not in ("train", "window"):
            raise ConfigError(f"input_scaling must be 'train' or 'window', got {self.input_scaling!r}")

    def with_seed(self, seed: int) -> "NetworkConfig":
        return replace(self, seed=int(seed))


# conversion model M1 and detection model M2
CONVERSION_NET = NetworkConfig(epoch_cap=100)
DETECTION_NET = NetworkConfig(epoch_cap=50, input_scaling="window")


@dataclass(frozen=True)
class MinMaxScaler:
    """Maps [lo, hi] onto [0, 1]; a degenerate range maps everything to 0.5."""

    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if self.hi < self.lo:
            raise ConfigError(f"scaler hi ({self.hi}) < lo ({self.lo})")

    @classmethod
    def fit(cls, values) -> "MinMaxScaler":
        arr = np.asarray(values, dtype=float)
        return cls(float(arr.min()), float(arr.max()))

    @property
    def degenerate(self) -> bool:
        return self.hi == self.lo

    def transform(self, values) -> np.ndarray:
        arr = np.asarray(values, dtype=float)
        if self.degenerate:
            return np.full_like(arr, 0.5)
        return (arr - self.lo) / (self.hi - self.lo)

    def inverse(self, scaled):
        if self.degenerate:
            if np.ndim(scaled) == 0:
                return self.lo
            return np.full_like(np.asarray(scaled, dtype=float), self.lo)
        return np.asarray(scaled, dtype=float) * (self.hi - self.lo) + self.lo


@dataclass
class SequenceModel:
    """LSTM weights plus the scaler fitted on its training window.

    ``w_in`` (4H,) and ``w_rec`` (4H, H) hold the four gates stacked;
    ``gate(name)`` returns the per-gate views.
    """

    w_in: np.ndarray
    w_rec: np.ndarray
    bias: np.ndarray
    w_out: np.ndarray
    b_out: float
    scaler: MinMaxScaler = field(default_factory=MinMaxScaler)
    trained_epochs: int = 0
    window_scaling: bool = False

    @property
    def hidden_units(self) -> int:
        return self.w_out.shape[0]

    def gate(self, name: str) -> Dict[str, np.ndarray]:
        k = GATES.index(name)
        h = self.hidden_units
        sl = slice(k * h, (k + 1) * h)
        return {"w_in": self.w_in[sl], "w_rec": self.w_rec[sl], "bias": self.bias[sl]}

    def params(self) -> Dict[str, np.ndarray]:
        return {
            "w_in": self.w_in,
            "w_rec": self.w_rec,
            "bias": self.bias,
            "w_out": self.w_out,
            "b_out": np.array(self.b_out, dtype=float),
        }

    def with_params(self, params: Dict[str, np.ndarray]) -> "SequenceModel":
        return SequenceModel(
            w_in=np.array(params["w_in"], dtype=float),
            w_rec=np.array(params["w_rec"], dtype=float),
            bias=np.array(params["bias"], dtype=float),
            w_out=np.array(params["w_out"], dtype=float),
            b_out=float(params["b_out"]),
            scaler=self.scaler,
            trained_epochs=self.trained_epochs,
            window_scaling=self.window_scaling,
        )

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.params().values())


@dataclass(frozen=True)
class TrainOutcome:
    model: SequenceModel
    final_loss: float
    epochs_run: int


def init_model(config: NetworkConfig, scaler: MinMaxScaler | None = None) -> SequenceModel:
    h = config.hidden_units
    rng = np.random.default_rng(config.seed)
    scale = 1.0 / np.sqrt(h)
    w_in = rng.uniform(-0.5, 0.5, size=4 * h) * scale
    w_rec = rng.uniform(-0.5, 0.5, size=(4 * h, h)) * scale
    w_out = rng.uniform(-0.5, 0.5, size=h) * scale
    bias = np.zeros(4 * h)
    bias[h:2 * h] = 1.0
    return SequenceModel(w_in, w_rec, bias, w_out, 0.0, scaler or MinMaxScaler())


def _forward(model: SequenceModel, xs: np.ndarray):
    return _kernels.forward(model.w_in, model.w_rec, model.bias, model.w_out, float(model.b_out),
                            np.ascontiguousarray(xs, dtype=float))


def _pairs(model: SequenceModel, window) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(window, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 2:
        raise WindowTooShort(f"training window needs >= 2 values, got {arr.size}")
    scaled = model.scaler.transform(arr)
    return scaled[:-1], scaled[1:]


def loss(model: SequenceModel, window) -> float:
    """MSE of the one-step predictions over the window, in scaled units."""
    xs, targets = _pairs(model, window)
    ys = _forward(model, xs)[0]
    return float(np.mean((ys - targets) ** 2))


def loss_and_grad(model: SequenceModel, window) -> tuple[float, Dict[str, np.ndarray]]:
    xs, targets = _pairs(model, window)
    return _loss_and_grad_scaled(model, xs, targets)


def _loss_and_grad_scaled(model, xs, targets):
    ys, hs, gates, cs = _forward(model, xs)
    err = ys - targets
    dy = 2.0 * err / xs.shape[0]
    g_w_in, g_w_rec, g_bias, g_w_out, g_b_out = _kernels.backward(
        model.w_rec, model.w_out, np.ascontiguousarray(xs, dtype=float), dy, hs, gates, cs)
    grads = {
        "w_in": g_w_in,
        "w_rec": g_w_rec,
        "bias": g_bias,
        "w_out": g_w_out,
        "b_out": np.array(g_b_out),
    }
    return float(np.mean(err ** 2)), grads


def numeric_gradient(model: SequenceModel, window, step: float = 1e-5) -> Dict[str, np.ndarray]:
    """Central finite differences of ``loss`` over every parameter."""
    if not step > 0:
        raise ConfigError(f"finite-difference step must be > 0, got {step}")
    _pairs(model, window)
    params = {k: np.array(v, dtype=float) for k, v in model.params().items()}
    grads = {}
    for name, arr in params.items():
        g = np.zeros_like(arr)
        flat = arr.reshape(-1)
        gflat = g.reshape(-1)
        for j in range(flat.size):
            orig = flat[j]
            flat[j] = orig + step
            up = loss(model.with_params(params), window)
            flat[j] = orig - step
            down = loss(model.with_params(params), window)
            flat[j] = orig
            gflat[j] = (up - down) / (2.0 * step)
        grads[name] = g
    return grads


def gradient_discrepancy(analytic, numeric, floor: float = 1e-8) -> float:
    """Max relative difference over entries where either gradient exceeds ``floor``."""
    worst = 0.0
    for name in PARAM_NAMES:
        a = np.ravel(analytic[name])
        b = np.ravel(numeric[name])
        mask = (np.abs(a) > floor) | (np.abs(b) > floor)
        if not mask.any():
            continue
        rel = np.abs(a[mask] - b[mask]) / np.maximum(np.abs(a[mask]), np.abs(b[mask]))
        worst = max(worst, float(rel.max()))
    return worst


def train(window: Sequence[float], config: NetworkConfig) -> TrainOutcome:
    arr = np.asarray(window, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 2:
        raise WindowTooShort(f"training window needs >= 2 values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteLoss("training window contains non-finite values")

    model = init_model(config, MinMaxScaler.fit(arr))
    xs, targets = _pairs(model, arr)
    params = {k: np.array(v, dtype=float) for k, v in model.params().items()}
    m = {k: np.zeros_like(v) for k, v in params.items()}
    v = {k: np.zeros_like(v) for k, v in params.items()}

    best = np.inf
    stale = 0
    epochs = 0
    current = np.nan
    for epoch in range(1, config.epoch_cap + 1):
        current, grads = _loss_and_grad_scaled(model, xs, targets)
        if not np.isfinite(current):
            raise NonFiniteLoss(f"loss became {current} at epoch {epoch}")
        b1t = 1.0 - config.beta1 ** epoch
        b2t = 1.0 - config.beta2 ** epoch
        for name, g in grads.items():
            m[name] = config.beta1 * m[name] + (1.0 - config.beta1) * g
            v[name] = config.beta2 * v[name] + (1.0 - config.beta2) * g * g
            params[name] = params[name] - config.learning_rate * (m[name] / b1t) / (
                np.sqrt(v[name] / b2t) + config.adam_eps
            )
        model = model.with_params(params)
        epochs = epoch
        if not model.is_finite():
            raise NonFiniteLoss(f"parameters became non-finite at epoch {epoch}")

        if best - current < config.early_stop_min_delta:
            stale += 1
        else:
            stale = 0
        best = min(best, current)
        if stale >= config.early_stop_patience:
            break

    model.trained_epochs = epochs
    model.window_scaling = config.input_scaling == "window"
    return TrainOutcome(model=model, final_loss=float(current), epochs_run=epochs)


def predict_next(model: SequenceModel, recent: Sequence[float]) -> float:
    arr = np.asarray(recent, dtype=float)
    if arr.size == 0:
        raise EmptyInput("predict_next needs at least one value")
    arr = arr.reshape(-1)
    scaler = MinMaxScaler.fit(arr) if model.window_scaling else model.scaler
    ys = _forward(model, scaler.transform(arr))[0]
    return float(scaler.inverse(ys[-1]))
