"""Synthetic recurrent series with injected anomalies and matching labels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .errors import ConfigError
from .evaluation import LabelWindow

PATTERNS = ("sine", "double-sine", "constant")
KINDS = ("spike", "dip", "shift")


@dataclass(frozen=True)
class Injection:
    """``spike``/``dip`` multiply one value by ``magnitude``; ``shift`` adds
    ``magnitude * amplitude`` to ``length`` consecutive values."""

    kind: str
    index: int
    magnitude: float
    length: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown anomaly kind {self.kind!r}; expected one of {KINDS}")
        if self.index < 0 or self.length < 1:
            raise ConfigError(f"bad anomaly placement {self}")
        if self.kind != "shift" and self.length != 1:
            raise ConfigError(f"{self.kind} anomalies cover a single point")

    @property
    def window(self) -> LabelWindow:
        return LabelWindow(self.index, self.index + self.length - 1, self.kind)


def parse_injections(spec: str) -> List[Injection]:
    """Parse ``kind:index:magnitude[:length]`` items separated by commas.

    >>> parse_injections("spike:1500:3,shift:2500:1.5:20")[1].length
    20
    """
    out = []
    for item in filter(None, (s.strip() for s in (spec or "").split(","))):
        parts = item.split(":")
        if len(parts) not in (3, 4):
            raise ConfigError(f"bad anomaly spec {item!r}; want kind:index:magnitude[:length]")
        try:
            inj = Injection(parts[0], int(parts[1]), float(parts[2]), int(parts[3]) if len(parts) == 4 else 1)
        except ValueError as exc:
            raise ConfigError(f"bad anomaly spec {item!r}: {exc}") from None
        out.append(inj)
    return out


def generate(pattern: str = "sine", period: int = 50, length: int = 3000, noise: float = 0.0,
             seed: int = 0, amplitude: float = 1.0, offset: float = 3.0,
             injections: Sequence[Injection] = (), weekly: int = 7):
    """Return ``(values, label_windows)``.

    ``noise`` is the Gaussian standard deviation as a fraction of
    ``amplitude``. ``double-sine`` adds a slower component with period
    ``weekly * period`` plus a lowered tail of each slow cycle, a
    weekday/weekend-like sub-pattern.
    """
    if pattern not in PATTERNS:
        raise ConfigError(f"unknown pattern {pattern!r}; expected one of {PATTERNS}")
    if period < 4:
        raise ConfigError(f"period must be >= 4, got {period}")
    if length < 4 * period:
        raise ConfigError(f"length must be >= 4 * period ({4 * period}), got {length}")
    if noise < 0:
        raise ConfigError("noise must be >= 0")

    t = np.arange(length, dtype=float)
    if pattern == "constant":
        values = np.full(length, offset)
    elif pattern == "sine":
        values = offset + amplitude * np.sin(2 * np.pi * t / period)
    else:
        slow = weekly * period
        daily = np.sin(2 * np.pi * t / period)
        weekend = (t % slow) >= (weekly - 2) * period
        values = offset + amplitude * np.where(weekend, 0.5 * daily - 0.6, daily)
        values = values + 0.2 * amplitude * np.sin(2 * np.pi * t / slow)
    if noise > 0:
        rng = np.random.default_rng(seed)
        values = values + rng.normal(0.0, noise * amplitude, size=length)

    windows = []
    for inj in sorted(injections, key=lambda i: i.index):
        end = inj.index + inj.length
        if end > length:
            raise ConfigError(f"anomaly at {inj.index} (length {inj.length}) runs past the series end")
        if inj.kind == "shift":
            values[inj.index:end] += inj.magnitude * amplitude
        else:
            values[inj.index] *= inj.magnitude
        windows.append(inj.window)
    return values, windows
