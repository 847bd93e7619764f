import os

import numpy as np
import pytest

from salad.conversion import RawPoint
from salad.synth import generate, parse_injections

# lines printed by the acceptance suite, echoed again in the terminal summary
ACCEPTANCE_LINES = []

SYNTH_ANOMALIES = "spike:1500:3,dip:2000:0.3,shift:2500:1.5:20"


def synthetic_points(seed=0, anomalies=SYNTH_ANOMALIES, length=3000, period=50, noise=0.01):
    values, windows = generate("sine", period, length, noise=noise, seed=seed,
                               injections=parse_injections(anomalies))
    return [RawPoint(i, float(v)) for i, v in enumerate(values)], windows


def points_from(values):
    return [RawPoint(i, float(v)) for i, v in enumerate(values)]


@pytest.fixture
def sine_points():
    return points_from(3 + np.sin(2 * np.pi * np.arange(120) / 12))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def data_path(env, default):
    path = os.environ.get(env, default)
    return path if path and os.path.exists(path) else None
