import numpy as np
import pytest

from salad.errors import ConfigError
from salad.evaluation import LabelWindow
from salad.synth import Injection, generate, parse_injections


def test_spike_label():
    values, windows = generate("sine", 50, 3000, injections=parse_injections("spike:1500:3"))
    clean, _ = generate("sine", 50, 3000)
    assert windows == [LabelWindow(1500, 1500, "spike")]
    assert values[1500] == pytest.approx(3 * clean[1500])


def test_shift_covers_segment():
    values, windows = generate("sine", 50, 600, injections=parse_injections("shift:300:1.5:20"))
    clean, _ = generate("sine", 50, 600)
    diff = values - clean
    assert np.allclose(diff[300:320], 1.5) and np.allclose(np.delete(diff, range(300, 320)), 0)
    assert windows == [LabelWindow(300, 319, "shift")]


def test_constant_noise_free():
    values, _ = generate("constant", 10, 100, noise=0.0)
    assert np.all(values == values[0])


def test_noise_seeded():
    a, _ = generate("sine", 20, 200, noise=0.05, seed=3)
    b, _ = generate("sine", 20, 200, noise=0.05, seed=3)
    c, _ = generate("sine", 20, 200, noise=0.05, seed=4)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_double_sine_has_weekend_segment():
    values, _ = generate("double-sine", 24, 24 * 14, noise=0.0)
    week = values[: 24 * 7]
    assert week[24 * 5:].mean() < week[: 24 * 5].mean() - 0.3


@pytest.mark.parametrize("kwargs", [
    {"length": 100, "period": 50}, {"period": 3}, {"pattern": "square"}, {"noise": -1.0},
])
def test_bad_arguments(kwargs):
    with pytest.raises(ConfigError):
        generate(**kwargs)


@pytest.mark.parametrize("spec", ["spike:10", "blip:1:2", "spike:x:2", "spike:1:2:3"])
def test_bad_injection_spec(spec):
    with pytest.raises(ConfigError):
        parse_injections(spec)


def test_injection_past_end():
    with pytest.raises(ConfigError):
        generate("sine", 10, 100, injections=[Injection("shift", 95, 1.0, 10)])
