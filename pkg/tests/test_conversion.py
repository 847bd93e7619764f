import numpy as np
import pytest

from salad.conversion import Converter, RawPoint, derive_seed
from salad.errors import ConfigError, OutOfOrderPoint


def _feed(conv, values):
    return [conv.ingest(RawPoint(i, float(v))) for i, v in enumerate(values)]


def test_schedule_for_small_window():
    b = 6
    conv = Converter(b, seed=1)
    steps = _feed(conv, 3 + np.sin(np.arange(40) / 2.0))
    assert all(s.aare is None for s in steps[: 2 * b - 1])
    assert all(s.aare is not None for s in steps[2 * b - 1:])
    assert all(s.output is None for s in steps[: 2 * b + 1])
    assert [s.output.t for s in steps[2 * b + 1:]] == list(range(2 * b + 1, 40))
    assert conv.first_output_t == 2 * b + 1
    # one history entry per step from 2b-1 on
    assert len(conv.aare_history) == 40 - (2 * b - 1)


def test_prediction_starts_after_first_window():
    b = 5
    steps = _feed(Converter(b), np.linspace(1, 2, 20))
    assert all(s.predicted is None for s in steps[:b])
    assert all(s.predicted is not None for s in steps[b:])


def test_constant_series_gives_near_zero_aare():
    conv = Converter(8, seed=0)
    steps = _feed(conv, [5.0] * 60)
    outs = [s.output for s in steps if s.output is not None]
    assert outs and all(o.value < 1e-3 for o in outs)
    assert not any(o.recalibrated for o in outs)


def test_breach_appends_recomputed_value():
    values = list(3 + np.sin(2 * np.pi * np.arange(80) / 10))
    values[60] = 30.0
    conv = Converter(10, seed=0)
    steps = _feed(conv, values)
    recal = [s for s in steps if s.output is not None and s.output.recalibrated]
    assert recal
    for s in recal:
        assert conv.aare_history[s.t - (2 * 10 - 1)] == s.output.value == s.aare


def test_out_of_order_rejected():
    conv = Converter(4)
    conv.ingest(RawPoint(0, 1.0))
    with pytest.raises(OutOfOrderPoint):
        conv.ingest(RawPoint(0, 1.0))
    with pytest.raises(OutOfOrderPoint):
        conv.ingest(RawPoint(2, 1.0))


def test_window_must_be_at_least_two():
    with pytest.raises(ConfigError):
        Converter(1)


def test_non_finite_value_rejected():
    with pytest.raises(ConfigError):
        Converter(4).ingest(RawPoint(0, float("inf")))


def test_derived_seeds_differ_by_stage_and_time():
    seeds = {derive_seed(0, s, t) for s in (1, 2, 3) for t in range(50)}
    assert len(seeds) == 150
    assert derive_seed(5, 1, 7) == derive_seed(5, 1, 7)
