import itertools

import pytest
from hypothesis import given, strategies as st

from avtsync.metrics import ErrorSample, average_global_error, peak_global_error, sample_global_error


def test_spread_of_three():
    s = sample_global_error({0: 10.0, 1: 12.0, 2: 15.0}, 1.0)
    assert s.global_error == 5.0 and s.max_node == 2 and s.min_node == 0


def test_equal_readings():
    assert sample_global_error({0: 3.0, 1: 3.0, 2: 3.0}, 0.0).global_error == 0.0


def test_two_readings():
    assert sample_global_error({0: 0.0, 1: 100.0}, 0.0).global_error == 100.0


def test_needs_two_nodes():
    with pytest.raises(ValueError):
        sample_global_error({0: 1.0}, 0.0)


def test_mean_abs_deviation():
    assert sample_global_error({0: 0.0, 1: 4.0}, 0.0).mean_abs_error == 2.0


def _s(t, e):
    return ErrorSample(t, e, 0.0, 0, 1)


def test_window_mean():
    assert average_global_error([_s(1, 4), _s(2, 6), _s(9, 100)], (0, 5)) == 5.0


def test_window_single():
    assert average_global_error([_s(1, 7)], (0, 5)) == 7.0


def test_empty_window():
    with pytest.raises(ValueError):
        average_global_error([_s(1, 7)], (2, 5))
    with pytest.raises(ValueError):
        peak_global_error([], (0, 1))


@given(st.dictionaries(st.integers(0, 50), st.floats(-1e9, 1e9), min_size=2, max_size=8))
def test_spread_equals_worst_pair(readings):
    worst = max(abs(readings[a] - readings[b]) for a, b in itertools.combinations(readings, 2))
    assert sample_global_error(readings, 0.0).global_error == worst
