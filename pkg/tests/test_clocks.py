from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from avtsync.clocks import ClockError, HardwareClock, LogicalClock, hw_read, ideal_rate


def test_ideal_hardware_one_second():
    assert hw_read(HardwareClock(0.0, 0), 1.0) == 1_000_000


def test_fast_clock_long_run():
    assert hw_read(HardwareClock(1e-4, 0), 10_000.0) == 10_001_000_000


def test_slow_clock_one_second():
    assert hw_read(HardwareClock(-1e-4, 0), 1.0) == 999_900


def test_drift_bound_enforced():
    with pytest.raises(ValueError):
        HardwareClock(2e-4)


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        hw_read(HardwareClock(), -1.0)


def test_identity_rate():
    assert LogicalClock(0.0, 0).read(10**6) == 10**6


def test_rate_correction_applied():
    assert LogicalClock(0.0, 0, 1e-4).read(10**6) == pytest.approx(1_000_100)


def test_zero_elapsed_reads_base():
    assert LogicalClock(42.0, 77, 3e-5).read(77) == 42.0


def test_read_before_base_rejected():
    with pytest.raises(ClockError):
        LogicalClock(0.0, 10).read(9)


def test_offset_adjustments():
    c = LogicalClock(100.0, 0)
    c.adjust_offset(0, 0.0)
    assert c.read(0) == 100.0
    c.adjust_offset(0, 7.0)
    assert c.read(0) == 107.0
    c.adjust_offset(0, -7.0)
    assert c.read(0) == 100.0


def test_bounds_enforced():
    c = LogicalClock(0.0, 0, bounds=(-1e-4, 1e-4))
    with pytest.raises(ClockError):
        c.set_rate(0, 2e-4)


@pytest.mark.parametrize("rho", [1e-4, -1e-4, 3.7e-5])
def test_ideal_rate_gives_unit_slope(rho):
    # exact rational check: (1 + rho)(1 + s) should be 1 up to float rounding of s
    s = ideal_rate(rho)
    prod = (1 + Fraction(rho)) * (1 + Fraction(s))
    assert abs(prod - 1) < Fraction(1, 10**15)
    hw = HardwareClock(rho, 0)
    c = LogicalClock(0.0, 0)
    c.set_rate(0, s)
    for t in (1.0, 100.0, 10_000.0):
        assert c.read(hw.read(t)) == pytest.approx(t * 1e6, abs=2.0)


def test_zero_rate_tracks_hardware():
    c = LogicalClock.following(500)
    assert c.read(1500) == 1500


@given(st.floats(-1e-4, 1e-4), st.floats(-1e-4, 1e-4), st.integers(0, 10**9), st.integers(0, 10**9))
def test_rate_change_is_continuous(s0, s1, hw1, dt):
    c = LogicalClock(12345.0, 0, s0)
    before = c.read(hw1)
    c.set_rate(hw1, s1)
    assert c.read(hw1) == before
    assert c.read(hw1 + dt) == pytest.approx(before + dt * (1 + s1))
