import pytest
from hypothesis import given, strategies as st

from avtsync.avt import Feedback, avt_adjust, avt_new, avt_value


def test_default_start_is_midpoint():
    assert avt_value(avt_new(-1e-4, 1e-4)) == 0.0


def test_start_at_lower_bound():
    assert avt_value(avt_new(-1e-4, 1e-4, -1e-4)) == -1e-4


def test_empty_space_rejected():
    with pytest.raises(ValueError):
        avt_new(1e-4, 1e-4)


def test_v0_outside_rejected():
    with pytest.raises(ValueError):
        avt_new(0.0, 1.0, 2.0)


def test_reads_are_pure():
    a = avt_new(-1e-4, 1e-4, 0.0)
    assert avt_value(a) == avt_value(a) == 0.0


def test_up_moves_up():
    a = avt_adjust(avt_new(-1e-4, 1e-4, 0.0), Feedback.UP)
    assert avt_value(a) > 0


def test_first_up_with_known_step():
    a = avt_new(-1e-4, 1e-4, 0.0)
    a.delta = 1e-5
    avt_adjust(a, Feedback.UP)
    # no previous direction: the step shrinks by decel before it is applied
    assert a.delta == pytest.approx(1e-5 / 3)
    assert avt_value(a) == pytest.approx(1e-5 / 3)


def test_repeated_direction_accelerates():
    a = avt_new(-1.0, 1.0, 0.0, delta_max=1.0)
    avt_adjust(a, Feedback.UP)
    d1 = a.delta
    avt_adjust(a, Feedback.UP)
    assert a.delta == pytest.approx(2 * d1)


def test_good_keeps_value():
    a = avt_new(-1e-4, 1e-4, 3e-5)
    before = avt_value(a)
    avt_adjust(a, Feedback.GOOD)
    assert avt_value(a) == before


def test_alternating_feedback_settles_at_min_step():
    a = avt_new(-1e-4, 1e-4, 0.0)
    values = []
    for i in range(100):
        avt_adjust(a, Feedback.UP if i % 2 == 0 else Feedback.DOWN)
        values.append(avt_value(a))
    assert a.delta == a.delta_min
    tail = values[-20:]
    assert max(tail) - min(tail) <= 2 * a.delta_min


@given(st.lists(st.sampled_from(list(Feedback)), max_size=300), st.floats(-1e-4, 1e-4))
def test_value_and_step_stay_bounded(feedbacks, v0):
    a = avt_new(-1e-4, 1e-4, v0)
    for f in feedbacks:
        avt_adjust(a, f)
        assert -1e-4 <= avt_value(a) <= 1e-4
        assert a.delta_min <= a.delta <= a.delta_max


@given(st.floats(-1e-4, 1e-4), st.floats(-1e-4, 1e-4))
def test_converges_against_sign_oracle(target, v0):
    a = avt_new(-1e-4, 1e-4, v0)
    for _ in range(200):
        if abs(avt_value(a) - target) <= 10 * a.delta_min:
            break
        avt_adjust(a, Feedback.UP if target > avt_value(a) else Feedback.DOWN)
    assert abs(avt_value(a) - target) <= 10 * a.delta_min
