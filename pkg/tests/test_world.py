import pytest
from hypothesis import given, strategies as st

from avtsync.engine import Rng
from avtsync.world import (
    Area,
    MobilityState,
    Phase,
    PhaseError,
    Position,
    in_range,
    next_leg,
    place_nodes,
    position_at,
    start_pause,
)

FIELD = Area.field(300, 300)
coord = st.floats(-1e3, 1e3, allow_nan=False)


def test_single_node_inside_field():
    (p,) = place_nodes(1, FIELD, Rng(1))
    assert 0 <= p.x <= 300 and 0 <= p.y <= 300


def test_hundred_nodes_inside_field():
    assert all(FIELD.contains(p) for p in place_nodes(100, FIELD, Rng(3)))


def test_placement_deterministic():
    assert place_nodes(10, FIELD, Rng(4)) == place_nodes(10, FIELD, Rng(4))


def test_placement_needs_a_node():
    with pytest.raises(ValueError):
        place_nodes(0, FIELD, Rng(1))


def test_zero_length_leg_arrives_at_once():
    p = Position(5, 5)
    state = MobilityState.parked(p, 0.0, 10.0)
    leg = next_leg(state, Rng(1), Area(5, 5, 5, 5), (1.0, 1.0))
    assert leg.phase is Phase.MOVING
    assert leg.phase_end == leg.phase_start == 10.0
    paused = start_pause(leg, Rng(2), (0.0, 60.0))
    assert paused.phase is Phase.PAUSED and paused.current == p


def test_unit_speed_ten_metre_leg_takes_ten_seconds():
    state = MobilityState.parked(Position(0, 0), 0.0, 0.0)
    leg = next_leg(state, Rng(1), Area(10, 0, 10, 0), (1.0, 1.0))
    assert leg.phase_end == pytest.approx(10.0)


def test_waypoints_deterministic():
    def walk(seed):
        r = Rng(seed)
        s = MobilityState.parked(Position(0, 0), 0.0, 0.0)
        out = []
        for _ in range(5):
            s = next_leg(s, r, FIELD, (0.5, 1.5))
            out.append(s.target)
            s = start_pause(s, r, (0, 60))
        return out

    assert walk(7) == walk(7)


def test_midpoint_of_leg():
    s = MobilityState(Position(0, 0), Position(10, 0), 1.0, Phase.MOVING, 0.0, 10.0)
    assert position_at(s, 5.0) == Position(5, 0)


def test_paused_position_constant():
    s = MobilityState.parked(Position(3, 4), 0.0, 50.0)
    assert position_at(s, 0.0) == position_at(s, 37.2) == Position(3, 4)


def test_arrival_is_exact_target():
    g = Position(7.123456789, 2.0 / 3.0)
    s = MobilityState(Position(0, 0), g, 0.7, Phase.MOVING, 1.0, 1.0 + Position(0, 0).distance(g) / 0.7)
    assert position_at(s, s.phase_end) == g


def test_time_outside_phase_is_error():
    s = MobilityState.parked(Position(0, 0), 5.0, 10.0)
    with pytest.raises(PhaseError):
        position_at(s, 11.0)


def test_range_boundary_inclusive():
    assert in_range(Position(0, 0), Position(25, 0), 25)
    assert not in_range(Position(0, 0), Position(25.001, 0), 25)
    assert in_range(Position(0, 0), Position(3, 4), 5)


@given(coord, coord, coord, coord, st.floats(0, 100))
def test_range_symmetric(ax, ay, bx, by, r):
    a, b = Position(ax, ay), Position(bx, by)
    assert in_range(a, b, r) == in_range(b, a, r)


@given(st.integers(0, 2**32), st.floats(0, 1))
def test_positions_stay_in_field(seed, frac):
    r = Rng(seed)
    s = MobilityState.parked(FIELD.sample(r), 0.0, 0.0)
    leg = next_leg(s, r, FIELD, (0.5, 1.5))
    t = leg.phase_start + frac * (leg.phase_end - leg.phase_start)
    assert FIELD.contains(position_at(leg, min(t, leg.phase_end)))
