import pytest

from avtsync.config import ScenarioConfig
from avtsync.metrics import ErrorSample
from avtsync.repro import (
    check_disconnection_robustness,
    check_protocol_ordering,
    partition_config,
)


def rows(medians, seeds=5):
    out = []
    for proto, value in medians.items():
        for s in range(1, seeds + 1):
            out.append({"protocol": proto, "seed": str(s), "steady_state_avg_us": str(value)})
    return out


def test_ordering_pass():
    v = check_protocol_ordering(rows({"gtsp": 900, "avt_p2p": 300, "avt_flood": 60, "pulsesync": 50}))
    assert v.passed


def test_ordering_fail():
    v = check_protocol_ordering(rows({"gtsp": 100, "avt_p2p": 300, "avt_flood": 60, "pulsesync": 50}))
    assert not v.passed


def test_ordering_needs_five_seeds():
    with pytest.raises(ValueError):
        check_protocol_ordering(rows({"gtsp": 900, "avt_p2p": 300, "avt_flood": 60, "pulsesync": 50}, 4))


def test_ordering_needs_every_protocol():
    with pytest.raises(ValueError):
        check_protocol_ordering(rows({"gtsp": 900, "avt_p2p": 300, "avt_flood": 60}))


def test_ordering_uses_median():
    r = rows({"gtsp": 900, "avt_p2p": 300, "avt_flood": 60, "pulsesync": 50})
    r[0]["steady_state_avg_us"] = "1"  # one outlier seed for gtsp
    assert check_protocol_ordering(r).passed


PART = partition_config("desk")


def trace(pre, peak, post, seed=1, cfg=PART):
    cfg = cfg.with_values(scenario__seed=seed)
    p = cfg.partition
    out = []
    for k in range(1, int(cfg.scenario.duration / 10) + 1):
        t = 10.0 * k
        e = pre if t < p.start else peak if t <= p.end else post
        out.append(ErrorSample(t, e, 0.0, 0, 1))
    return cfg, out


def test_robustness_pass():
    v = check_disconnection_robustness([trace(20, 60, 20)], [trace(15, 400, 16)])
    assert v.passed


def test_robustness_fails_without_spike_gap():
    v = check_disconnection_robustness([trace(20, 300, 20)], [trace(15, 400, 16)])
    assert not v.passed


def test_robustness_fails_without_recovery():
    v = check_disconnection_robustness([trace(20, 60, 500)], [trace(15, 400, 900)])
    assert not v.passed


def test_robustness_needs_partition():
    plain = ScenarioConfig().with_values(scenario__duration=1000.0)
    samples = [ErrorSample(10.0 * k, 1.0, 0.0, 0, 1) for k in range(1, 101)]
    with pytest.raises(ValueError):
        check_disconnection_robustness([(plain, samples)], [(plain, samples)])
