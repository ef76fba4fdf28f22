import pytest
from hypothesis import given, strategies as st

from avtsync.config import ConfigError, ScenarioConfig, load_config, parse_config, render_config


def test_empty_document_gives_defaults():
    cfg = parse_config("")
    assert cfg == ScenarioConfig()
    assert cfg.world.field_width == 300 and cfg.radio.range == 25
    assert cfg.scenario.beacon_period == 30 and cfg.scenario.duration == 25000
    assert cfg.scenario.node_count == 100
    assert (cfg.avt.v_min, cfg.avt.v_max) == (-1e-4, 1e-4)


def test_negative_period_rejected():
    with pytest.raises(ConfigError):
        parse_config("[scenario]\nbeacon_period = -1\n")


def test_gtsp_defaults():
    cfg = parse_config("[scenario]\nprotocol = gtsp\n")
    params = cfg.protocol_params()
    assert cfg.scenario.protocol == "gtsp"
    assert params.max_neighbors == 10 and params.neighbor_timeout == 5


def test_unknown_protocol_rejected():
    with pytest.raises(ConfigError):
        parse_config("[scenario]\nprotocol = ntp\n")


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config("[radio]\npower = 3\n")


def test_unknown_section_rejected():
    with pytest.raises(ConfigError):
        parse_config("[extras]\na = 1\n")


def test_bad_number_rejected():
    with pytest.raises(ConfigError):
        parse_config("[scenario]\nseed = lots\n")


def test_partition_needs_nodes():
    with pytest.raises(ConfigError):
        parse_config("[partition]\nenabled = true\n")


def test_reference_cannot_be_partitioned():
    with pytest.raises(ConfigError):
        parse_config("[partition]\nenabled = true\nnodes = 0, 1\n")


def test_partition_lists_parse():
    cfg = parse_config("[partition]\nenabled = yes\nnodes = 5, 6 7\nferry = 4\n")
    assert cfg.partition.nodes == (5, 6, 7) and cfg.partition.ferry == 4


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "nope.ini"))


def test_with_values_rejects_unknown():
    with pytest.raises(ConfigError):
        ScenarioConfig().with_values(scenario__colour="red")


configs = st.builds(
    lambda proto, seed, n, period, loss, v0, band, est: ScenarioConfig().with_values(
        scenario__protocol=proto, scenario__seed=seed, scenario__node_count=n,
        scenario__beacon_period=period, radio__loss_prob=loss, avt__v0=v0,
        avt__good_band=band, tables__gtsp_estimator=est,
    ),
    st.sampled_from(["avt_flood", "avt_p2p", "pulsesync", "gtsp"]),
    st.integers(0, 2**64 - 1),
    st.integers(2, 500),
    st.floats(0.1, 1000),
    st.floats(0, 1),
    st.one_of(st.none(), st.floats(-1e-4, 1e-4)),
    st.floats(0, 50),
    st.sampled_from(["regression", "two_point"]),
)


@given(configs)
def test_render_parse_round_trip(cfg):
    assert parse_config(render_config(cfg)) == cfg
