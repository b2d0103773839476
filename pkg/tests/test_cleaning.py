import pytest
from hypothesis import given
from hypothesis import strategies as st

from seawatch.core import (
    AisRecord,
    Rejected,
    TrackPoint,
    dedupe_batch,
    validate_record,
    vessel_class_for,
)

NOMINAL = dict(mmsi="244010001", ts_ms=1000, lat_deg=52.0, lon_deg=4.0, sog_knots=12.0, cog_deg=90.0, source_id="s")


def rec(**over):
    return AisRecord(**{**NOMINAL, **over})


def test_nominal_record_is_accepted():
    assert validate_record(rec()) == TrackPoint("244010001", 1000, 52.0, 4.0, 12.0, 90.0)


@pytest.mark.parametrize(
    "override, reason",
    [
        ({"lat_deg": 91}, "lat_range"),
        ({"sog_knots": 150}, "sog_range"),
        ({"sog_knots": 102.3}, "sog_range"),
        ({"sog_knots": -0.1}, "sog_range"),
        ({"mmsi": "24401000"}, "mmsi_format"),
        ({"mmsi": "24401000x"}, "mmsi_format"),
        ({"lon_deg": 180.5}, "lon_range"),
        ({"cog_deg": 360.0}, "cog_range"),
        ({"ts_ms": 0}, "ts_positive"),
        ({"lat_deg": float("nan")}, "lat_range"),
        ({"lat_deg": "52"}, "lat_range"),
    ],
)
def test_rejection_reasons(override, reason):
    assert validate_record(rec(**override)) == Rejected(reason)


def test_sog_at_encoding_ceiling_is_accepted():
    assert isinstance(validate_record(rec(sog_knots=102.2)), TrackPoint)


def test_first_failing_rule_wins():
    assert validate_record(rec(mmsi="x", lat_deg=91)) == Rejected("mmsi_format")


def test_dedupe_examples():
    a = TrackPoint("244010001", 1, 52.0, 4.0, 10.0, 0.0)
    b = TrackPoint("244010001", 1, 52.0, 4.0, 11.0, 0.0)
    c = TrackPoint("244010001", 2, 52.0, 4.0, 10.0, 0.0)
    assert dedupe_batch([]) == []
    assert dedupe_batch([a, a]) == [a]
    assert dedupe_batch([a, b, c]) == [a, c]


def test_vessel_class_round_robin():
    names = [vessel_class_for(str(244010000 + i)).name for i in range(5)]
    assert names == ["cargo", "tanker", "fishing", "passenger", "cargo"]


records = st.builds(
    AisRecord,
    mmsi=st.sampled_from(["244010001", "244010002", "12345", "abcdefghi"]),
    ts_ms=st.integers(-5, 10**13),
    lat_deg=st.floats(-100, 100, allow_nan=False),
    lon_deg=st.floats(-200, 200, allow_nan=False),
    sog_knots=st.floats(-5, 120, allow_nan=False),
    cog_deg=st.floats(-10, 400, allow_nan=False),
    source_id=st.just("s"),
)


@given(records)
def test_validation_is_idempotent(r):
    out = validate_record(r)
    if isinstance(out, TrackPoint):
        assert validate_record(out.to_record(r.source_id)) == out


points = st.builds(
    TrackPoint,
    mmsi=st.sampled_from(["244010001", "244010002", "244010003"]),
    ts_ms=st.integers(1, 20),
    lat_deg=st.just(52.0),
    lon_deg=st.just(4.0),
    sog_knots=st.floats(0, 30, allow_nan=False),
    cog_deg=st.just(0.0),
)


@given(st.lists(points, max_size=1000))
def test_dedupe_matches_key_scan_oracle(batch):
    out = dedupe_batch(batch)
    expected = []
    for i, p in enumerate(batch):
        if all((q.mmsi, q.ts_ms) != (p.mmsi, p.ts_ms) for q in batch[:i]):
            expected.append(p)
    assert out == expected
    assert len(out) <= len(batch)
    assert dedupe_batch(out) == out
