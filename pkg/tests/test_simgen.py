import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seawatch import simgen
from seawatch.core import (
    DEFAULT_VESSEL_CLASSES,
    AnomalyKind,
    DetectionConfig,
    SpeedStats,
    SpeedStatsModel,
    TrackPoint,
    run_detection,
    validate_record,
    vessel_class_for,
)

CFG = DetectionConfig()


def tracks(records):
    by = {}
    for r in records:
        by.setdefault(r.mmsi, []).append(validate_record(r))
    return by


def detect_all(records, model=None):
    events = []
    by = tracks(records)
    # fitted like the trainer would: per vessel plus pooled defaults
    from seawatch.core import fit_speed_stats

    model = model or fit_speed_stats(
        {m: [p.sog_knots for p in t] for m, t in by.items()}, CFG.min_points_per_vessel, (12.0, 6.0)
    )
    for mmsi, track in by.items():
        events += run_detection(track, vessel_class_for(mmsi), model, CFG)
    return events


def test_no_injections_no_labels():
    g = simgen.generate(simgen.Scenario(seed=1, n_vessels=3, duration_s=600))
    assert g.labels == [] and g.removed == 0
    assert len(g.records) == 30


def test_deterministic():
    a, b = simgen.generate(simgen.default_scenario()), simgen.generate(simgen.default_scenario())
    assert a == b
    assert [(r.ts_ms, r.mmsi) for r in a.records] == sorted((r.ts_ms, r.mmsi) for r in a.records)


def test_gap_bookkeeping():
    s = simgen.Scenario(seed=5, n_vessels=4, injections=(simgen.InjectionSpec(AnomalyKind.AIS_GAP, 1),))
    g = simgen.generate(s)
    assert len(g.labels) == 1
    assert g.removed == 28800 // 60 - 1
    assert len(g.records) == s.clean_record_count - g.removed


def test_records_are_valid_and_classes_round_robin():
    g = simgen.generate(simgen.default_scenario())
    assert all(isinstance(validate_record(r), TrackPoint) for r in g.records)
    assert g.vessels["244010000"] == "cargo" and g.vessels["244010003"] == "passenger"


def test_injected_vessels_are_disjoint():
    g = simgen.generate(simgen.default_scenario())
    assert len({lb.mmsi for lb in g.labels}) == len(g.labels) == 15


def test_labels_cover_altered_records():
    s = simgen.default_scenario()
    clean = {(r.mmsi, r.ts_ms): r for r in simgen.generate(s.without_injections()).records}
    g = simgen.generate(s)
    dirty = {(r.mmsi, r.ts_ms): r for r in g.records}
    altered = [k for k, r in dirty.items() if clean[k] != r] + [k for k in clean if k not in dirty]
    for mmsi, ts in altered:
        assert any(lb.mmsi == mmsi and lb.ts_start_ms <= ts <= lb.ts_end_ms for lb in g.labels)


def test_too_many_injections():
    s = simgen.Scenario(seed=1, n_vessels=2, injections=(simgen.InjectionSpec(AnomalyKind.AIS_GAP, 3),))
    with pytest.raises(simgen.ScenarioError):
        simgen.generate(s)


def test_scenario_invariants():
    with pytest.raises(simgen.ScenarioError):
        simgen.Scenario(seed=1, n_vessels=0)
    with pytest.raises(simgen.ScenarioError):
        simgen.Scenario(seed=1, n_vessels=1, duration_s=30)


def test_scenario_doc_roundtrip():
    s = simgen.default_scenario()
    assert simgen.Scenario.from_doc(s.to_doc()) == s
    with pytest.raises(simgen.ScenarioError):
        simgen.Scenario.from_doc({"seed": 1, "n_vessels": 1, "speed": 3})


def test_detectability_defaults_pass():
    assert simgen.expected_detectability(simgen.default_scenario(), CFG) == []


def test_detectability_short_gap():
    s = simgen.Scenario(seed=1, n_vessels=2, injections=(simgen.InjectionSpec(AnomalyKind.AIS_GAP, 1, gap_s=60),))
    assert any(p.startswith("ais_gap") for p in simgen.expected_detectability(s, CFG))


def test_detectability_small_offset():
    # 0.01 deg of longitude in 60 s is about 20 knots, far below 100
    inj = simgen.InjectionSpec(AnomalyKind.POSITION_JUMP, 1, offset_deg_lon=0.01)
    s = simgen.Scenario(seed=1, n_vessels=2, injections=(inj,))
    assert any(p.startswith("position_jump") for p in simgen.expected_detectability(s, CFG))


def test_injections_are_detected_exactly():
    g = simgen.generate(simgen.default_scenario())
    events = detect_all(g.records)
    assert sorted((e.kind.value, e.mmsi) for e in events) == sorted((lb.kind.value, lb.mmsi) for lb in g.labels)


@settings(max_examples=15)
@given(st.integers(0, 2**63 - 1), st.integers(1, 12), st.integers(600, 6 * 3600))
def test_clean_traffic_never_fires(seed, n, duration):
    g = simgen.generate(simgen.Scenario(seed=seed, n_vessels=n, duration_s=duration))
    assert detect_all(g.records) == []


def test_shipped_scenarios_are_detectable():
    from seawatch.harness.cli import data_path

    for name in ("default_scenario.json", "clean_scenario.json"):
        s = simgen.Scenario.load(data_path(name))
        assert simgen.expected_detectability(s, CFG) == []
    assert simgen.Scenario.load(data_path("default_scenario.json")) == simgen.default_scenario()
