import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from pipeline import SMALL, make_settings
from seawatch import simgen
from seawatch.core import AnomalyEvent, AnomalyKind
from seawatch.harness import StageFailed, run_e2e, score
from seawatch.simgen import GroundTruthLabel

GAP, JUMP = AnomalyKind.AIS_GAP, AnomalyKind.POSITION_JUMP


def ev(kind, mmsi, s, e):
    return AnomalyEvent.create(kind, mmsi, s, e, 1.0)


def test_empty_is_perfect():
    r = score([], [], 120)
    assert (r.precision, r.recall) == (1.0, 1.0)


def test_single_overlapping_match():
    r = score([GroundTruthLabel(GAP, "1", 0, 100)], [ev(GAP, "1", 50, 60)], 120)
    assert (r.precision, r.recall) == (1.0, 1.0)
    assert r.matched[0][1] == ev(GAP, "1", 50, 60).id


def test_kind_mismatch():
    r = score([GroundTruthLabel(GAP, "1", 0, 100)], [ev(JUMP, "1", 0, 100)], 120)
    assert (r.precision, r.recall) == (0.0, 0.0)
    assert len(r.unmatched_labels) == 1 and len(r.unmatched_events) == 1


def test_widening_by_adjacency():
    label = GroundTruthLabel(JUMP, "1", 1_000_000, 1_000_000)
    assert score([label], [ev(JUMP, "1", 1_120_000, 1_180_000)], 120).recall == 1.0
    assert score([label], [ev(JUMP, "1", 1_120_001, 1_180_000)], 120).recall == 0.0


def test_each_event_used_once():
    labels = [GroundTruthLabel(GAP, "1", 0, 10), GroundTruthLabel(GAP, "1", 5, 15)]
    r = score(labels, [ev(GAP, "1", 0, 20)], 0)
    assert r.recall == 0.5 and r.precision == 1.0
    assert r.per_kind["ais_gap"] == {"labels": 2, "events": 1, "matched": 1, "precision": 1.0, "recall": 0.5}


label_st = st.tuples(st.sampled_from(list(AnomalyKind)), st.sampled_from(["1", "2"]), st.integers(0, 1000), st.integers(0, 200)).map(
    lambda t: GroundTruthLabel(t[0], t[1], t[2], t[2] + t[3])
)
event_st = st.tuples(st.sampled_from(list(AnomalyKind)), st.sampled_from(["1", "2"]), st.integers(0, 1000), st.integers(0, 200)).map(
    lambda t: ev(t[0], t[1], t[2], t[2] + t[3])
)


@given(st.lists(label_st, max_size=8), st.lists(event_st, max_size=8, unique_by=lambda e: e.id), st.integers(0, 1))
def test_matches_brute_force_counts(labels, events, adjacency_s):
    r = score(labels, events, adjacency_s / 10)
    matched = oracles.match_greedy(
        [(lb.kind.value, lb.mmsi, lb.ts_start_ms, lb.ts_end_ms) for lb in labels],
        [(e.id, e.kind.value, e.mmsi, e.ts_start_ms, e.ts_end_ms) for e in events],
        adjacency_s / 10,
    )
    assert len(r.matched) == matched
    assert 0.0 <= r.precision <= 1.0 and 0.0 <= r.recall <= 1.0
    assert len(r.matched) + len(r.unmatched_labels) == len(labels)
    assert len(r.matched) + len(r.unmatched_events) == len(events)


def test_e2e_small_scenario_and_files(tmp_path):
    settings = make_settings(tmp_path / "cfg")
    result = run_e2e(SMALL, settings, tmp_path / "work", mode="batch", adapters="memory")
    assert result.exit_code == 0
    assert len(result.events) == 3
    for name in ("records.ndjson", "labels.ndjson", "events.ndjson", "report.json"):
        assert (tmp_path / "work" / name).is_file()
    report = json.loads((tmp_path / "work" / "report.json").read_text())
    assert report["anomaly_ids"] == result.anomaly_ids


def test_e2e_is_hermetic(tmp_path):
    settings = make_settings(tmp_path / "cfg")
    before = sorted(p.name for p in (tmp_path / "cfg").iterdir())
    run_e2e(SMALL, settings, tmp_path / "work", adapters="fs")
    assert sorted(p.name for p in (tmp_path / "cfg").iterdir()) == before
    assert (tmp_path / "work" / "lake").is_dir()


def test_e2e_rejects_undetectable_scenario(tmp_path):
    bad = simgen.Scenario(seed=1, n_vessels=2, injections=(simgen.InjectionSpec(AnomalyKind.AIS_GAP, 1, gap_s=60),))
    with pytest.raises(StageFailed) as err:
        run_e2e(bad, make_settings(tmp_path / "cfg"), tmp_path / "work")
    assert err.value.stage == "detectability"


def test_e2e_names_failing_stage(tmp_path, monkeypatch):
    import seawatch.harness.e2e as e2e

    def broken(*a, **k):
        raise RuntimeError("disk on fire")

    monkeypatch.setattr(e2e, "trainer_run", broken)
    with pytest.raises(StageFailed, match="stage trainer failed: disk on fire"):
        run_e2e(SMALL, make_settings(tmp_path / "cfg"), tmp_path / "work", adapters="memory")
