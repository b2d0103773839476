import hashlib
import json
import re
import threading

import pytest

from pipeline import DATES, SMALL, make_settings, run_pipeline
from seawatch import simgen
from seawatch.core import AisRecord
from seawatch.ports import DETECTION_REQUESTS_TOPIC, MessageEnvelope
from seawatch.ports.codec import record_to_doc, to_ndjson
from seawatch.services import (
    Components,
    detector_batch_run,
    detector_service_loop,
    ingestor_run,
    loader_run,
    processor_run,
    trainer_run,
)
from seawatch.services.cli import ServiceFailed

RAW_KEY = re.compile(r"raw/synthetic/\d{4}-\d{2}-\d{2}/batch-\d+-\d{4}\.ndjson")


@pytest.fixture
def settings(tmp_path):
    return make_settings(tmp_path / "run")


def lake_digest(c, prefix):
    h = hashlib.sha256()
    for key in c.storage.list(prefix):
        h.update(key.encode() + b"\0" + c.storage.get(key))
    return h.hexdigest()


def ids(c):
    return sorted(e.id for e in c.anomaly_store.query(limit=10**6).items)


# ingestor ------------------------------------------------------------------


def test_ingestor_writes_every_record_once(settings):
    c = Components(settings)
    report = ingestor_run(settings, c)
    generated = simgen.generate(SMALL)
    keys = c.storage.list("raw/")
    assert all(RAW_KEY.fullmatch(k) for k in keys)
    assert sorted(report.output_keys) == keys
    lines = sum(c.storage.get(k).count(b"\n") for k in keys)
    assert lines == report.records_in == report.records_out == len(generated.records)
    assert {k.split("/")[2] for k in keys} == set(DATES)

    again = ingestor_run(settings, c)
    assert again.records_in == 0 and again.output_keys == []
    assert c.storage.list("raw/") == keys
    assert again.runs_total == 2


def test_ingestor_cursor_survives_restart(settings):
    ingestor_run(settings)
    report = ingestor_run(settings)
    assert report.records_in == 0


# processor -----------------------------------------------------------------


def test_processor_empty_partition(settings):
    report = processor_run(settings, "2030-01-01")
    assert (report.records_in, report.records_out, report.output_keys) == (0, 0, [])


def test_processor_rejects_and_tallies(settings):
    c = Components(settings)
    good = [AisRecord("244010001", 1_704_067_200_000 + i * 60_000, 52.0, 4.0, 12.0, 90.0, "x") for i in range(4)]
    bad = AisRecord("244010002", 1_704_067_200_000, 91.0, 4.0, 12.0, 90.0, "x")
    c.storage.put("raw/x/2024-01-01/batch-1-0000.ndjson", to_ndjson(record_to_doc(r) for r in good + [bad]))
    c.storage.put("raw/x/2024-01-01/batch-1-0001.ndjson", b'{"mmsi": 1}\n' + to_ndjson([record_to_doc(good[0])]))
    report = processor_run(settings, "2024-01-01", c)
    assert report.records_in == 7
    assert report.records_out == 4
    assert report.rejected == {"lat_range": 1, "malformed": 1}
    assert report.records_in >= report.records_out


def test_processor_rerun_is_byte_identical(settings):
    c = Components(settings)
    ingestor_run(settings, c)
    processor_run(settings, DATES[0], c)
    before = lake_digest(c, "processed/")
    keys = c.storage.list("processed/")
    processor_run(settings, DATES[0], c)
    assert lake_digest(c, "processed/") == before
    assert c.storage.list("processed/") == keys


def test_processor_unreadable_key_names_it(settings):
    c = Components(settings)
    c.storage.put("raw/x/2024-01-01/batch-1-0000.ndjson", b"\xff\xfe not json\n")
    with pytest.raises(ServiceFailed, match="batch-1-0000"):
        processor_run(settings, "2024-01-01", c)


# loader --------------------------------------------------------------------


def test_loader_publishes_one_request_per_vessel(settings):
    c = Components(settings)
    ingestor_run(settings, c)
    processor_run(settings, DATES[0], c)
    report = loader_run(settings, DATES[0], c)
    assert report.published_count == SMALL.n_vessels
    assert c._queue.depth(DETECTION_REQUESTS_TOPIC) == (SMALL.n_vessels, 0)
    count = c.warehouse.count_points()

    again = loader_run(settings, DATES[0], c)
    assert again.records_out == 0
    assert c.warehouse.count_points() == count
    assert c._queue.depth(DETECTION_REQUESTS_TOPIC) == (2 * SMALL.n_vessels, 0)

    env = c.consumer.consume(DETECTION_REQUESTS_TOPIC)
    payload = env.payload
    assert set(payload) == {"mmsi", "window_start_ms", "window_end_ms", "partition_date"}
    track = c.warehouse.query_track(payload["mmsi"], 0, 2**62)
    day = [p.ts_ms for p in track if p.ts_ms < payload["window_end_ms"] + 1]
    assert payload["window_start_ms"] == min(day)


def test_loader_empty_partition(settings):
    c = Components(settings)
    assert loader_run(settings, "2030-01-01", c).published_count == 0
    assert c._queue.depth(DETECTION_REQUESTS_TOPIC) == (0, 0)


# trainer -------------------------------------------------------------------


def test_trainer_on_empty_warehouse(settings):
    c = Components(settings)
    report = trainer_run(settings, c)
    assert report.model_version == "v0001"
    assert report.warnings
    model, _ = c.registry.load_latest("speed_stats")
    assert dict(model.per_vessel) == {}
    assert trainer_run(settings, c).model_version == "v0002"


def test_trainer_fits_per_vessel(tmp_path):
    from seawatch.core import TrackPoint, VesselClass

    settings = make_settings(tmp_path, detection={"min_points_per_vessel": 3})
    c = Components(settings)
    c.warehouse.upsert_vessel("244010001", VesselClass("tanker", 20.0))
    c.warehouse.upsert_track_points(
        [TrackPoint("244010001", t, 52.0, 4.0, s, 0.0) for t, s in ((1, 8.0), (2, 10.0), (3, 12.0))]
    )
    trainer_run(settings, c)
    model, _ = c.registry.load_latest("speed_stats")
    stats = model.per_vessel["244010001"]
    assert (stats.mu_knots, stats.n_points) == (10.0, 3)
    assert stats.sigma_knots == pytest.approx(1.63299, abs=1e-5)


# detector ------------------------------------------------------------------


def test_detector_on_empty_warehouse_falls_back(settings):
    c = Components(settings)
    report = detector_batch_run(settings, components=c)
    assert report.records_out == 0 and report.events_by_kind == {}
    assert report.warnings and c.metrics.value("og_detector_model_fallbacks_total") == 1


def test_detector_batch_is_idempotent(settings):
    c = run_pipeline(settings)
    first = detector_batch_run(settings, components=c)
    assert first.events_by_kind == {"ais_gap": 1, "position_jump": 1, "speed_violation": 1}
    count = c.anomaly_store.count()
    detector_batch_run(settings, components=c)
    assert c.anomaly_store.count() == count == 3


def test_service_idles_without_messages(settings):
    report = detector_service_loop(settings, threading.Event(), stop_when_idle_ms=50)
    assert report.records_out == 0


def test_service_stops_on_signal(settings):
    stop = threading.Event()
    t = threading.Thread(target=detector_service_loop, args=(settings, stop))
    t.start()
    stop.set()
    t.join(timeout=5)
    assert not t.is_alive()


def test_modes_agree(tmp_path):
    batch = run_pipeline(make_settings(tmp_path / "a"))
    detector_batch_run(batch.settings, components=batch)
    service = run_pipeline(make_settings(tmp_path / "b"))
    detector_service_loop(service.settings, threading.Event(), service, stop_when_idle_ms=200)
    assert ids(batch) == ids(service)
    assert len(ids(batch)) == 3


def test_poison_message_is_acked_and_counted(settings):
    c = Components(settings)
    c.producer.publish(MessageEnvelope(DETECTION_REQUESTS_TOPIC, "x", {"garbage": True}, 0))
    report = detector_service_loop(settings, threading.Event(), c, stop_when_idle_ms=100)
    assert c.metrics.value("og_poison_messages_total") == 1
    assert c._queue.depth(DETECTION_REQUESTS_TOPIC) == (0, 0)
    assert report.warnings


def test_failed_message_is_redelivered(tmp_path):
    reference = run_pipeline(make_settings(tmp_path / "ref"))
    detector_service_loop(reference.settings, threading.Event(), reference, stop_when_idle_ms=200)

    c = run_pipeline(make_settings(tmp_path / "crash"))
    real = c.warehouse.query_track
    failures = []

    def flaky(mmsi, lo, hi):
        if not failures:
            failures.append(mmsi)
            raise RuntimeError("simulated crash mid-message")
        return real(mmsi, lo, hi)

    c.warehouse.query_track = flaky
    detector_service_loop(c.settings, threading.Event(), c, stop_when_idle_ms=200)
    assert failures and c.metrics.value("og_detector_failures_total") == 1
    assert ids(c) == ids(reference)


def test_rerun_everything_is_idempotent(settings):
    c = run_pipeline(settings)
    detector_batch_run(settings, components=c)
    digest, points, events = lake_digest(c, "processed/"), c.warehouse.count_points(), c.anomaly_store.count()
    for d in DATES:
        processor_run(settings, d, c)
        loader_run(settings, d, c)
    detector_batch_run(settings, components=c)
    detector_service_loop(settings, threading.Event(), c, stop_when_idle_ms=200)
    assert (lake_digest(c, "processed/"), c.warehouse.count_points(), c.anomaly_store.count()) == (digest, points, events)


def test_report_json_shape(settings):
    doc = ingestor_run(settings).to_dict()
    json.dumps(doc)
    assert {"service", "records_in", "records_out", "rejected", "duration_ms"} <= set(doc)
