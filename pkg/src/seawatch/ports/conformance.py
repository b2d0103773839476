"""Contract suites shared by every adapter of a port.

Each suite is a tuple of check functions that take a zero-argument factory
and raise ``AssertionError`` on violation. They only touch the public
contract, so a new adapter is conformant exactly when it passes the same
suite as the existing ones. Factories that need time control return a
clock exposing ``advance(ms)`` alongside the adapter.
"""

from __future__ import annotations

import http.client
import json
from typing import Any, Callable

from seawatch.core import (
    AisRecord,
    AnomalyEvent,
    AnomalyKind,
    SpeedStats,
    SpeedStatsModel,
    TrackPoint,
    VesselClass,
)
from seawatch.ports.contracts import Route
from seawatch.ports.errors import (
    ConfigError,
    InvalidCursor,
    InvalidMetric,
    InvalidPath,
    NotFound,
    UnknownDelivery,
)
from seawatch.ports.messages import MessageEnvelope

Factory = Callable[[], Any]


def _raises(exc: type[BaseException], fn: Callable[[], Any]) -> BaseException:
    try:
        fn()
    except exc as caught:
        return caught
    raise AssertionError(f"expected {exc.__name__}")


def _point(mmsi: str, ts: int, sog: float = 10.0) -> TrackPoint:
    return TrackPoint(mmsi, ts, 52.0, 4.0 + ts / 1e7, sog, 90.0)


def _event(kind: AnomalyKind, mmsi: str, start: int, end: int) -> AnomalyEvent:
    return AnomalyEvent.create(kind, mmsi, start, end, 1.5, "fixture")


# storage -------------------------------------------------------------------


def check_storage_roundtrip(make: Factory) -> None:
    s = make()
    s.put("a/b", b"x\x00y")
    assert s.get("a/b") == b"x\x00y"
    assert s.exists("a/b")
    assert not s.exists("a/c")


def check_storage_overwrite(make: Factory) -> None:
    s = make()
    s.put("k", b"old")
    s.put("k", b"new")
    assert s.get("k") == b"new"
    assert s.list("") == ["k"]


def check_storage_list_prefix(make: Factory) -> None:
    s = make()
    for key in ("raw/2", "other/3", "raw/1", "raw/sub/4"):
        s.put(key, b"")
    assert s.list("raw/") == ["raw/1", "raw/2", "raw/sub/4"]
    assert s.list("") == ["other/3", "raw/1", "raw/2", "raw/sub/4"]


def check_storage_missing(make: Factory) -> None:
    s = make()
    _raises(NotFound, lambda: s.get("missing"))
    _raises(NotFound, lambda: s.list("nothing/"))


def check_storage_invalid_paths(make: Factory) -> None:
    s = make()
    for bad in ("", "/abs", "a/../b", "..", "a//b", "a/"):
        _raises(InvalidPath, lambda bad=bad: s.put(bad, b""))
        _raises(InvalidPath, lambda bad=bad: s.get(bad))
    _raises(InvalidPath, lambda: s.list("../"))


STORAGE_SUITE = (
    check_storage_roundtrip,
    check_storage_overwrite,
    check_storage_list_prefix,
    check_storage_missing,
    check_storage_invalid_paths,
)


# broker --------------------------------------------------------------------


def _env(key: str = "244010001", n: int = 0, topic: str = "t") -> MessageEnvelope:
    return MessageEnvelope(topic=topic, key=key, payload={"n": n}, produced_at_ms=0)


def check_broker_ack(make: Factory) -> None:
    producer, consumer, _ = make()
    e = _env()
    producer.publish(e)
    got = consumer.consume("t")
    assert got == e
    consumer.ack(got.id)
    assert consumer.consume("t") is None


def check_broker_nack_redelivers(make: Factory) -> None:
    producer, consumer, _ = make()
    e = _env()
    producer.publish(e)
    consumer.nack(consumer.consume("t").id)
    assert consumer.consume("t") == e


def check_broker_key_fifo(make: Factory) -> None:
    producer, consumer, _ = make()
    e1, e2 = _env(n=1), _env(n=2)
    producer.publish(e1)
    producer.publish(e2)
    first = consumer.consume("t")
    assert first == e1
    # e2 shares e1's key, so it waits until e1 is settled
    assert consumer.consume("t") is None
    consumer.ack(first.id)
    assert consumer.consume("t") == e2


def check_broker_visibility_timeout(make: Factory) -> None:
    producer, consumer, clock = make()
    e = _env()
    producer.publish(e)
    assert consumer.consume("t") == e
    clock.advance(4999)
    assert consumer.consume("t") is None
    clock.advance(1)
    assert consumer.consume("t") == e


def check_broker_unknown_delivery(make: Factory) -> None:
    producer, consumer, _ = make()
    _raises(UnknownDelivery, lambda: consumer.ack("nope"))
    _raises(UnknownDelivery, lambda: consumer.nack("nope"))
    producer.publish(_env())
    got = consumer.consume("t")
    consumer.ack(got.id)
    _raises(UnknownDelivery, lambda: consumer.ack(got.id))


def check_broker_topics_isolated(make: Factory) -> None:
    producer, consumer, _ = make()
    producer.publish(_env(topic="a"))
    assert consumer.consume("b") is None
    assert consumer.consume("a") is not None


BROKER_SUITE = (
    check_broker_ack,
    check_broker_nack_redelivers,
    check_broker_key_fifo,
    check_broker_visibility_timeout,
    check_broker_unknown_delivery,
    check_broker_topics_isolated,
)


# cache ---------------------------------------------------------------------


def check_cache_hit(make: Factory) -> None:
    cache, _ = make()
    cache.set("k", {"v": 1}, 60000)
    assert cache.get("k") == {"v": 1}
    cache.set("k", "other", 60000)
    assert cache.get("k") == "other"


def check_cache_miss(make: Factory) -> None:
    cache, _ = make()
    assert cache.get("unset") is None


def check_cache_expiry(make: Factory) -> None:
    cache, clock = make()
    cache.set("k", "v", 1)
    clock.advance(2)
    assert cache.get("k") is None


CACHE_SUITE = (check_cache_hit, check_cache_miss, check_cache_expiry)


# warehouse -----------------------------------------------------------------


def check_warehouse_query(make: Factory) -> None:
    w = make()
    pts = [_point("244010001", t) for t in (3000, 1000, 2000)]
    w.upsert_vessel("244010001", VesselClass("cargo", 25.0))
    w.upsert_track_points(pts)
    got = w.query_track("244010001", 0, 10_000)
    assert [p.ts_ms for p in got] == [1000, 2000, 3000]
    assert got[0] == pts[1]
    assert [p.ts_ms for p in w.query_track("244010001", 1000, 2000)] == [1000, 2000]


def check_warehouse_idempotent(make: Factory) -> None:
    w = make()
    pts = [_point("244010001", t) for t in (1000, 2000, 3000)]
    assert w.upsert_track_points(pts) == 3
    assert w.upsert_track_points(pts) == 0
    assert w.count_points() == 3
    changed = _point("244010001", 2000, sog=11.0)
    assert w.upsert_track_points([changed]) == 1
    assert w.count_points() == 3
    assert w.query_track("244010001", 2000, 2000) == [changed]


def check_warehouse_empty_results(make: Factory) -> None:
    w = make()
    w.upsert_track_points([_point("244010001", 1000)])
    assert w.query_track("244010001", 5000, 9000) == []
    assert w.query_track("999999999", 0, 10**13) == []
    assert w.get_vessel("999999999") is None


def check_warehouse_list_vessels(make: Factory) -> None:
    w = make()
    for mmsi in ("244010003", "244010001", "244010002"):
        w.upsert_vessel(mmsi, VesselClass("tanker", 20.0))
    w.upsert_vessel("244010002", VesselClass("fishing", 15.0))
    page = w.list_vessels(2, 1)
    assert page.total == 3 and page.limit == 2 and page.offset == 1
    assert [m for m, _ in page.items] == ["244010002", "244010003"]
    assert page.items[0][1] == VesselClass("fishing", 15.0)
    assert w.get_vessel("244010001") == VesselClass("tanker", 20.0)
    assert w.list_vessels(10, 5).items == []


WAREHOUSE_SUITE = (
    check_warehouse_query,
    check_warehouse_idempotent,
    check_warehouse_empty_results,
    check_warehouse_list_vessels,
)


# anomaly store -------------------------------------------------------------


def check_anomaly_store_roundtrip(make: Factory) -> None:
    s = make()
    e = _event(AnomalyKind.AIS_GAP, "244010001", 0, 28_800_000)
    s.upsert([e])
    page = s.query(mmsi="244010001")
    assert page.items == [e] and page.total == 1
    assert s.query(mmsi="244010002").items == []


def check_anomaly_store_idempotent(make: Factory) -> None:
    s = make()
    e = _event(AnomalyKind.AIS_GAP, "244010001", 0, 28_800_000)
    assert s.upsert([e]) == 1
    assert s.upsert([e]) == 0
    assert s.count() == 1


def check_anomaly_store_filters(make: Factory) -> None:
    s = make()
    gap = _event(AnomalyKind.AIS_GAP, "244010001", 5000, 9000)
    speed = _event(AnomalyKind.SPEED_VIOLATION, "244010001", 1000, 1000)
    jump = _event(AnomalyKind.POSITION_JUMP, "244010002", 1000, 2000)
    s.upsert([gap, speed, jump])
    assert s.query(kind=AnomalyKind.AIS_GAP).items == [gap]
    everything = s.query()
    assert everything.total == 3
    first_two = sorted([speed, jump], key=lambda e: e.id)
    assert everything.items == [*first_two, gap]
    assert s.query(from_ms=2000, to_ms=4000).items == [jump]
    assert s.query(from_ms=8000).items == [gap]
    assert s.query(to_ms=1000).total == 2
    page = s.query(limit=1, offset=1)
    assert page.items == [first_two[1]] and page.total == 3


ANOMALY_STORE_SUITE = (
    check_anomaly_store_roundtrip,
    check_anomaly_store_idempotent,
    check_anomaly_store_filters,
)


# model registry ------------------------------------------------------------


def _stats_model(mu: float) -> SpeedStatsModel:
    return SpeedStatsModel(
        defaults=SpeedStats(mu, 2.0, 30),
        per_vessel={"244010001": SpeedStats(10.0, 1.6329931618554521, 3)},
        created_at_ms=1234,
    )


def check_registry_versions(make: Factory) -> None:
    r = make()
    assert r.save("speed_stats", _stats_model(1.0)) == "v0001"
    assert r.save("speed_stats", _stats_model(2.0)) == "v0002"
    model, version = r.load_latest("speed_stats")
    assert version == "v0002"
    assert model.defaults.mu_knots == 2.0 and model.version == "v0002"


def check_registry_missing(make: Factory) -> None:
    r = make()
    _raises(NotFound, lambda: r.load_latest("absent"))
    r.save("speed_stats", _stats_model(1.0))
    _raises(NotFound, lambda: r.load("speed_stats", "v0009"))


def check_registry_roundtrip(make: Factory) -> None:
    r = make()
    m = _stats_model(3.0)
    r.save("speed_stats", m)
    got = r.load("speed_stats", "v0001")
    assert got.defaults == m.defaults
    assert dict(got.per_vessel) == dict(m.per_vessel)
    assert got.created_at_ms == m.created_at_ms
    assert got.version == "v0001"


REGISTRY_SUITE = (check_registry_versions, check_registry_missing, check_registry_roundtrip)


# data retrieval ------------------------------------------------------------


def _drain(source, cursor=None) -> list[AisRecord]:
    out: list[AisRecord] = []
    while True:
        batch, cursor = source.fetch_batch(cursor)
        out.extend(batch)
        if cursor is None:
            return out


def check_retrieval_drains_declared(make: Factory) -> None:
    source, expected = make()
    assert _drain(source) == list(expected)


def check_retrieval_exhausted(make: Factory) -> None:
    source, _ = make()
    cursor, last = None, None
    while True:
        batch, cursor = source.fetch_batch(cursor)
        if cursor is None:
            break
        last = cursor
    assert batch == []
    assert source.fetch_batch(last) == ([], None)


def check_retrieval_resumable(make: Factory) -> None:
    source, expected = make()
    first, cursor = source.fetch_batch(None)
    assert cursor is not None
    rest = _drain(source, cursor)
    assert first + rest == list(expected)
    assert _drain(source, cursor) == rest


def check_retrieval_foreign_cursor(make: Factory) -> None:
    source, _ = make()
    _raises(InvalidCursor, lambda: source.fetch_batch("not-a-cursor"))


RETRIEVAL_SUITE = (
    check_retrieval_drains_declared,
    check_retrieval_exhausted,
    check_retrieval_resumable,
    check_retrieval_foreign_cursor,
)


# metrics -------------------------------------------------------------------


def check_metrics_counter(make: Factory) -> None:
    m = make()
    m.inc("og_ingested_records_total", {}, 3)
    m.inc("og_ingested_records_total", {}, 3)
    assert "og_ingested_records_total 6\n" in m.render()
    assert m.value("og_ingested_records_total") == 6


def check_metrics_empty(make: Factory) -> None:
    assert make().render() == ""


def check_metrics_invalid(make: Factory) -> None:
    m = make()
    _raises(InvalidMetric, lambda: m.inc("og_x_total", {}, -1))
    _raises(InvalidMetric, lambda: m.inc("Bad-Name", {}, 1))
    _raises(InvalidMetric, lambda: m.observe("9lives", {}, 1.0))


def check_metrics_render_order(make: Factory) -> None:
    m = make()
    m.inc("og_b_total", {"kind": "z"}, 1)
    m.inc("og_b_total", {"kind": "a"}, 2)
    m.observe("og_a_gauge", {}, 1.5)
    m.observe("og_a_gauge", {}, 0.5)
    assert m.render() == (
        'og_a_gauge 0.5\nog_b_total{kind="a"} 2\nog_b_total{kind="z"} 1\n'
    )


METRICS_SUITE = (
    check_metrics_counter,
    check_metrics_empty,
    check_metrics_invalid,
    check_metrics_render_order,
)


# settings ------------------------------------------------------------------


def check_settings_env_override(make: Factory) -> None:
    provider, write = make()
    path = write(json.dumps({"storage": {"kind": "fs"}}))
    s = provider.load(path, {"OG_STORAGE__KIND": "memory"})
    assert s.kind("storage") == "memory"


def check_settings_defaults(make: Factory) -> None:
    provider, write = make()
    s = provider.load(write("{}"), {})
    assert s.detection_config().gap_threshold_s == 21600


def check_settings_unknown_kind(make: Factory) -> None:
    provider, write = make()
    path = write(json.dumps({"storage": {"kind": "tape"}}))
    err = _raises(ConfigError, lambda: provider.load(path, {}))
    assert str(err) == "unknown adapter kind: storage.kind"


def check_settings_bad_file(make: Factory) -> None:
    provider, write = make()
    err = _raises(ConfigError, lambda: provider.load(write('{\n  "storage": {\n    kind: 1\n}'), {}))
    assert "line 3" in str(err)


SETTINGS_SUITE = (
    check_settings_env_override,
    check_settings_defaults,
    check_settings_unknown_kind,
    check_settings_bad_file,
)


# data processor / data loader ---------------------------------------------


def check_processor_split(make: Factory) -> None:
    p = make()
    good = AisRecord("244010001", 1000, 52.0, 4.0, 12.0, 90.0, "s")
    bad = AisRecord("244010001", 2000, 91.0, 4.0, 12.0, 90.0, "s")
    result = p.process([good, bad, AisRecord("244010002", 1000, 52.0, 4.0, 12.0, 90.0, "s")])
    assert len(result.accepted) == 2
    assert result.rejections == [(bad, "lat_range")]
    assert p.process([]).accepted == [] and p.process([]).rejections == []


def check_loader_idempotent(make: Factory) -> None:
    loader, warehouse = make()
    pts = [_point("244010001", t) for t in range(1000, 6000, 1000)]
    loader.load(pts)
    report = loader.load(pts)
    assert report.points_in == 5 and report.points_written == 0
    assert warehouse.count_points() == 5
    assert warehouse.get_vessel("244010001") is not None


PROCESSOR_SUITE = (check_processor_split,)
LOADER_SUITE = (check_loader_idempotent,)


# web -----------------------------------------------------------------------


def _http_get(address, path: str) -> tuple[int, bytes]:
    conn = http.client.HTTPConnection(address[0], address[1], timeout=5)
    try:
        conn.request("GET", path)
        resp = conn.getresponse()
        return resp.status, resp.read()
    finally:
        conn.close()


def check_web_routes(make: Factory) -> None:
    web = make()
    routes = [
        Route("/health", lambda params, query: {"status": "ok"}),
        Route("/echo/{name}", lambda params, query: {"name": params["name"], "q": dict(query)}),
    ]
    handle = web.bind(routes, "127.0.0.1:0")
    try:
        status, body = _http_get(handle.address, "/health")
        assert status == 200 and json.loads(body) == {"status": "ok"}
        status, body = _http_get(handle.address, "/echo/abc?x=1")
        assert status == 200 and json.loads(body) == {"name": "abc", "q": {"x": "1"}}
        assert _http_get(handle.address, "/nowhere")[0] == 404
    finally:
        web.shutdown(handle)


def check_web_shutdown(make: Factory) -> None:
    web = make()
    handle = web.bind([Route("/health", lambda p, q: {"status": "ok"})], "127.0.0.1:0")
    web.shutdown(handle)
    _raises(ConnectionRefusedError, lambda: _http_get(handle.address, "/health"))


WEB_SUITE = (check_web_routes, check_web_shutdown)


SUITES = {
    "storage": STORAGE_SUITE,
    "broker": BROKER_SUITE,
    "cache": CACHE_SUITE,
    "warehouse": WAREHOUSE_SUITE,
    "anomaly_store": ANOMALY_STORE_SUITE,
    "model_registry": REGISTRY_SUITE,
    "data_retrieval": RETRIEVAL_SUITE,
    "metrics": METRICS_SUITE,
    "settings": SETTINGS_SUITE,
    "data_processor": PROCESSOR_SUITE,
    "data_loader": LOADER_SUITE,
    "web": WEB_SUITE,
}
