"""Anomaly Detector, as a scheduled batch pipeline or a broker-driven service."""

from __future__ import annotations

import argparse
import logging
import signal
import threading
import time
from collections import Counter
from typing import Sequence

from seawatch.core import SpeedStats, SpeedStatsModel
from seawatch.ports import DETECTION_REQUESTS_TOPIC, DetectionRequest, Model, NotFound, UnknownDelivery
from seawatch.services.cli import ServiceFailed, base_parser, run_service
from seawatch.services.report import RunReport
from seawatch.services.wiring import Components

log = logging.getLogger(__name__)

VESSEL_PAGE = 1000
MAX_TS_MS = 2**63 - 1


def load_model(c: Components, report: RunReport) -> Model:
    try:
        stats, version = c.registry.load_latest(c.model_name)
        report.model_version = version
    except NotFound:
        mu, sigma = c.settings.fallback_speed_stats()
        stats = SpeedStatsModel(defaults=SpeedStats(mu, sigma))
        report.warnings.append(f"no model {c.model_name!r} in registry; using fleet defaults")
        c.metrics.inc("og_detector_model_fallbacks_total")
        log.warning("no trained model found, detecting with fleet defaults")
    return c.model_factory(stats)


def _vessels(c: Components):
    offset = 0
    while True:
        page = c.warehouse.list_vessels(VESSEL_PAGE, offset)
        yield from (mmsi for mmsi, _ in page.items)
        offset += len(page.items)
        if not page.items or offset >= page.total:
            return


def _record_events(c: Components, report: RunReport, events) -> None:
    c.anomaly_store.upsert(events)
    kinds = Counter(e.kind.value for e in events)
    for kind, n in kinds.items():
        report.events_by_kind[kind] = report.events_by_kind.get(kind, 0) + n
        c.metrics.inc("og_anomalies_detected_total", {"kind": kind}, n)
    report.records_out += len(events)


def detector_batch_run(
    settings,
    window: tuple[int, int] = (0, MAX_TS_MS),
    components: Components | None = None,
) -> RunReport:
    c = components or Components(settings)
    started = time.monotonic()
    report = RunReport("detector_batch")
    c.metrics.inc("og_detector_runs_total", {"mode": "batch"})
    try:
        model = load_model(c, report)
        for mmsi in _vessels(c):
            track = c.warehouse.query_track(mmsi, window[0], window[1])
            report.records_in += len(track)
            _record_events(c, report, model.predict(track))
    except Exception as exc:
        report.duration_ms = int((time.monotonic() - started) * 1000)
        raise ServiceFailed(f"detector aborted: {exc}", report) from exc
    report.events_by_kind = dict(sorted(report.events_by_kind.items()))
    report.duration_ms = int((time.monotonic() - started) * 1000)
    report.runs_total = int(c.metrics.value("og_detector_runs_total", {"mode": "batch"}))
    return report


def detector_service_loop(
    settings,
    shutdown_signal: threading.Event,
    components: Components | None = None,
    stop_when_idle_ms: int | None = None,
) -> RunReport:
    """Consume detection requests until ``shutdown_signal`` is set.

    With ``stop_when_idle_ms`` the loop also ends once no message has
    arrived for that long, which is how a caller drains the queue.
    """
    c = components or Components(settings)
    started = time.monotonic()
    report = RunReport("detector_service")
    c.metrics.inc("og_detector_runs_total", {"mode": "service"})
    poll_ms = int(c.settings.get("detector", "poll_ms", 200))
    if stop_when_idle_ms is not None:
        poll_ms = min(poll_ms, stop_when_idle_ms)
    model = load_model(c, report)
    last_message = time.monotonic()
    while not shutdown_signal.is_set():
        envelope = c.consumer.consume(DETECTION_REQUESTS_TOPIC, poll_ms)
        if envelope is None:
            if stop_when_idle_ms is not None and (time.monotonic() - last_message) * 1000 >= stop_when_idle_ms:
                break
            continue
        last_message = time.monotonic()
        try:
            request = DetectionRequest.from_payload(envelope.payload)
        except (KeyError, TypeError, ValueError) as exc:
            log.warning("poison message %s: %s", envelope.id, exc)
            c.metrics.inc("og_poison_messages_total")
            report.warnings.append(f"poison message {envelope.id}")
            try:
                c.consumer.ack(envelope.id)
            except UnknownDelivery:
                pass
            continue
        try:
            # Detect over the whole stored track so events crossing a partition
            # boundary come out exactly as in batch mode; keep those touching the window.
            track = c.warehouse.query_track(request.mmsi, 0, MAX_TS_MS)
            events = [
                e
                for e in model.predict(track)
                if e.ts_end_ms >= request.window_start_ms and e.ts_start_ms <= request.window_end_ms
            ]
            _record_events(c, report, events)
        except Exception:
            log.exception("detection failed for %s; message will be redelivered", request.mmsi)
            c.metrics.inc("og_detector_failures_total")
            c.consumer.nack(envelope.id)
            continue
        report.records_in += len(track)
        report.published_count += 1
        try:
            c.consumer.ack(envelope.id)
        except UnknownDelivery:
            # visibility lapsed mid-processing; the redelivery is absorbed by id idempotence
            log.warning("late ack for %s", envelope.id)
    report.events_by_kind = dict(sorted(report.events_by_kind.items()))
    report.duration_ms = int((time.monotonic() - started) * 1000)
    report.runs_total = int(c.metrics.value("og_detector_runs_total", {"mode": "service"}))
    return report


def _run(settings, args: argparse.Namespace) -> RunReport:
    if args.serve:
        stop = threading.Event()
        for sig in (signal.SIGINT, signal.SIGTERM):
            signal.signal(sig, lambda *_: stop.set())
        return detector_service_loop(settings, stop, stop_when_idle_ms=args.idle_stop_ms)
    return detector_batch_run(settings, (args.from_ms, args.to_ms))


def main(argv: Sequence[str] | None = None) -> int:
    parser = base_parser("seawatch-detector", "Detect anomalies in warehouse tracks.")
    parser.add_argument("--from-ms", type=int, default=0)
    parser.add_argument("--to-ms", type=int, default=MAX_TS_MS)
    parser.add_argument("--serve", action="store_true", help="consume detection requests from the broker")
    parser.add_argument("--idle-stop-ms", type=int, default=None, help="with --serve, stop after this much idle time")
    return run_service(parser, argv, _run)
