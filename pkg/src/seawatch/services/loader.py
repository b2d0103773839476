"""Data Loader: moves one processed day into the warehouse and requests detection."""

from __future__ import annotations

import logging
import time
from typing import Sequence

from seawatch.ports import DETECTION_REQUESTS_TOPIC, DetectionRequest, MessageEnvelope, NotFound
from seawatch.ports.codec import iter_ndjson, point_from_doc, processed_prefix
from seawatch.services.cli import ServiceFailed, base_parser, date_arg, run_service
from seawatch.services.report import RunReport
from seawatch.services.wiring import Components

log = logging.getLogger(__name__)


def loader_run(settings, date: str, components: Components | None = None) -> RunReport:
    c = components or Components(settings)
    started = time.monotonic()
    report = RunReport("loader")
    c.metrics.inc("og_loader_runs_total")
    try:
        try:
            keys = c.storage.list(processed_prefix(date))
        except NotFound:
            keys = []
        points = []
        for key in keys:
            points.extend(point_from_doc(doc) for _, doc in iter_ndjson(c.storage.get(key), key))
        report.records_in = len(points)
        load = c.loader.load(points)
        report.records_out = load.points_written
        windows: dict[str, list[int]] = {}
        for p in points:
            w = windows.setdefault(p.mmsi, [p.ts_ms, p.ts_ms])
            w[0] = min(w[0], p.ts_ms)
            w[1] = max(w[1], p.ts_ms)
        for mmsi in sorted(windows):
            request = DetectionRequest(mmsi, windows[mmsi][0], windows[mmsi][1], date)
            c.producer.publish(
                MessageEnvelope(
                    topic=DETECTION_REQUESTS_TOPIC,
                    key=mmsi,
                    payload=request.to_payload(),
                    produced_at_ms=c.clock.now_ms(),
                )
            )
            report.published_count += 1
    except Exception as exc:
        report.duration_ms = int((time.monotonic() - started) * 1000)
        raise ServiceFailed(f"loader aborted: {exc}", report) from exc
    c.metrics.inc("og_loaded_points_total", {}, report.records_out)
    c.metrics.inc("og_detection_requests_published_total", {}, report.published_count)
    report.duration_ms = int((time.monotonic() - started) * 1000)
    report.runs_total = int(c.metrics.value("og_loader_runs_total"))
    log.info("%s: loaded %d points, published %d requests", date, len(points), report.published_count)
    return report


def main(argv: Sequence[str] | None = None) -> int:
    parser = base_parser("seawatch-loader", "Load one processed partition into the warehouse.")
    parser.add_argument("--date", required=True, type=date_arg, help="partition date, YYYY-MM-DD")
    return run_service(parser, argv, lambda settings, args: loader_run(settings, args.date))
