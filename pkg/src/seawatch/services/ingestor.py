"""Data Ingestor: drains a data source into the raw data lake."""

from __future__ import annotations

import json
import logging
import time
from collections import defaultdict
from typing import Sequence

from seawatch.ports import NotFound
from seawatch.ports.codec import raw_key, record_to_doc, to_ndjson, utc_date
from seawatch.services.cli import ServiceFailed, base_parser, run_service
from seawatch.services.report import RunReport
from seawatch.services.wiring import Components

log = logging.getLogger(__name__)


def _state_key(source_id: str) -> str:
    return f"state/ingestor/{source_id}.json"


def _partition_date(ts_ms: object) -> str:
    # raw records are unvalidated; junk timestamps land in the epoch partition
    if isinstance(ts_ms, int) and not isinstance(ts_ms, bool) and 0 < ts_ms < 253_402_300_800_000:
        return utc_date(ts_ms)
    return "1970-01-01"


def ingestor_run(settings, components: Components | None = None) -> RunReport:
    c = components or Components(settings)
    started = time.monotonic()
    report = RunReport("ingestor")
    c.metrics.inc("og_ingestor_runs_total")
    try:
        source = c.retrieval
        state_key = _state_key(source.source_id)
        try:
            cursor = json.loads(c.storage.get(state_key))["cursor"]
        except NotFound:
            cursor = None
        last_epoch, seq = None, 0
        while True:
            batch, next_cursor = source.fetch_batch(cursor)
            if next_cursor is None:
                break
            by_date = defaultdict(list)
            for r in batch:
                by_date[_partition_date(r.ts_ms)].append(r)
            for date in sorted(by_date):
                epoch = c.clock.now_ms()
                seq = seq + 1 if epoch == last_epoch else 0
                last_epoch = epoch
                key = raw_key(source.source_id, date, epoch, seq)
                c.storage.put(key, to_ndjson(record_to_doc(r) for r in by_date[date]))
                report.output_keys.append(key)
                report.records_out += len(by_date[date])
            report.records_in += len(batch)
            cursor = next_cursor
            # the cursor is saved after the data, so a crash re-ingests rather than loses
            c.storage.put(state_key, json.dumps({"cursor": cursor}).encode())
        c.metrics.inc("og_ingested_records_total", {}, report.records_out)
    except Exception as exc:
        report.duration_ms = int((time.monotonic() - started) * 1000)
        raise ServiceFailed(f"ingestor aborted: {exc}", report) from exc
    report.duration_ms = int((time.monotonic() - started) * 1000)
    report.runs_total = int(c.metrics.value("og_ingestor_runs_total"))
    log.info("ingested %d records into %d objects", report.records_out, len(report.output_keys))
    return report


def main(argv: Sequence[str] | None = None) -> int:
    parser = base_parser("seawatch-ingestor", "Drain the configured source into the raw lake.")
    return run_service(parser, argv, lambda settings, args: ingestor_run(settings))
