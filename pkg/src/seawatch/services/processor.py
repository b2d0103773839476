"""Data Processor: cleans one day of the raw lake into the processed lake."""

from __future__ import annotations

import logging
import time
from collections import Counter
from typing import Sequence

from seawatch.ports import NotFound
from seawatch.ports.codec import (
    is_raw_key_for_date,
    iter_ndjson,
    point_to_doc,
    processed_key,
    record_from_doc,
    to_ndjson,
)
from seawatch.services.cli import ServiceFailed, base_parser, date_arg, run_service
from seawatch.services.report import RunReport
from seawatch.services.wiring import Components

log = logging.getLogger(__name__)

PART_SIZE = 50_000


def processor_run(settings, date: str, components: Components | None = None) -> RunReport:
    c = components or Components(settings)
    started = time.monotonic()
    report = RunReport("processor")
    c.metrics.inc("og_processor_runs_total")
    rejected: Counter[str] = Counter()
    try:
        try:
            keys = [k for k in c.storage.list("raw/") if is_raw_key_for_date(k, date)]
        except NotFound:
            keys = []
        records = []
        for key in keys:
            try:
                data = c.storage.get(key)
                lines = list(iter_ndjson(data, key))
            except Exception as exc:
                raise RuntimeError(f"cannot read {key}: {exc}") from exc
            for _, doc in lines:
                report.records_in += 1
                try:
                    records.append(record_from_doc(doc))
                except (TypeError, ValueError):
                    rejected["malformed"] += 1
        result = c.processor.process(records)
        rejected.update(reason for _, reason in result.rejections)
        accepted = result.accepted
        for seq, start in enumerate(range(0, len(accepted), PART_SIZE)):
            part = accepted[start : start + PART_SIZE]
            # key named by content, so a rerun overwrites the same objects
            key = processed_key(date, min(p.ts_ms for p in part), seq)
            c.storage.put(key, to_ndjson(point_to_doc(p) for p in part))
            report.output_keys.append(key)
        report.records_out = len(accepted)
        report.rejected = dict(sorted(rejected.items()))
    except Exception as exc:
        report.duration_ms = int((time.monotonic() - started) * 1000)
        raise ServiceFailed(f"processor aborted: {exc}", report) from exc
    for reason, n in rejected.items():
        c.metrics.inc("og_rejected_records_total", {"reason": reason}, n)
    c.metrics.inc("og_processed_records_total", {}, report.records_out)
    report.duration_ms = int((time.monotonic() - started) * 1000)
    report.runs_total = int(c.metrics.value("og_processor_runs_total"))
    log.info("%s: %d in, %d out, %d rejected", date, report.records_in, report.records_out, report.rejected_total)
    return report


def main(argv: Sequence[str] | None = None) -> int:
    parser = base_parser("seawatch-processor", "Validate and deduplicate one raw partition.")
    parser.add_argument("--date", required=True, type=date_arg, help="partition date, YYYY-MM-DD")
    return run_service(parser, argv, lambda settings, args: processor_run(settings, args.date))
