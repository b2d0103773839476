"""Continuous training: fits per-vessel speed statistics and registers them."""

from __future__ import annotations

import logging
import time
from typing import Sequence

from seawatch.core import fit_speed_stats
from seawatch.services.cli import ServiceFailed, base_parser, run_service
from seawatch.services.report import RunReport
from seawatch.services.wiring import Components

log = logging.getLogger(__name__)

MAX_TS_MS = 2**63 - 1


def trainer_run(settings, components: Components | None = None) -> RunReport:
    """Train and save a new model version; the version is ``report.model_version``."""
    c = components or Components(settings)
    started = time.monotonic()
    report = RunReport("trainer")
    c.metrics.inc("og_trainer_runs_total")
    try:
        sogs = {}
        offset = 0
        while True:
            page = c.warehouse.list_vessels(1000, offset)
            for mmsi, _ in page.items:
                sogs[mmsi] = [p.sog_knots for p in c.warehouse.query_track(mmsi, 0, MAX_TS_MS)]
            offset += len(page.items)
            if not page.items or offset >= page.total:
                break
        cfg = c.settings.detection_config()
        model = fit_speed_stats(
            sogs,
            cfg.min_points_per_vessel,
            c.settings.fallback_speed_stats(),
            created_at_ms=c.clock.now_ms(),
        )
        report.records_in = sum(len(v) for v in sogs.values())
        report.records_out = len(model.per_vessel)
        if not report.records_in:
            report.warnings.append("no training data; saved a defaults-only model")
        report.model_version = c.registry.save(c.model_name, model)
    except Exception as exc:
        report.duration_ms = int((time.monotonic() - started) * 1000)
        raise ServiceFailed(f"trainer aborted: {exc}", report) from exc
    report.duration_ms = int((time.monotonic() - started) * 1000)
    report.runs_total = int(c.metrics.value("og_trainer_runs_total"))
    log.info("saved %s %s with %d vessels", c.model_name, report.model_version, report.records_out)
    return report


def main(argv: Sequence[str] | None = None) -> int:
    parser = base_parser("seawatch-trainer", "Fit speed statistics from the warehouse.")
    return run_service(parser, argv, lambda settings, args: trainer_run(settings))
