"""End-to-end run of the whole data flow against a synthetic scenario."""

from __future__ import annotations

import http.client
import json
import logging
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal

from seawatch import simgen
from seawatch.core import AnomalyEvent
from seawatch.ports import Settings
from seawatch.ports.codec import canonical, event_from_doc, event_to_doc, record_to_doc, to_ndjson, utc_date
from seawatch.services import (
    Components,
    detector_batch_run,
    detector_service_loop,
    ingestor_run,
    loader_run,
    processor_run,
    start_api,
    trainer_run,
)
from seawatch.harness.scoring import MatchReport, score

log = logging.getLogger(__name__)

STORE_SECTIONS = ("storage", "warehouse", "anomaly_store", "model_registry")


class StageFailed(RuntimeError):
    def __init__(self, stage: str, message: str) -> None:
        super().__init__(f"stage {stage} failed: {message}")
        self.stage = stage


@dataclass
class E2EResult:
    report: MatchReport
    events: list[AnomalyEvent]
    mode: str
    adapters: str | None
    stages: dict[str, Any] = field(default_factory=dict)
    workdir: Path | None = None

    @property
    def exit_code(self) -> int:
        return 0 if self.report.perfect else 1

    @property
    def anomaly_ids(self) -> list[str]:
        return sorted(e.id for e in self.events)

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "adapters": self.adapters,
            "exit_code": self.exit_code,
            "report": self.report.to_dict(),
            "anomaly_ids": self.anomaly_ids,
            "stages": self.stages,
        }


def e2e_settings(settings: Settings, workdir: Path, adapters: str | None) -> Settings:
    override: dict[str, Any] = {"runtime": {"workdir": str(workdir)}}
    if adapters is not None:
        for section in STORE_SECTIONS:
            override[section] = {"kind": adapters}
    return settings.with_overrides(override)


def fetch_anomalies(address: tuple[str, int], page_size: int = 1000) -> list[AnomalyEvent]:
    events, offset = [], 0
    conn = http.client.HTTPConnection(address[0], address[1], timeout=30)
    try:
        while True:
            conn.request("GET", f"/anomalies?limit={page_size}&offset={offset}")
            resp = conn.getresponse()
            body = resp.read()
            if resp.status != 200:
                raise RuntimeError(f"GET /anomalies returned {resp.status}: {body[:200]!r}")
            page = json.loads(body)
            events.extend(event_from_doc(d) for d in page["items"])
            offset += len(page["items"])
            if not page["items"] or offset >= page["total"]:
                return events
    finally:
        conn.close()


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageFailed:
        raise
    except Exception as exc:
        raise StageFailed(name, str(exc)) from exc


def run_e2e(
    scenario: simgen.Scenario,
    settings: Settings,
    workdir: str | Path,
    mode: Literal["batch", "service"] = "batch",
    adapters: Literal["memory", "fs"] | None = None,
    components: Components | None = None,
) -> E2EResult:
    """Generate, ingest, process, load, train, detect, read back via the API, score."""
    if mode not in ("batch", "service"):
        raise ValueError(f"unknown mode {mode!r}")
    workdir = Path(workdir).resolve()
    workdir.mkdir(parents=True, exist_ok=True)
    settings = e2e_settings(settings, workdir, adapters)
    cfg = settings.detection_config()
    classes = settings.vessel_classes()

    problems = simgen.expected_detectability(scenario, cfg, classes)
    if problems:
        raise StageFailed("detectability", "; ".join(problems))

    scenario_path = workdir / "scenario.json"
    scenario_path.write_text(json.dumps(scenario.to_doc(), indent=2) + "\n")
    settings = settings.with_overrides(
        {"data_retrieval": {"kind": "synthetic", "scenario": str(scenario_path)}}
    )
    c = components or Components(settings)
    stages: dict[str, Any] = {}

    generated = _stage("generate", simgen.generate, scenario, classes)
    (workdir / "records.ndjson").write_bytes(to_ndjson(record_to_doc(r) for r in generated.records))
    (workdir / "labels.ndjson").write_bytes(to_ndjson(lb.to_doc() for lb in generated.labels))
    stages["generate"] = {"records": len(generated.records), "labels": len(generated.labels)}

    stages["ingestor"] = _stage("ingestor", ingestor_run, settings, c).to_dict()
    dates = sorted({utc_date(r.ts_ms) for r in generated.records})
    stages["processor"] = [_stage("processor", processor_run, settings, d, c).to_dict() for d in dates]
    stages["loader"] = [_stage("loader", loader_run, settings, d, c).to_dict() for d in dates]
    stages["trainer"] = _stage("trainer", trainer_run, settings, c).to_dict()

    if mode == "batch":
        ts = [r.ts_ms for r in generated.records]
        window = (min(ts), max(ts)) if ts else (0, 0)
        stages["detector"] = _stage("detector", detector_batch_run, settings, window, c).to_dict()
    else:
        idle_ms = 2 * int(settings.get("broker", "visibility_timeout_ms"))
        stages["detector"] = _stage(
            "detector", detector_service_loop, settings, threading.Event(), c, stop_when_idle_ms=idle_ms
        ).to_dict()

    def read_back() -> list[AnomalyEvent]:
        handle = start_api(c, "127.0.0.1:0")
        try:
            return fetch_anomalies(handle.address)
        finally:
            c.web.shutdown(handle)

    events = _stage("api", read_back)
    (workdir / "events.ndjson").write_bytes(to_ndjson(event_to_doc(e) for e in events))
    report = score(generated.labels, events, cfg.merge_adjacency_s)
    result = E2EResult(report, events, mode, adapters, stages, workdir)
    (workdir / "report.json").write_text(json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n")
    log.info("e2e %s: precision %.3f recall %.3f", mode, report.precision, report.recall)
    return result


def canonical_ids(events: list[AnomalyEvent]) -> str:
    return canonical(sorted(e.id for e in events))
