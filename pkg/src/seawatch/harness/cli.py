"""The ``seawatch`` umbrella command: e2e runs, generation, scoring, services."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import tempfile
from importlib import resources
from pathlib import Path
from typing import Sequence

from seawatch import simgen
from seawatch.core import AnomalyEvent
from seawatch.harness.e2e import StageFailed, run_e2e
from seawatch.harness.scoring import score
from seawatch.ports import ConfigError
from seawatch.ports.codec import event_from_doc, iter_ndjson, record_to_doc, to_ndjson
from seawatch.services import api, detector, ingestor, loader, processor, trainer
from seawatch.services.cli import EXIT_CONFIG, EXIT_ERROR, EXIT_OK, setup_logging
from seawatch.services.wiring import load_settings

log = logging.getLogger("seawatch")

SERVICES = {
    "ingestor": ingestor.main,
    "processor": processor.main,
    "loader": loader.main,
    "detector": detector.main,
    "trainer": trainer.main,
    "api": api.main,
}


def data_path(name: str) -> Path:
    return Path(str(resources.files("seawatch") / "data" / name))


def _scenario(args: argparse.Namespace) -> simgen.Scenario:
    path = args.scenario or data_path("clean_scenario.json" if args.clean else "default_scenario.json")
    scenario = simgen.Scenario.load(path)
    return scenario.without_injections() if args.clean else scenario


def _read_ndjson(path: str) -> list[dict]:
    return [doc for _, doc in iter_ndjson(Path(path).read_bytes(), path)]


def cmd_e2e(args: argparse.Namespace) -> int:
    settings = load_settings(args.config or str(data_path("e2e_config.json")))
    workdir = Path(args.workdir) if args.workdir else Path(tempfile.mkdtemp(prefix="seawatch-e2e-"))
    try:
        result = run_e2e(_scenario(args), settings, workdir, mode=args.mode, adapters=args.adapters)
    except StageFailed as exc:
        log.error("%s", exc)
        print(json.dumps({"exit_code": EXIT_ERROR, "failed_stage": exc.stage, "error": str(exc)}))
        return EXIT_ERROR
    doc = result.to_dict()
    doc["workdir"] = str(workdir)
    print(json.dumps(doc, indent=2, sort_keys=True))
    return result.exit_code


def cmd_generate(args: argparse.Namespace) -> int:
    scenario = _scenario(args)
    generated = simgen.generate(scenario)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "records.ndjson").write_bytes(to_ndjson(record_to_doc(r) for r in generated.records))
    (out / "labels.ndjson").write_bytes(to_ndjson(lb.to_doc() for lb in generated.labels))
    summary = {"records": len(generated.records), "labels": len(generated.labels), "removed": generated.removed}
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def cmd_score(args: argparse.Namespace) -> int:
    adjacency = args.merge_adjacency_s
    if adjacency is None:
        adjacency = load_settings(args.config).detection_config().merge_adjacency_s
    labels = [simgen.GroundTruthLabel.from_doc(d) for d in _read_ndjson(args.labels)]
    events: list[AnomalyEvent] = [event_from_doc(d) for d in _read_ndjson(args.events)]
    report = score(labels, events, adjacency)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seawatch", description="AIS anomaly detection pipeline.")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenario", help="scenario JSON (default: the packaged 20-vessel scenario)")
        p.add_argument("--clean", action="store_true", help="drop all injections")

    e2e = sub.add_parser("e2e", help="run the whole flow on a scenario and score it")
    scenario_args(e2e)
    e2e.add_argument("--config", help="JSON settings file (default: packaged e2e config)")
    e2e.add_argument("--mode", choices=("batch", "service"), default="batch")
    e2e.add_argument("--adapters", choices=("memory", "fs"), help="override all storage-like adapters")
    e2e.add_argument("--workdir", help="run directory (default: a fresh temp dir)")
    e2e.set_defaults(func=cmd_e2e)

    gen = sub.add_parser("generate", help="write records.ndjson and labels.ndjson")
    scenario_args(gen)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_generate)

    sc = sub.add_parser("score", help="score events.ndjson against labels.ndjson")
    sc.add_argument("--labels", required=True)
    sc.add_argument("--events", required=True)
    sc.add_argument("--config", help="settings file supplying merge_adjacency_s")
    sc.add_argument("--merge-adjacency-s", type=float)
    sc.set_defaults(func=cmd_score)

    run = sub.add_parser("run", help="run one service, passing remaining args through")
    run.add_argument("service", choices=sorted(SERVICES))
    run.add_argument("args", nargs=argparse.REMAINDER)
    run.set_defaults(func=lambda a: SERVICES[a.service](a.args))
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command != "run":
        setup_logging()
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
