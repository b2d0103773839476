"""Shared command-line plumbing for the service executables."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import datetime
from typing import Callable, Sequence

from seawatch.ports import ConfigError, Settings
from seawatch.services.report import RunReport
from seawatch.services.wiring import load_settings

EXIT_OK, EXIT_ERROR, EXIT_CONFIG = 0, 1, 2

log = logging.getLogger("seawatch")


def setup_logging(level: int = logging.INFO) -> None:
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
        force=True,
    )


def date_arg(text: str) -> str:
    try:
        datetime.strptime(text, "%Y-%m-%d")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got {text!r}") from None
    return text


def base_parser(prog: str, description: str) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=prog, description=description)
    parser.add_argument("--config", help="JSON settings file")
    return parser


def run_service(
    parser: argparse.ArgumentParser,
    argv: Sequence[str] | None,
    body: Callable[[Settings, argparse.Namespace], RunReport],
) -> int:
    """Parse args, load settings, run ``body`` and print its report as JSON."""
    args = parser.parse_args(argv)
    setup_logging()
    try:
        settings = load_settings(args.config)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    try:
        report = body(settings, args)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except ServiceFailed as exc:
        log.error("%s", exc)
        print(json.dumps(exc.report.to_dict(), sort_keys=True))
        return EXIT_ERROR
    except Exception as exc:  # noqa: BLE001 - any failure maps to exit 1
        log.exception("run failed: %s", exc)
        return EXIT_ERROR
    print(json.dumps(report.to_dict(), sort_keys=True))
    return EXIT_OK


class ServiceFailed(RuntimeError):
    """A run aborted; ``report`` holds what was done before the failure."""

    def __init__(self, message: str, report: RunReport) -> None:
        super().__init__(message)
        report.status = "error"
        report.error = message
        self.report = report
