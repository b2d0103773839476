"""API service: read-only HTTP access to the warehouse and the anomaly store."""

from __future__ import annotations

import argparse
import logging
import signal
import threading
from typing import Any, Mapping, Sequence

from seawatch.core import AnomalyKind
from seawatch.ports import BadRequest, NotFound, Route
from seawatch.ports.codec import event_to_doc, point_to_doc
from seawatch.services.cli import base_parser, run_service
from seawatch.services.report import ApiPage, RunReport
from seawatch.services.wiring import Components

log = logging.getLogger(__name__)

DEFAULT_LIMIT = 100
MAX_LIMIT = 1000
MAX_TS_MS = 2**63 - 1


def _int(query: Mapping[str, str], name: str, default: int | None, lo: int = 0, hi: int = MAX_TS_MS) -> int | None:
    text = query.get(name)
    if text is None:
        return default
    try:
        value = int(text)
    except ValueError:
        raise BadRequest(f"{name} must be an integer") from None
    if not lo <= value <= hi:
        raise BadRequest(f"{name} must be between {lo} and {hi}")
    return value


def _pagination(query: Mapping[str, str]) -> tuple[int, int]:
    return _int(query, "limit", DEFAULT_LIMIT, 1, MAX_LIMIT), _int(query, "offset", 0)


def build_routes(c: Components) -> list[Route]:
    ttl_ms = int(c.settings.get("cache", "ttl_ms", 30000))

    def health(params, query):
        return {"status": "ok"}

    def metrics(params, query):
        return c.metrics.render()

    def vessels(params, query):
        limit, offset = _pagination(query)
        page = c.warehouse.list_vessels(limit, offset)
        items = [{"mmsi": mmsi, "class": vc.name} for mmsi, vc in page.items]
        return ApiPage(items, page.total, limit, offset)

    def track(params, query):
        mmsi = params["mmsi"]
        from_ms = _int(query, "from_ms", 0)
        to_ms = _int(query, "to_ms", MAX_TS_MS)
        if c.warehouse.get_vessel(mmsi) is None:
            raise NotFound(f"unknown vessel {mmsi}")
        key = f"track:{mmsi}:{from_ms}:{to_ms}"
        points = c.cache.get(key) if c.cache is not None else None
        if points is None:
            points = [point_to_doc(p) for p in c.warehouse.query_track(mmsi, from_ms, to_ms)]
            if c.cache is not None:
                c.cache.set(key, points, ttl_ms)
        return {"mmsi": mmsi, "points": points}

    def anomalies(params, query):
        limit, offset = _pagination(query)
        kind = query.get("kind")
        if kind is not None:
            try:
                kind = AnomalyKind(kind)
            except ValueError:
                raise BadRequest(f"unknown anomaly kind {kind!r}") from None
        page = c.anomaly_store.query(
            mmsi=query.get("mmsi"),
            kind=kind,
            from_ms=_int(query, "from_ms", None),
            to_ms=_int(query, "to_ms", None),
            limit=limit,
            offset=offset,
        )
        return ApiPage([event_to_doc(e) for e in page.items], page.total, limit, offset)

    def counted(name: str, fn):
        def handler(params, query) -> Any:
            try:
                result = fn(params, query)
            except BadRequest:
                c.metrics.inc("og_api_requests_total", {"route": name, "status": "400"})
                raise
            except NotFound:
                c.metrics.inc("og_api_requests_total", {"route": name, "status": "404"})
                raise
            c.metrics.inc("og_api_requests_total", {"route": name, "status": "200"})
            return result

        return handler

    return [
        Route("/health", counted("health", health)),
        Route("/metrics", counted("metrics", metrics)),
        Route("/vessels", counted("vessels", vessels)),
        Route("/vessels/{mmsi}/track", counted("track", track)),
        Route("/anomalies", counted("anomalies", anomalies)),
    ]


def start_api(c: Components, listen: str | None = None):
    """Bind the API and return the server handle (``handle.address`` is the bound address)."""
    c.metrics.inc("og_api_runs_total")
    return c.web.bind(build_routes(c), listen or c.settings.get("web", "listen"))


def api_serve(
    settings,
    shutdown_signal: threading.Event,
    components: Components | None = None,
    listen: str | None = None,
) -> RunReport:
    c = components or Components(settings)
    handle = start_api(c, listen)
    log.info("API listening on %s:%d", *handle.address)
    try:
        shutdown_signal.wait()
    finally:
        c.web.shutdown(handle)
    return RunReport("api", runs_total=int(c.metrics.value("og_api_runs_total")))


def _run(settings, args: argparse.Namespace) -> RunReport:
    stop = threading.Event()
    for sig in (signal.SIGINT, signal.SIGTERM):
        signal.signal(sig, lambda *_: stop.set())
    return api_serve(settings, stop, listen=args.listen)


def main(argv: Sequence[str] | None = None) -> int:
    parser = base_parser("seawatch-api", "Serve vessels, tracks and anomalies over HTTP.")
    parser.add_argument("--listen", help="host:port, overrides web.listen")
    return run_service(parser, argv, _run)
