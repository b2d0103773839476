"""The service executables and their composition root."""

from seawatch.services.api import api_serve, build_routes, start_api
from seawatch.services.detector import detector_batch_run, detector_service_loop
from seawatch.services.ingestor import ingestor_run
from seawatch.services.loader import loader_run
from seawatch.services.processor import processor_run
from seawatch.services.report import ApiPage, RunReport
from seawatch.services.trainer import trainer_run
from seawatch.services.wiring import Components, load_settings

__all__ = [
    "ApiPage",
    "Components",
    "RunReport",
    "api_serve",
    "build_routes",
    "detector_batch_run",
    "detector_service_loop",
    "ingestor_run",
    "load_settings",
    "loader_run",
    "processor_run",
    "start_api",
    "trainer_run",
]
