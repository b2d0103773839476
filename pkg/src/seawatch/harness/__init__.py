"""End-to-end harness: scenario runs and ground-truth scoring."""

from seawatch.harness.e2e import E2EResult, StageFailed, run_e2e
from seawatch.harness.scoring import MatchReport, score

__all__ = ["E2EResult", "MatchReport", "StageFailed", "run_e2e", "score"]
