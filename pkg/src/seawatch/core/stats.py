"""Speed statistics: fitting and scoring."""

from __future__ import annotations

import math
from typing import Mapping, Sequence

from seawatch.core.model import DomainError, SpeedStats, SpeedStatsModel


def fit_stat_model(sogs: Sequence[float]) -> tuple[float, float]:
    """Mean and population standard deviation of a speed sample."""
    n = len(sogs)
    if n == 0:
        raise DomainError("empty sample")
    mu = math.fsum(sogs) / n
    var = math.fsum((x - mu) ** 2 for x in sogs) / n
    return mu, math.sqrt(var)


def zscore(x: float, mu: float, sigma: float, sigma_floor: float = 1e-9) -> float:
    return abs(x - mu) / max(sigma, sigma_floor)


def fit_speed_stats(
    sogs_by_vessel: Mapping[str, Sequence[float]],
    min_points: int,
    fallback: tuple[float, float],
    created_at_ms: int = 0,
) -> SpeedStatsModel:
    """Fit a :class:`SpeedStatsModel` from per-vessel speed samples.

    Vessels with fewer than ``min_points`` samples get no entry of their
    own. The fleet defaults are fitted on every sample pooled together;
    ``fallback`` is used only when there is no sample at all.
    """
    per_vessel = {}
    pooled: list[float] = []
    for mmsi in sorted(sogs_by_vessel):
        sogs = list(sogs_by_vessel[mmsi])
        pooled.extend(sogs)
        if sogs and len(sogs) >= min_points:
            mu, sigma = fit_stat_model(sogs)
            per_vessel[mmsi] = SpeedStats(mu, sigma, len(sogs))
    if pooled:
        mu, sigma = fit_stat_model(pooled)
        defaults = SpeedStats(mu, sigma, len(pooled))
    else:
        defaults = SpeedStats(fallback[0], fallback[1], 0)
    return SpeedStatsModel(defaults=defaults, per_vessel=per_vessel, created_at_ms=created_at_ms)

