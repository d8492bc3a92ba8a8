"""Smallest main-link average SNR meeting a secrecy target.

"Power" is the main-link average SNR in dB; converting it to watts is the
caller's business (it is proportional to transmit power at fixed noise).
The search brackets the crossing with the cheap asymptotic expression and
then bisects with the exact (SOP lower bound or PNZ) expression, so the
returned point is certified by the exact expression alone.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .channels import db_to_linear
from .e2e import LinkPair, RelayConfig
from .errors import InfeasibleError
from .secrecy import (EveParams, SecrecyConfig, pnz_asymptotic_high_main, pnz_exact,
                      sop_asymptotic_high_main, sop_lower_bound)

METRICS = ("sop", "pnz")


@dataclass(frozen=True)
class PowerTarget:
    metric: str
    target: float
    search_lo: float = 0.0
    search_hi: float = 50.0
    tol_db: float = 0.05

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if not 0.0 < self.target < 1.0:
            raise ValueError(f"target must lie in (0, 1), got {self.target}")
        if not self.search_lo < self.search_hi:
            raise ValueError("search_lo must be below search_hi")
        if not self.tol_db > 0:
            raise ValueError("tol_db must be positive")


@dataclass(frozen=True)
class SaturationFloor:
    floor: float
    asymptotic_at_hi: float
    asymptotic_limit: float
    knee_db: float


def _links_at(links: LinkPair, snr_db: float) -> LinkPair:
    return replace(links, rf=links.rf.with_mean_snr(db_to_linear(snr_db)))


def metric_functions(links, eve, relay, sc, metric) -> tuple[Callable, Callable]:
    """Exact and asymptotic metric as functions of the main-link SNR in dB."""
    if metric == "sop":
        return (lambda db: sop_lower_bound(_links_at(links, db), eve, relay, sc),
                lambda db: sop_asymptotic_high_main(_links_at(links, db), eve, relay, sc))
    if metric == "pnz":
        return (lambda db: pnz_exact(_links_at(links, db), eve, relay),
                lambda db: pnz_asymptotic_high_main(_links_at(links, db), eve, relay))
    raise ValueError(f"unknown metric {metric!r}")


def _meets(metric: str, value: float, target: float) -> bool:
    return value <= target if metric == "sop" else value >= target


def min_power_for_target(links: LinkPair, eve: EveParams, relay: RelayConfig,
                         sc: SecrecyConfig, t: PowerTarget) -> float:
    """Smallest SNR (dB, within ``t.tol_db``) at which the exact metric meets the target.

    Raises :class:`InfeasibleError` when the metric at ``search_hi`` (the
    saturation floor for SOP) still misses the target.
    """
    exact, asymptotic = metric_functions(links, eve, relay, sc, t.metric)
    hi_value = exact(t.search_hi)
    if not _meets(t.metric, hi_value, t.target):
        raise InfeasibleError(
            f"{t.metric} = {hi_value:.6g} at {t.search_hi} dB misses target {t.target}; "
            "the metric saturates before reaching it")
    if _meets(t.metric, exact(t.search_lo), t.target):
        return float(t.search_lo)

    lo, hi = _asymptotic_bracket(asymptotic, exact, t)
    while hi - lo > t.tol_db:
        mid = 0.5 * (lo + hi)
        if _meets(t.metric, exact(mid), t.target):
            hi = mid
        else:
            lo = mid
    return float(hi)


def _asymptotic_bracket(asymptotic, exact, t: PowerTarget) -> tuple[float, float]:
    """Narrow [search_lo, search_hi] around the asymptotic crossing, verified exactly."""
    grid = np.linspace(t.search_lo, t.search_hi, 11)
    guess = None
    for db in grid:
        if _meets(t.metric, asymptotic(db), t.target):
            guess = float(db)
            break
    lo, hi = t.search_lo, t.search_hi
    if guess is None:
        return lo, hi
    step = 1.0
    # widen a window around the guess until the exact metric straddles the target
    while True:
        a, b = max(lo, guess - step), min(hi, guess + step)
        a_ok = a == lo or not _meets(t.metric, exact(a), t.target)
        b_ok = b == hi or _meets(t.metric, exact(b), t.target)
        if a_ok and b_ok:
            return a, b
        if a == lo and b == hi:
            return lo, hi
        step *= 2.0


def saturation_floor(links: LinkPair, eve: EveParams, relay: RelayConfig, sc: SecrecyConfig,
                     metric: str = "sop", *, search_hi: float = 50.0,
                     knee_fraction: float = 0.05, search_lo: float = 0.0) -> SaturationFloor:
    """Metric value at ``search_hi`` taken as the floor, with its asymptotic companions.

    ``knee_db`` is the smallest SNR on a 0.5 dB grid whose exact metric lies
    within ``knee_fraction`` (relative) of the floor.
    """
    exact, asymptotic = metric_functions(links, eve, relay, sc, metric)
    floor = exact(search_hi)
    limit = asymptotic(search_hi + 60.0)
    knee = search_hi
    for db in np.arange(search_lo, search_hi + 1e-9, 0.5):
        if abs(exact(db) - floor) <= knee_fraction * abs(floor):
            knee = float(db)
            break
    return SaturationFloor(floor, asymptotic(search_hi), limit, knee)
