"""Monte Carlo estimates of the link metrics.

Trials are split over ``stream_count`` independent Philox streams keyed by
``(master_seed, stream_index)``.  The split and the merge depend only on the
configuration, so results are bit-identical for any number of worker
threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channels import alpha_mu_sample, egg_sample
from .e2e import LinkPair, RelayConfig, fixed_gain_constant, gamma_eq
from .secrecy import EveParams, SecrecyConfig

MIN_TRIALS = 1000
DEFAULT_TRIALS = 1_000_000
_CHUNK = 250_000


@dataclass(frozen=True)
class McConfig:
    trials: int = DEFAULT_TRIALS
    master_seed: int = 20240101
    stream_count: int = 8
    workers: int | None = None

    def __post_init__(self):
        if self.trials < MIN_TRIALS:
            raise ValueError(f"at least {MIN_TRIALS} trials are required, got {self.trials}")
        if self.stream_count < 1:
            raise ValueError("stream_count must be positive")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    trials: int

    @classmethod
    def from_count(cls, hits: int, trials: int) -> McEstimate:
        p = hits / trials
        return cls(p, math.sqrt(p * (1.0 - p) / trials), trials)

    def interval(self, k: float = 3.0) -> tuple[float, float]:
        return self.value - k * self.std_error, self.value + k * self.std_error


def stream_generator(master_seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([master_seed, index])))


def _stream_sizes(trials: int, streams: int) -> list[int]:
    base, extra = divmod(trials, streams)
    return [base + (1 if i < extra else 0) for i in range(streams)]


def _run_streams(mc: McConfig, per_chunk: Callable[[np.random.Generator, int], np.ndarray]):
    """Sum ``per_chunk`` counts over all streams, in stream order."""

    def one_stream(index_size):
        index, size = index_size
        rng = stream_generator(mc.master_seed, index)
        total = None
        done = 0
        while done < size:
            n = min(_CHUNK, size - done)
            counts = np.asarray(per_chunk(rng, n))
            total = counts if total is None else total + counts
            done += n
        return total

    jobs = list(enumerate(_stream_sizes(mc.trials, mc.stream_count)))
    jobs = [j for j in jobs if j[1] > 0]
    workers = mc.workers or min(len(jobs), 8)
    if workers <= 1:
        results = [one_stream(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one_stream, jobs))
    total = results[0]
    for r in results[1:]:
        total = total + r
    return total


def _draw_link(rng, links: LinkPair, relay_c: float, eve: EveParams | None, n: int):
    # draw order is fixed: main hop, optical hop, eavesdropper
    g1 = alpha_mu_sample(links.rf, rng, n)
    g2 = egg_sample(links.uwoc, rng, n)
    ge = alpha_mu_sample(eve, rng, n) if eve is not None else None
    return gamma_eq(g1, g2, relay_c), ge


def mc_secrecy_counts(links: LinkPair, eve: EveParams, relay: RelayConfig, sc: SecrecyConfig,
                      mc: McConfig) -> dict[str, McEstimate]:
    """Exact SOP, lower-bound SOP and PNZ from one shared set of draws."""
    relay_c = fixed_gain_constant(links.rf, relay)
    theta = sc.theta

    def chunk(rng, n):
        geq, ge = _draw_link(rng, links, relay_c, eve, n)
        return np.array([np.count_nonzero(geq <= theta * ge + theta - 1.0),
                         np.count_nonzero(geq <= theta * ge),
                         np.count_nonzero(geq > ge)])

    exact, lower, pnz = _run_streams(mc, chunk)
    return {"sop_exact": McEstimate.from_count(int(exact), mc.trials),
            "sop_lower": McEstimate.from_count(int(lower), mc.trials),
            "pnz": McEstimate.from_count(int(pnz), mc.trials)}


def mc_sop_exact(links, eve, relay, sc, mc: McConfig) -> McEstimate:
    return mc_secrecy_counts(links, eve, relay, sc, mc)["sop_exact"]


def mc_sop_lower(links, eve, relay, sc, mc: McConfig) -> McEstimate:
    return mc_secrecy_counts(links, eve, relay, sc, mc)["sop_lower"]


def mc_pnz(links, eve, relay, mc: McConfig) -> McEstimate:
    return mc_secrecy_counts(links, eve, relay, SecrecyConfig(0.0), mc)["pnz"]


def mc_cdf_gamma_eq(links: LinkPair, relay: RelayConfig, gamma_grid, mc: McConfig) -> list[McEstimate]:
    grid = np.sort(np.asarray(gamma_grid, dtype=float))
    order = np.argsort(np.asarray(gamma_grid, dtype=float))
    relay_c = fixed_gain_constant(links.rf, relay)

    def chunk(rng, n):
        geq, _ = _draw_link(rng, links, relay_c, None, n)
        return np.searchsorted(np.sort(geq), grid, side="right")

    counts = _run_streams(mc, chunk)
    out = [None] * grid.size
    for pos, idx in enumerate(order):
        out[idx] = McEstimate.from_count(int(counts[pos]), mc.trials)
    return out


def mc_mean_inverse_one_plus_snr(links: LinkPair, mc: McConfig) -> tuple[float, float]:
    """Sample mean and standard error of 1/(1 + g1)."""
    def chunk(rng, n):
        x = 1.0 / (1.0 + alpha_mu_sample(links.rf, rng, n))
        return np.array([x.sum(), (x * x).sum()])

    s1, s2 = _run_streams(mc, chunk)
    mean = s1 / mc.trials
    var = max(s2 / mc.trials - mean * mean, 0.0)
    return mean, math.sqrt(var / mc.trials)
