"""Seeded simulation of single walks and of pairs of independent walks.

Trial ``i`` of walker ``w`` always draws from the stream keyed by
``(seed, i, w)``, so results do not depend on how trials are batched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from .alias import AliasTable
from .engine import DEFAULT_EXACT_CAP, return_series
from .errors import AsymmetricLaw
from .lattice import LatticePoint, StepLaw, difference_law, is_symmetric
from .rng import SplitMix64, stream_keys, stream_outputs

BATCH = 1 << 17


@dataclass(frozen=True)
class SimConfig:
    seed: int
    trials: int
    horizon: int
    law: StepLaw

    def __post_init__(self):
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.horizon < 0:
            raise ValueError("horizon must be non-negative")


@dataclass(frozen=True)
class ReturnStats:
    trials: int
    horizon: int
    counts: List[int]        # counts[n] = trials with S_n = 0
    mean_returns: float      # mean number of n in 1..horizon with S_n = 0

    @property
    def frequencies(self) -> List[float]:
        return [c / self.trials for c in self.counts]


@dataclass(frozen=True)
class MeetingStats:
    trials: int
    horizon: int
    mean_meetings: float
    fraction_met_at_least_once: float
    meeting_counts: List[int]


@dataclass(frozen=True)
class FirstReturnHistogram:
    trials: int
    horizon: int
    counts: Dict[int, int]
    overflow: int


def sample_step(table: AliasTable, rng: SplitMix64) -> LatticePoint:
    """Draw one increment; accepts a law too and builds its table."""
    if isinstance(table, StepLaw):
        table = AliasTable(table)
    return table.draw(rng.next_u64())


def _batches(trials: int) -> Iterator[np.ndarray]:
    for start in range(0, trials, BATCH):
        yield np.arange(start, min(start + BATCH, trials), dtype=np.uint64)


def _paths(table: AliasTable, seed: int, trials: np.ndarray, horizon: int,
           walker: int = 0) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Positions (x, y) at n = 1..horizon for a batch of trials."""
    keys = stream_keys(seed, trials, walker)
    x = np.zeros(len(trials), dtype=np.int64)
    y = np.zeros(len(trials), dtype=np.int64)
    for k in range(horizon):
        dx, dy = table.displacements(stream_outputs(keys, k))
        x += dx
        y += dy
        yield x, y


def simulate_returns(cfg: SimConfig) -> ReturnStats:
    table = AliasTable(cfg.law)
    counts = [0] * (cfg.horizon + 1)
    counts[0] = cfg.trials
    returns = 0
    for batch in _batches(cfg.trials):
        for n, (x, y) in enumerate(_paths(table, cfg.seed, batch, cfg.horizon), start=1):
            hits = int(np.count_nonzero((x == 0) & (y == 0)))
            counts[n] += hits
            returns += hits
    return ReturnStats(cfg.trials, cfg.horizon, counts, returns / cfg.trials)


def simulate_meetings(cfg: SimConfig) -> MeetingStats:
    """Two independent walks from the same start; count n in 0..horizon with
    equal positions. ``fraction_met_at_least_once`` ignores the shared start."""
    table = AliasTable(cfg.law)
    per_trial = []
    for batch in _batches(cfg.trials):
        meets = np.ones(len(batch), dtype=np.int64)  # n = 0
        first = _paths(table, cfg.seed, batch, cfg.horizon, walker=0)
        second = _paths(table, cfg.seed, batch, cfg.horizon, walker=1)
        for (x1, y1), (x2, y2) in zip(first, second):
            meets += (x1 == x2) & (y1 == y2)
        per_trial.append(meets)
    counts = np.concatenate(per_trial)
    return MeetingStats(
        trials=cfg.trials,
        horizon=cfg.horizon,
        mean_meetings=float(counts.sum()) / cfg.trials,
        fraction_met_at_least_once=float(np.count_nonzero(counts > 1)) / cfg.trials,
        meeting_counts=counts.tolist(),
    )


def first_return_histogram(cfg: SimConfig) -> FirstReturnHistogram:
    if not is_symmetric(cfg.law):
        raise AsymmetricLaw("first-return histogram is defined for symmetric laws")
    table = AliasTable(cfg.law)
    counts: Dict[int, int] = {}
    returned = 0
    for batch in _batches(cfg.trials):
        pending = np.ones(len(batch), dtype=bool)
        for n, (x, y) in enumerate(_paths(table, cfg.seed, batch, cfg.horizon), start=1):
            hit = pending & (x == 0) & (y == 0)
            c = int(np.count_nonzero(hit))
            if c:
                counts[n] = counts.get(n, 0) + c
                pending &= ~hit
        returned += len(batch) - int(np.count_nonzero(pending))
    return FirstReturnHistogram(cfg.trials, cfg.horizon, dict(sorted(counts.items())),
                                cfg.trials - returned)


# -- exact references ----------------------------------------------------------

def binomial_sigma(p: float, trials: int) -> float:
    return math.sqrt(p * (1.0 - p) / trials)


def meeting_count_moments(law: StepLaw, horizon: int,
                          cap: int = DEFAULT_EXACT_CAP) -> Tuple[Fraction, Fraction]:
    """Exact mean and variance of the number of meetings in 0..horizon.

    Meetings are visits of the difference walk D to 0, and by the Markov
    property P[D_m = 0, D_n = 0] = p_m p_{n-m} for m <= n.
    """
    p = [row.p_return for row in return_series(difference_law(law), horizon, "exact", cap)]
    first = sum(p, Fraction(0))
    second = first + 2 * sum(p[m] * p[n - m]
                              for n in range(horizon + 1) for m in range(n))
    return first, second - first * first


def returns_rows(stats: ReturnStats, exact: Optional[List[Fraction]]) -> List[dict]:
    rows = []
    for n, freq in enumerate(stats.frequencies):
        row = {"n": n, "frequency": freq, "exact": None, "abs_err": None, "sigma": None}
        if exact is not None:
            p = float(exact[n])
            row.update(exact=p, abs_err=abs(freq - p), sigma=binomial_sigma(p, stats.trials))
        rows.append(row)
    return rows
