"""Seeded simulation of random labelings, for grids too large to enumerate.

Random numbers come from numpy's PCG64 generator. A run is split into
``shards``; shard ``k`` draws from the ``k``-th child of
``SeedSequence(seed)``, and every shard processes its trials in fixed-size
batches. All accumulators are integers, so merging shards is exact and the
output depends only on ``(dims, trials, seed, shards)``.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from .digraph import (
    Labeling,
    batch_component_sizes,
    batch_roots,
    batch_sink_mask,
    batch_successors,
)
from .errors import InputError
from .lattice import GridDims
from .oracle import Event

__all__ = [
    "SimulationConfig",
    "SimulationStats",
    "EventEstimate",
    "sample_labeling",
    "draw_batch",
    "simulate",
    "BATCH_SIZE",
]

BATCH_SIZE = 8192


@dataclass(frozen=True)
class SimulationConfig:
    dims: GridDims
    trials: int
    seed: int = 0
    shards: int = 1

    def __post_init__(self):
        if isinstance(self.trials, bool) or not isinstance(self.trials, int) or self.trials < 1:
            raise InputError(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise InputError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not isinstance(self.shards, int) or self.shards < 1:
            raise InputError(f"shards must be a positive integer, got {self.shards!r}")


@dataclass(frozen=True)
class EventEstimate:
    hits: int
    estimate: float
    stderr: float


@dataclass(frozen=True)
class SimulationStats:
    dims: GridDims
    trials: int
    seed: int
    shards: int
    mean_sinks: float
    var_sinks: float
    stderr_mean: float
    component_size_histogram: dict[int, int]
    mean_max_component: float
    stderr_max_component: float
    event_frequencies: dict[str, EventEstimate] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "dims": [self.dims.m, self.dims.n],
            "trials": self.trials,
            "seed": self.seed,
            "shards": self.shards,
            "mean_sinks": self.mean_sinks,
            "var_sinks": self.var_sinks,
            "stderr_mean": self.stderr_mean,
            "component_size_histogram": {str(k): v for k, v in sorted(self.component_size_histogram.items())},
            "mean_max_component": self.mean_max_component,
            "stderr_max_component": self.stderr_max_component,
            "event_frequencies": {
                name: {"hits": e.hits, "estimate": e.estimate, "stderr": e.stderr}
                for name, e in self.event_frequencies.items()
            },
        }


def sample_labeling(dims: GridDims, rng: Union[np.random.Generator, int]) -> Labeling:
    """Draw a labeling uniformly from all ``(mn)!`` bijections."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    return Labeling(dims, tuple(int(v) + 1 for v in rng.permutation(dims.size)))


def draw_batch(rng: np.random.Generator, count: int, size: int) -> np.ndarray:
    """``count`` independent uniform permutations of ``0..size-1``, one per row."""
    template = np.arange(size, dtype=np.int16)
    return rng.permuted(np.broadcast_to(template, (count, size)), axis=1)


def _moments(total: int, square_total: int, n: int) -> tuple[float, float, float]:
    """Mean, unbiased variance and standard error from integer sums."""
    mean = Fraction(total, n)
    var = Fraction(square_total * n - total * total, n * (n - 1)) if n > 1 else Fraction(0)
    return float(mean), float(var), math.sqrt(var / n)


def simulate(cfg: SimulationConfig, events: Optional[Iterable[Event]] = None) -> SimulationStats:
    """Run ``cfg.trials`` independent random labelings and summarise them.

    Tracks the sink count, the size of every basin, the largest basin, and
    the hit count of each event.
    """
    events = list(events or [])
    for ev in events:
        if not isinstance(ev, Event):
            raise InputError(f"simulation events must be Event instances, got {ev!r}")
    names = [ev.name for ev in events]
    if len(set(names)) != len(names):
        raise InputError("duplicate event names")

    dims, mn = cfg.dims, cfg.dims.size
    sink_sum = sink_sq = max_sum = max_sq = 0
    hist: Counter[int] = Counter()
    hits = [0] * len(events)

    streams = np.random.SeedSequence(cfg.seed).spawn(cfg.shards)
    base, extra = divmod(cfg.trials, cfg.shards)
    for k, ss in enumerate(streams):
        rng = np.random.Generator(np.random.PCG64(ss))
        remaining = base + (1 if k < extra else 0)
        while remaining:
            b = min(BATCH_SIZE, remaining)
            remaining -= b
            labels = draw_batch(rng, b, mn)
            succ = batch_successors(labels, dims)
            counts = batch_sink_mask(succ).sum(axis=1, dtype=np.int64)
            sink_sum += int(counts.sum())
            sink_sq += int((counts * counts).sum())
            sizes = batch_component_sizes(batch_roots(succ))
            biggest = sizes.max(axis=1).astype(np.int64)
            max_sum += int(biggest.sum())
            max_sq += int((biggest * biggest).sum())
            size_counts = np.bincount(sizes.ravel(), minlength=mn + 1)
            for s in np.nonzero(size_counts[1:])[0] + 1:
                hist[int(s)] += int(size_counts[s])
            for j, ev in enumerate(events):
                hits[j] += int(np.count_nonzero(ev.mask(succ, dims)))

    n = cfg.trials
    mean, var, se = _moments(sink_sum, sink_sq, n)
    max_mean, _, max_se = _moments(max_sum, max_sq, n)
    freqs = {}
    for ev, h in zip(events, hits):
        est, _, ev_se = _moments(h, h, n)
        freqs[ev.name] = EventEstimate(hits=h, estimate=est, stderr=ev_se)
    return SimulationStats(
        dims=dims,
        trials=n,
        seed=cfg.seed,
        shards=cfg.shards,
        mean_sinks=mean,
        var_sinks=var,
        stderr_mean=se,
        component_size_histogram=dict(sorted(hist.items())),
        mean_max_component=max_mean,
        stderr_max_component=max_se,
        event_frequencies=freqs,
    )
