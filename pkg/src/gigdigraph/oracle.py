"""Ground truth by exhaustive enumeration.

Two engines:

* :func:`enumerate_event` walks every one of the ``(mn)!`` labelings of a
  small grid.
* :func:`relative_order_event` only permutes the labels on the closed
  neighbourhood of a region. Whether a region's cells are sinks, and where
  they point, depends only on the relative order of those labels, so the
  probability is the same as the full enumeration's at a fraction of the cost.

Events are either plain callables taking a :class:`GigDigraph` (evaluated one
labeling at a time) or instances of :class:`Event`, which also know how to
evaluate themselves on a whole successor array at once.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Iterable, Mapping, Optional

import numpy as np

from .digraph import (
    GigDigraph,
    Labeling,
    batch_component_sizes,
    batch_roots,
    batch_sink_mask,
    batch_successors,
    build_gig,
    contains_path,
    out_path,
    sinks,
)
from .errors import InputError, ResourceCapError
from .lattice import Coord, GridDims, LatticePath, closed_neighborhood, neighbors

__all__ = [
    "OracleResult",
    "ExactStatistics",
    "Event",
    "PathEvent",
    "SinksEvent",
    "ConnectedEvent",
    "enumerate_event",
    "relative_order_event",
    "exact_statistics",
    "oracle_cap",
    "DEFAULT_ORACLE_CAP",
    "DEFAULT_REGION_CAP",
    "CAP_ENV_VAR",
]

DEFAULT_ORACLE_CAP = 9
DEFAULT_REGION_CAP = 12
_REGION_CHUNK = 1 << 16
CAP_ENV_VAR = "GIG_ORACLE_CAP"


def oracle_cap() -> int:
    """Largest cell count the full enumeration accepts (env override allowed)."""
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_ORACLE_CAP
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class OracleResult:
    favorable: int
    total: int

    @property
    def probability(self) -> Fraction:
        return Fraction(self.favorable, self.total)


@dataclass(frozen=True)
class ExactStatistics:
    dims: GridDims
    expected_sinks: Fraction
    variance_sinks: Fraction
    sink_count_pmf: dict[int, Fraction]
    expected_max_component: Fraction
    # mean over labelings of (mn / number of sinks)
    expected_component_size_per_sink: Fraction
    # E[basin size of c | c is a sink], sink included
    conditional_component_size: dict[Coord, Fraction]


class Event:
    """An event on the random digraph.

    Subclasses implement the scalar test (``__call__``), the batch test
    (``mask``) and, where the event is determined by a region's out-edges,
    ``region`` and ``on_edges`` for the relative-order engine.
    """

    name = "event"

    def __call__(self, g: GigDigraph) -> bool:
        raise NotImplementedError

    def mask(self, succ: np.ndarray, dims: GridDims) -> np.ndarray:
        raise NotImplementedError

    def region(self, dims: GridDims) -> frozenset[Coord]:
        raise InputError(f"{self.name} is not determined by a bounded region")

    def on_edges(self, edges: Mapping[Coord, Optional[Coord]]) -> bool:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class PathEvent(Event):
    def __init__(self, path):
        self.path = path if isinstance(path, LatticePath) else LatticePath(path)
        self.name = "path:" + " ".join(str(v) for v in self.path)

    def __call__(self, g):
        return contains_path(g, self.path)

    def mask(self, succ, dims):
        self.path.check(dims)
        hit = np.ones(succ.shape[0], dtype=bool)
        for u, v in zip(self.path.vertices, self.path.vertices[1:]):
            hit &= succ[:, dims.index(u)] == dims.index(v)
        return hit

    def region(self, dims):
        self.path.check(dims)
        verts = self.path.vertices
        return frozenset(verts[:-1] or verts)

    def on_edges(self, edges):
        return all(edges[u] == v for u, v in zip(self.path.vertices, self.path.vertices[1:]))


class SinksEvent(Event):
    def __init__(self, vertices: Iterable):
        self.vertices = tuple(sorted({Coord(*v) for v in vertices}))
        if not self.vertices:
            raise InputError("need at least one vertex")
        self.name = "sinks:" + " ".join(str(v) for v in self.vertices)

    def __call__(self, g):
        return set(self.vertices) <= sinks(g)

    def mask(self, succ, dims):
        hit = np.ones(succ.shape[0], dtype=bool)
        for v in self.vertices:
            i = dims.index(v)
            hit &= succ[:, i] == i
        return hit

    def region(self, dims):
        for v in self.vertices:
            dims.require(v)
        return frozenset(self.vertices)

    def on_edges(self, edges):
        return all(edges[v] is None for v in self.vertices)


class ConnectedEvent(Event):
    """The hill climb started at ``source`` passes through ``target``."""

    def __init__(self, source, target):
        self.source, self.target = Coord(*source), Coord(*target)
        self.name = f"connect:{self.source} {self.target}"

    def __call__(self, g):
        return self.target in out_path(g, self.source).vertices

    def mask(self, succ, dims):
        b = dims.index(self.target)
        cur = np.full(succ.shape[0], dims.index(self.source), dtype=np.intp)
        hit = cur == b
        rows = np.arange(succ.shape[0])
        for _ in range(dims.size):
            cur = succ[rows, cur].astype(np.intp)
            hit |= cur == b
        return hit


def all_permutations(k: int) -> np.ndarray:
    """``(k!, k)`` int8 array of the permutations of ``range(k)`` in lexicographic order."""
    perms = np.zeros((1, 0), dtype=np.int8)
    for size in range(1, k + 1):
        blocks = []
        for first in range(size):
            rest = np.delete(np.arange(size, dtype=np.int8), first)
            block = np.empty((perms.shape[0], size), dtype=np.int8)
            block[:, 0] = first
            block[:, 1:] = rest[perms]
            blocks.append(block)
        perms = np.concatenate(blocks)
    return perms


@lru_cache(maxsize=4)
def _labeling_space(dims: GridDims) -> tuple[np.ndarray, np.ndarray]:
    """All labelings in lexicographic order (0-based labels) and their successor arrays."""
    perms = all_permutations(dims.size)
    perms.setflags(write=False)
    succ = batch_successors(perms, dims)
    succ.setflags(write=False)
    return perms, succ


def _check_cap(dims: GridDims, cap: Optional[int]) -> None:
    cap = oracle_cap() if cap is None else cap
    if dims.size > cap:
        raise ResourceCapError(
            f"full enumeration of a {dims} grid needs {dims.size}! labelings, "
            f"beyond the cap of {cap} cells; use Monte Carlo simulation instead",
            cap=cap,
        )


def _shard_bounds(total: int, block: int, shards: int) -> list[tuple[int, int]]:
    # shards are unions of whole first-label blocks, so each is a fixed prefix set
    n_blocks = total // block
    shards = max(1, min(shards, n_blocks))
    edges = [round(i * n_blocks / shards) * block for i in range(shards + 1)]
    return list(zip(edges, edges[1:]))


def enumerate_event(dims: GridDims, event: Callable[[GigDigraph], bool],
                    cap: Optional[int] = None, shards: int = 1) -> OracleResult:
    """Count the labelings whose digraph satisfies ``event``.

    :class:`Event` instances are evaluated on the cached batch of all
    successor arrays; any other callable is handed a freshly built
    :class:`GigDigraph` for every labeling. Either way the permutation space
    is split into ``shards`` blocks of fixed leading labels and the integer
    counts are added, so the result does not depend on ``shards``.
    """
    _check_cap(dims, cap)
    mn = dims.size
    total = factorial(mn)
    block = factorial(mn - 1)
    favorable = 0
    if isinstance(event, Event):
        _, succ = _labeling_space(dims)
        for lo, hi in _shard_bounds(total, block, shards):
            favorable += int(np.count_nonzero(event.mask(succ[lo:hi], dims)))
    else:
        for lo, hi in _shard_bounds(total, block, shards):
            for first in range(lo // block, hi // block):
                rest = [x for x in range(1, mn + 1) if x != first + 1]
                for tail in itertools.permutations(rest):
                    g = build_gig(Labeling(dims, (first + 1,) + tail))
                    if event(g):
                        favorable += 1
    return OracleResult(favorable, total)


def relative_order_event(region: Iterable, dims: GridDims,
                         event: Callable[[Mapping[Coord, Optional[Coord]]], bool],
                         cap: int = DEFAULT_REGION_CAP) -> OracleResult:
    """Probability of an event decided by the out-edges of ``region``'s cells.

    Only the ``K!`` relative orders of the labels on ``N(region)`` are
    enumerated, ``K = |N(region)|``. ``event`` receives a mapping from each
    region cell to the cell it points at (``None`` for a sink). An
    :class:`Event` may be passed directly; its ``on_edges`` is used.
    """
    region = sorted({dims.require(v) for v in region})
    if not region:
        raise InputError("region must be nonempty")
    hood = sorted(closed_neighborhood(region, dims))
    K = len(hood)
    if K > cap:
        raise ResourceCapError(
            f"the region's closed neighbourhood has {K} cells, beyond the cap of {cap}", cap=cap
        )
    predicate = event.on_edges if isinstance(event, Event) else event
    pos = {c: i for i, c in enumerate(hood)}
    cands = [
        np.array([pos[v]] + [pos[w] for w in sorted(neighbors(v, dims))], dtype=np.intp)
        for v in region
    ]
    # tally how many orders produce each edge configuration of the region,
    # then evaluate the predicate once per configuration
    tally: dict[tuple[int, ...], int] = {}
    orders = itertools.permutations(range(K))
    while True:
        chunk = list(itertools.islice(orders, _REGION_CHUNK))
        if not chunk:
            break
        arr = np.array(chunk, dtype=np.int8)
        choice = np.stack([c[np.argmax(arr[:, c], axis=1)] for c in cands], axis=1)
        configs, counts = np.unique(choice, axis=0, return_counts=True)
        for row, cnt in zip(configs.tolist(), counts.tolist()):
            key = tuple(row)
            tally[key] = tally.get(key, 0) + cnt
    favorable = 0
    for key, cnt in tally.items():
        edges = {
            v: None if t == pos[v] else hood[t]
            for v, t in zip(region, key)
        }
        if predicate(edges):
            favorable += cnt
    return OracleResult(favorable, factorial(K))


def exact_statistics(dims: GridDims, cap: Optional[int] = None) -> ExactStatistics:
    """Exact sink-count distribution and basin-size expectations over all labelings."""
    _check_cap(dims, cap)
    mn = dims.size
    _, succ = _labeling_space(dims)
    total = succ.shape[0]
    is_sink = batch_sink_mask(succ)
    counts = is_sink.sum(axis=1)
    hist = np.bincount(counts, minlength=mn + 1)
    pmf = {k: Fraction(int(c), total) for k, c in enumerate(hist) if c}
    mean = sum((k * p for k, p in pmf.items()), Fraction(0))
    second = sum((k * k * p for k, p in pmf.items()), Fraction(0))
    per_sink = sum((Fraction(mn, k) * p for k, p in pmf.items()), Fraction(0))

    sizes = batch_component_sizes(batch_roots(succ))
    max_sum = int(sizes.max(axis=1).sum(dtype=np.int64))
    conditional = {}
    for i, c in enumerate(dims.cells()):
        n_sink = int(is_sink[:, i].sum())
        conditional[c] = Fraction(int(sizes[:, i].sum(dtype=np.int64)), n_sink)
    return ExactStatistics(
        dims=dims,
        expected_sinks=mean,
        variance_sinks=second - mean * mean,
        sink_count_pmf=pmf,
        expected_max_component=Fraction(max_sum, total),
        expected_component_size_per_sink=per_sink,
        conditional_component_size=conditional,
    )
