"""Closed-form probabilities for randomly labeled GIG digraphs.

Every quantity is an exact :class:`fractions.Fraction`. The labeling is
uniform over all ``(mn)!`` bijections onto ``1..mn``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable

from .errors import DomainError, InputError, ResourceCapError
from .lattice import (
    DEFAULT_PATH_CAP,
    Coord,
    GridDims,
    LatticePath,
    has_chord,
    k_sequence,
    monotone_paths,
    neighbors,
    squared_distance,
)

__all__ = [
    "ConnectivityBound",
    "SeriesBoundResult",
    "path_probability",
    "multi_sink_probability",
    "sink_probability",
    "sinks_independent",
    "sink_covariance",
    "expected_sinks",
    "variance_sinks_closed",
    "variance_sinks_by_pairs",
    "connectivity_lower_bound",
    "component_size_bound",
    "series_bound",
    "DEFAULT_SINK_SET_CAP",
]

DEFAULT_SINK_SET_CAP = 8


@dataclass(frozen=True)
class ConnectivityBound:
    shortest_length: int
    path_count: int
    min_path_prob: Fraction
    count_times_min: Fraction
    sum_over_paths: Fraction


@dataclass(frozen=True)
class SeriesBoundResult:
    truncated_value: Fraction
    tail_bound: Fraction
    certified_upper: Fraction
    terms_used: int
    inner_terms: int


def path_probability(path, dims: GridDims) -> Fraction:
    """Probability that a uniformly random labeling's digraph contains ``path``.

    For a path ``V_1 .. V_i`` this is ``1/K_1 * ... * 1/K_{i-1}`` where
    ``K_j = |N(V_1, ..., V_j)|``. A path with a chord (two non-consecutive
    vertices that are lattice neighbours) is impossible and gets 0: the
    earlier vertex would have to point past a larger neighbour.
    """
    path = path if isinstance(path, LatticePath) else LatticePath(path)
    ks = k_sequence(path, dims)
    if has_chord(path):
        return Fraction(0)
    p = Fraction(1)
    for k in ks[:-1]:
        p /= k
    return p


def _closed_size(cells: Iterable[Coord], dims: GridDims) -> int:
    out = set()
    for c in cells:
        out.add(c)
        out |= neighbors(c, dims)
    return len(out)


def sink_probability(v, dims: GridDims) -> Fraction:
    return Fraction(1, len(neighbors(v, dims)) + 1)


def multi_sink_probability(vertices: Iterable, dims: GridDims,
                           cap: int = DEFAULT_SINK_SET_CAP) -> Fraction:
    """Probability that every vertex in the set is a sink.

    Sums, over every relative order of the chosen labels, the product of
    ``1/K_j`` where ``K_j`` is the closed-neighbourhood size of the ``j``
    smallest-labeled vertices. The sum over ``i!`` orders is folded into a
    recursion over subsets, which gives the same total in ``O(2^i i)``.
    Lattice-adjacent vertices cannot both be sinks, so that case is 0.
    """
    verts = sorted({dims.require(v) for v in vertices})
    if not verts:
        raise InputError("need at least one vertex")
    if len(verts) > cap:
        raise ResourceCapError(
            f"{len(verts)} vertices exceed the sink-set cap of {cap}", cap=cap
        )
    for i, a in enumerate(verts):
        for b in verts[i + 1:]:
            if squared_distance(a, b) == 1:
                return Fraction(0)

    k = len(verts)
    # f[S]: sum over orders of S of prod 1/|N(prefix)|; the largest label of S is last.
    f = [Fraction(0)] * (1 << k)
    f[0] = Fraction(1)
    for mask in range(1, 1 << k):
        members = [verts[j] for j in range(k) if mask >> j & 1]
        acc = sum((f[mask & ~(1 << j)] for j in range(k) if mask >> j & 1), Fraction(0))
        f[mask] = acc / _closed_size(members, dims)
    return f[-1]


def sinks_independent(a, b, dims: GridDims) -> bool:
    """Whether "a is a sink" and "b is a sink" are independent events.

    They are exactly when the two cells are more than distance 2 apart.
    """
    a, b = dims.require(a), dims.require(b)
    if a == b:
        raise InputError("need two distinct vertices")
    return squared_distance(a, b) > 4


def sink_covariance(a, b, dims: GridDims) -> Fraction:
    a, b = dims.require(a), dims.require(b)
    if a == b:
        raise InputError("need two distinct vertices")
    na, nb = neighbors(a, dims), neighbors(b, dims)
    ka, kb = len(na) + 1, len(nb) + 1
    if b in na:
        return Fraction(-1, ka * kb)
    shared = len(na & nb)
    if shared == 0:
        return Fraction(0)
    return Fraction(shared, (ka + kb - shared) * ka * kb)


def _require_min(dims: GridDims, lo: int, what: str) -> None:
    if dims.m < lo or dims.n < lo:
        raise DomainError(
            f"the {what} closed form applies only when m >= {lo} and n >= {lo}; got {dims}"
        )


def expected_sinks(dims: GridDims) -> Fraction:
    """``mn/5 + (m+n)/10 + 2/15``, valid for ``m, n >= 3``."""
    _require_min(dims, 3, "expected sink count")
    m, n = dims.m, dims.n
    return Fraction(m * n, 5) + Fraction(m + n, 10) + Fraction(2, 15)


def variance_sinks_closed(dims: GridDims) -> Fraction:
    """``13mn/225 + (m+n)/150 + 52/1575``, valid for ``m, n >= 6``."""
    _require_min(dims, 6, "sink-count variance")
    m, n = dims.m, dims.n
    return Fraction(13 * m * n, 225) + Fraction(m + n, 150) + Fraction(52, 1575)


def pairwise_sink_variance(dims: GridDims) -> Fraction:
    """Bernoulli variances plus all pairwise covariances, with no size restriction."""
    total = Fraction(0)
    for v in dims.cells():
        p = sink_probability(v, dims)
        total += p * (1 - p)
        # covariance vanishes beyond distance 2
        for dr in range(-2, 3):
            for dc in range(-2, 3):
                w = (v.row + dr, v.col + dc)
                if (dr or dc) and dr * dr + dc * dc <= 4 and w in dims:
                    total += sink_covariance(v, w, dims)
    return total


def variance_sinks_by_pairs(dims: GridDims) -> Fraction:
    _require_min(dims, 3, "pairwise sink-count variance")
    return pairwise_sink_variance(dims)


def connectivity_lower_bound(a, b, dims: GridDims,
                             cap: int = DEFAULT_PATH_CAP) -> ConnectivityBound:
    """Lower bounds on the probability that the hill climb from ``a`` passes ``b``.

    ``count_times_min`` is the number of shortest paths times the least likely
    one's probability. ``sum_over_paths`` adds the shortest paths' exact
    probabilities, which is valid because at most one of them can be present
    (every vertex has out-degree at most one).
    """
    paths = monotone_paths(a, b, dims, cap=cap)
    probs = [path_probability(p, dims) for p in paths]
    low = min(probs)
    return ConnectivityBound(
        shortest_length=paths[0].edges,
        path_count=len(paths),
        min_path_prob=low,
        count_times_min=len(paths) * low,
        sum_over_paths=sum(probs, Fraction(0)),
    )


def _central_binom(l: int) -> int:
    return comb(l, (l + 1) // 2)


def component_size_bound(dims: GridDims) -> Fraction:
    """Upper bound on the expected basin size, for ``M = max(m, n)``.

    Evaluates ``sum_{n=1}^{M} 4n sum_{l=n}^{M^2} binom(l, ceil(l/2)) prod_{i=1}^{l} 1/(2+i)``
    exactly. The product equals ``2/(l+2)!``, so everything is put over the
    common denominator ``(M^2+2)!`` and summed as integers.
    """
    M = dims.M
    top = M * M
    # scale[l] = (top+2)! / (l+2)!
    scale = [0] * (top + 1)
    s = 1
    for l in range(top, 0, -1):
        scale[l] = s
        s *= l + 2
    denom = s * 2  # (top+2)!, since s = (top+2)!/2 after the loop
    suffix = 0
    total = 0
    suffixes = [0] * (top + 2)
    for l in range(top, 0, -1):
        suffix += 2 * _central_binom(l) * scale[l]
        suffixes[l] = suffix
    for n in range(1, M + 1):
        total += 4 * n * suffixes[n]
    return Fraction(total, denom)


def _series_term(l: int) -> Fraction:
    fact = 1
    for i in range(3, l + 3):
        fact *= i
    return Fraction(_central_binom(l), fact)


def series_bound(eps) -> SeriesBoundResult:
    """Certified enclosure of ``sum_{n>=1} 4n b_n``, ``b_n = sum_{l>=n} t_l``.

    ``t_l = binom(l, ceil(l/2)) prod_{i=1}^{l} 1/(2+i)``. Inner sums stop at
    ``l = L``; the remainder is bounded using ``t_{l+1}/t_l <= 2/(l+3)``,
    giving ``sum_{l>L} t_l <= t_L * 2/(L+1)``. Outer terms stop at ``n = N``
    (never below 2), and the remainder is bounded by ``b_{n+1} <= (2/3) b_n``
    for ``n >= 2``, which gives ``sum_{n>N} 4n b_n <= 4 b_N (2N + 6)``.
    """
    try:
        eps = Fraction(eps)
    except (TypeError, ValueError):
        raise InputError(f"tolerance must be a positive number, got {eps!r}") from None
    if eps <= 0:
        raise InputError("tolerance must be positive")

    terms = [Fraction(0)]  # 1-based
    N = 2
    while True:
        L = 2 * N + 8
        while len(terms) <= L:
            terms.append(_series_term(len(terms)))
        suffix = [Fraction(0)] * (L + 2)
        for l in range(L, 0, -1):
            suffix[l] = suffix[l + 1] + terms[l]
        inner_tail = terms[L] * Fraction(2, L + 1)
        truncated = sum((4 * n * suffix[n] for n in range(1, N + 1)), Fraction(0))
        b_N_upper = suffix[N] + inner_tail
        tail = 2 * N * (N + 1) * inner_tail + 4 * b_N_upper * (2 * N + 6)
        if tail <= eps:
            return SeriesBoundResult(
                truncated_value=truncated,
                tail_bound=tail,
                certified_upper=truncated + tail,
                terms_used=N,
                inner_terms=L,
            )
        N += 1
