"""Greatest Increase Grid digraphs built from labelings.

Each cell points at the neighbour carrying the largest label in its closed
neighbourhood, unless that largest label is its own, in which case the cell
is a sink. Following the out-edges from any cell is a steepest-ascent hill
climb, and the cells that reach a given sink form its basin (component).

Besides the object API there are batch kernels (:func:`batch_successors`,
:func:`batch_roots`, :func:`batch_component_sizes`) that operate on whole
arrays of labelings at once. The enumeration oracle and the Monte Carlo
simulator are built on those.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import InputError
from .lattice import Coord, GridDims, LatticePath, neighbor_table

__all__ = [
    "Labeling",
    "GigDigraph",
    "Component",
    "build_gig",
    "sinks",
    "out_path",
    "components",
    "contains_path",
    "batch_successors",
    "batch_roots",
    "batch_component_sizes",
]


@dataclass(frozen=True)
class Labeling:
    """A bijection from the cells of ``dims`` onto ``1..mn``.

    ``values`` is the row-major tuple of labels, so ``values[dims.index(c)]``
    is the label at ``c``.
    """

    dims: GridDims
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        validate_labels(self.dims, self.values)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Labeling":
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise InputError("labeling has no cells")
        width = len(rows[0])
        for i, r in enumerate(rows, start=1):
            if len(r) != width:
                raise InputError(f"row {i} has {len(r)} entries, expected {width}")
        return cls(GridDims(len(rows), width), tuple(v for r in rows for v in r))

    def label(self, c) -> int:
        return self.values[self.dims.index(c)]

    def rows(self) -> list[list[int]]:
        n = self.dims.n
        return [list(self.values[i:i + n]) for i in range(0, len(self.values), n)]

    def cell_of(self, label: int) -> Coord:
        return self.dims.coord(self.values.index(label))


def validate_labels(dims: GridDims, values: Sequence[int]) -> None:
    """Raise :class:`InputError` naming every offending cell."""
    mn = dims.size
    if len(values) == mn and set(values) == set(range(1, mn + 1)):
        return
    if len(values) != mn:
        raise InputError(f"expected {mn} labels for a {dims} grid, got {len(values)}")
    problems = []
    first_seen: dict[int, Coord] = {}
    for idx, v in enumerate(values):
        c = dims.coord(idx)
        if not 1 <= v <= mn:
            problems.append(f"{c}: label {v} outside 1..{mn}")
        elif v in first_seen:
            problems.append(f"{c}: label {v} duplicates {first_seen[v]}")
        else:
            first_seen[v] = c
    if problems:
        raise InputError("invalid labeling: " + "; ".join(problems))


@dataclass(frozen=True)
class GigDigraph:
    labeling: Labeling
    out_edge: Mapping[Coord, Optional[Coord]] = field(repr=False)

    @property
    def dims(self) -> GridDims:
        return self.labeling.dims

    def edges(self) -> list[tuple[Coord, Coord]]:
        return [(u, v) for u, v in self.out_edge.items() if v is not None]


@dataclass(frozen=True)
class Component:
    sink: Coord
    members: frozenset[Coord]

    @property
    def size(self) -> int:
        return len(self.members)


@lru_cache(maxsize=64)
def _cells(dims: GridDims) -> tuple[Coord, ...]:
    return tuple(dims.cells())


def build_gig(lab: Labeling) -> GigDigraph:
    """Point every cell at the largest label in its closed neighbourhood, if not its own."""
    cells = _cells(lab.dims)
    vals = lab.values
    out: dict[Coord, Optional[Coord]] = {}
    for i, nbrs in enumerate(neighbor_table(lab.dims)):
        best = i
        for j in nbrs:
            if vals[j] > vals[best]:
                best = j
        out[cells[i]] = None if best == i else cells[best]
    return GigDigraph(lab, out)


def sinks(g: GigDigraph) -> frozenset[Coord]:
    return frozenset(u for u, v in g.out_edge.items() if v is None)


def out_path(g: GigDigraph, v) -> LatticePath:
    """The hill climb from ``v``: follow out-edges until a sink."""
    v = g.dims.require(v)
    walk = [v]
    nxt = g.out_edge[v]
    while nxt is not None:
        walk.append(nxt)
        nxt = g.out_edge[nxt]
    return LatticePath(walk)


def components(g: GigDigraph) -> list[Component]:
    """Basins of attraction, one per sink, ordered by sink coordinate.

    The sink is counted as a member of its own component.
    """
    terminal: dict[Coord, Coord] = {}
    for u in g.dims.cells():
        trail = []
        cur = u
        while cur not in terminal and g.out_edge[cur] is not None:
            trail.append(cur)
            cur = g.out_edge[cur]
        root = terminal.get(cur, cur)
        terminal[cur] = root
        for t in trail:
            terminal[t] = root
    basins: dict[Coord, set[Coord]] = {}
    for u, s in terminal.items():
        basins.setdefault(s, set()).add(u)
    return [Component(s, frozenset(m)) for s, m in sorted(basins.items())]


def contains_path(g: GigDigraph, p) -> bool:
    p = p if isinstance(p, LatticePath) else LatticePath(p)
    return all(g.out_edge.get(u) == v for u, v in zip(p.vertices, p.vertices[1:]))


# --- batch kernels ---------------------------------------------------------
#
# Cells are row-major indices. A successor array has one row per labeling;
# entry [k, i] is the index of the cell that cell i points at, or i itself
# when i is a sink.


def batch_successors(labels: np.ndarray, dims: GridDims) -> np.ndarray:
    """Successor array for a ``(N, mn)`` array of labelings (any distinct values)."""
    labels = np.asarray(labels)
    if labels.ndim != 2 or labels.shape[1] != dims.size:
        raise InputError(f"expected an (N, {dims.size}) label array, got shape {labels.shape}")
    dtype = np.int8 if dims.size < 128 else np.int32
    succ = np.empty(labels.shape, dtype=dtype)
    for i, nbrs in enumerate(neighbor_table(dims)):
        cand = np.array((i,) + nbrs, dtype=np.intp)
        succ[:, i] = cand[np.argmax(labels[:, cand], axis=1)]
    return succ


def batch_roots(succ: np.ndarray) -> np.ndarray:
    """Sink reached from each cell, by pointer doubling."""
    root = succ.astype(np.intp)
    steps = max(1, int(succ.shape[1]).bit_length())
    for _ in range(steps):
        root = np.take_along_axis(root, root, axis=1)
    return root


def batch_component_sizes(root: np.ndarray) -> np.ndarray:
    """``(N, mn)`` array: entry [k, s] is the size of the basin of cell s (0 if not a sink)."""
    n_rows, mn = root.shape
    flat = root + (np.arange(n_rows, dtype=np.intp) * mn)[:, None]
    return np.bincount(flat.ravel(), minlength=n_rows * mn).reshape(n_rows, mn)


def batch_sink_mask(succ: np.ndarray) -> np.ndarray:
    return succ == np.arange(succ.shape[1], dtype=succ.dtype)


def labeling_from_array(row: Iterable[int], dims: GridDims) -> Labeling:
    return Labeling(dims, tuple(int(v) for v in row))
