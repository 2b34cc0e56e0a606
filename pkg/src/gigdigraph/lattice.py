"""Geometry of the m x n integer lattice.

Coordinates are 1-based ``(row, col)`` pairs with row 1 at the top. Adjacency
is the von Neumann neighbourhood (north, south, east, west); there are no
diagonal edges and no wrap-around.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, NamedTuple

from .errors import InputError, ResourceCapError

__all__ = [
    "Coord",
    "GridDims",
    "LatticePath",
    "neighbors",
    "closed_neighborhood",
    "k_sequence",
    "turns",
    "monotone_paths",
    "squared_distance",
    "has_chord",
    "parse_dims",
    "parse_coord",
    "parse_coords",
    "DEFAULT_PATH_CAP",
]

DEFAULT_PATH_CAP = 10**6

_STEPS = ((-1, 0), (1, 0), (0, 1), (0, -1))


class Coord(NamedTuple):
    row: int
    col: int

    def __str__(self):
        return f"{self.row},{self.col}"


@dataclass(frozen=True, order=True)
class GridDims:
    m: int
    n: int

    def __post_init__(self):
        for name in ("m", "n"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InputError(f"grid dimension {name} must be a positive integer, got {value!r}")

    @property
    def M(self) -> int:
        return max(self.m, self.n)

    @property
    def size(self) -> int:
        return self.m * self.n

    def __contains__(self, c) -> bool:
        return 1 <= c[0] <= self.m and 1 <= c[1] <= self.n

    def cells(self) -> list[Coord]:
        """All cells in row-major order; position in the list is the cell index."""
        return [Coord(r, c) for r in range(1, self.m + 1) for c in range(1, self.n + 1)]

    def index(self, c) -> int:
        self.require(c)
        return (c[0] - 1) * self.n + (c[1] - 1)

    def coord(self, idx: int) -> Coord:
        r, c = divmod(idx, self.n)
        return Coord(r + 1, c + 1)

    def require(self, c) -> Coord:
        if c not in self:
            raise InputError(f"coordinate {tuple(c)} is outside the {self.m}x{self.n} grid")
        return Coord(*c)

    def __str__(self):
        return f"{self.m}x{self.n}"


class LatticePath:
    """An ordered, self-avoiding sequence of unit steps.

    Validation of the step structure happens on construction; bounds are
    checked against a grid with :meth:`check`.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices: Iterable):
        verts = tuple(Coord(*v) for v in vertices)
        if not verts:
            raise InputError("a path needs at least one vertex")
        seen = set()
        for i, v in enumerate(verts):
            if v in seen:
                raise InputError(f"path revisits {v} at position {i + 1}")
            seen.add(v)
            if i and squared_distance(verts[i - 1], v) != 1:
                raise InputError(f"step {i} from {verts[i - 1]} to {v} is not a unit step")
        object.__setattr__(self, "vertices", verts)

    def __setattr__(self, name, value):
        raise AttributeError("LatticePath is immutable")

    def check(self, dims: GridDims) -> "LatticePath":
        for v in self.vertices:
            dims.require(v)
        return self

    def __len__(self):
        return len(self.vertices)

    def __iter__(self) -> Iterator[Coord]:
        return iter(self.vertices)

    def __getitem__(self, i):
        return self.vertices[i]

    def __eq__(self, other):
        return isinstance(other, LatticePath) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return "LatticePath(" + " ".join(str(v) for v in self.vertices) + ")"

    @property
    def edges(self) -> int:
        return len(self.vertices) - 1


def _as_path(path) -> LatticePath:
    return path if isinstance(path, LatticePath) else LatticePath(path)


@lru_cache(maxsize=64)
def neighbor_table(dims: GridDims) -> tuple[tuple[int, ...], ...]:
    """Open neighbourhoods by cell index, for the vectorised kernels."""
    table = []
    for r, c in dims.cells():
        table.append(tuple(
            (r + dr - 1) * dims.n + (c + dc - 1)
            for dr, dc in _STEPS
            if 1 <= r + dr <= dims.m and 1 <= c + dc <= dims.n
        ))
    return tuple(table)


def neighbors(c, dims: GridDims) -> frozenset[Coord]:
    c = dims.require(c)
    return frozenset(
        Coord(c.row + dr, c.col + dc)
        for dr, dc in _STEPS
        if (c.row + dr, c.col + dc) in dims
    )


def closed_neighborhood(W: Iterable, dims: GridDims) -> frozenset[Coord]:
    """``W`` together with every lattice neighbour of its members."""
    W = [dims.require(w) for w in W]
    if not W:
        raise InputError("closed neighbourhood of an empty set is undefined")
    out = set(W)
    for w in W:
        out |= neighbors(w, dims)
    return frozenset(out)


def k_sequence(path, dims: GridDims) -> list[int]:
    """Sizes of the closed neighbourhoods of the growing path prefixes.

    ``result[j-1]`` is ``|N(V_1, ..., V_j)|``.
    """
    path = _as_path(path).check(dims)
    covered: set[Coord] = set()
    ks = []
    for v in path:
        covered.add(v)
        covered |= neighbors(v, dims)
        ks.append(len(covered))
    return ks


def has_chord(path) -> bool:
    """True if two path vertices that are not consecutive are lattice neighbours.

    A chorded path can never be realised by a greatest-increase digraph.
    """
    verts = _as_path(path).vertices
    pos = {v: i for i, v in enumerate(verts)}
    for i, (r, c) in enumerate(verts):
        for dr, dc in _STEPS:
            j = pos.get((r + dr, c + dc))
            if j is not None and abs(j - i) > 1:
                return True
    return False


def turns(path) -> list[int]:
    """1-based positions of vertices whose incoming and outgoing edges are perpendicular."""
    verts = _as_path(path).vertices
    out = []
    for p in range(1, len(verts) - 1):
        a, b, c = verts[p - 1], verts[p], verts[p + 1]
        d1 = (b.row - a.row, b.col - a.col)
        d2 = (c.row - b.row, c.col - b.col)
        if d1[0] * d2[0] + d1[1] * d2[1] == 0:
            out.append(p + 1)
    return out


def monotone_paths(a, b, dims: GridDims, cap: int = DEFAULT_PATH_CAP) -> list[LatticePath]:
    """Every shortest lattice path from ``a`` to ``b``.

    Raises
    ------
    InputError
        If ``a == b`` or either endpoint is off the grid.
    ResourceCapError
        If the number of paths, ``binom(|drow| + |dcol|, |drow|)``, exceeds ``cap``.
    """
    a, b = dims.require(a), dims.require(b)
    if a == b:
        raise InputError("monotone paths need distinct endpoints")
    dr, dc = b.row - a.row, b.col - a.col
    count = comb(abs(dr) + abs(dc), abs(dr))
    if count > cap:
        raise ResourceCapError(
            f"{count} shortest paths from {a} to {b} exceed the path cap of {cap}", cap=cap
        )
    vstep = (1 if dr > 0 else -1, 0)
    hstep = (0, 1 if dc > 0 else -1)
    out = []

    def extend(prefix: list[Coord], rows_left: int, cols_left: int):
        if not rows_left and not cols_left:
            out.append(LatticePath(prefix))
            return
        last = prefix[-1]
        if rows_left:
            prefix.append(Coord(last.row + vstep[0], last.col))
            extend(prefix, rows_left - 1, cols_left)
            prefix.pop()
        if cols_left:
            prefix.append(Coord(last.row, last.col + hstep[1]))
            extend(prefix, rows_left, cols_left - 1)
            prefix.pop()

    extend([a], abs(dr), abs(dc))
    return out


def squared_distance(a, b) -> int:
    return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2


def parse_dims(text: str) -> GridDims:
    """Parse ``"MxN"`` (``x`` or ``X``)."""
    parts = text.lower().replace("×", "x").split("x")
    if len(parts) != 2:
        raise InputError(f"dimensions must look like MxN, got {text!r}")
    try:
        return GridDims(int(parts[0]), int(parts[1]))
    except ValueError:
        raise InputError(f"dimensions must look like MxN, got {text!r}") from None


def parse_coord(token: str) -> Coord:
    parts = token.strip().strip("()").split(",")
    if len(parts) != 2:
        raise InputError(f"coordinate must look like row,col, got {token!r}")
    try:
        return Coord(int(parts[0]), int(parts[1]))
    except ValueError:
        raise InputError(f"coordinate must look like row,col, got {token!r}") from None


def parse_coords(text: str) -> list[Coord]:
    """Whitespace-separated ``row,col`` tokens."""
    tokens = text.split()
    if not tokens:
        raise InputError("expected at least one row,col coordinate")
    return [parse_coord(t) for t in tokens]

