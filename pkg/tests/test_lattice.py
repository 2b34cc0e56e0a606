from math import comb

import pytest
from hypothesis import given, strategies as st

from gigdigraph.errors import InputError, ResourceCapError
from gigdigraph.lattice import (
    Coord,
    GridDims,
    LatticePath,
    closed_neighborhood,
    has_chord,
    k_sequence,
    monotone_paths,
    neighbors,
    parse_coords,
    parse_dims,
    squared_distance,
    turns,
)

from conftest import P1, P2, P3


@pytest.mark.parametrize("cell, expected", [
    ((1, 1), {(1, 2), (2, 1)}),
    ((2, 2), {(1, 2), (2, 1), (2, 3), (3, 2)}),
    ((3, 2), {(3, 1), (3, 3), (2, 2)}),
])
def test_neighbors_3x3(g3, cell, expected):
    assert neighbors(cell, g3) == expected


def test_neighbors_rejects_out_of_bounds(g3):
    with pytest.raises(InputError):
        neighbors((0, 1), g3)
    with pytest.raises(InputError):
        neighbors((3, 4), g3)


def test_closed_neighborhood_examples(g3):
    assert closed_neighborhood([(2, 1)], g3) == {(2, 1), (1, 1), (2, 2), (3, 1)}
    assert len(closed_neighborhood([(2, 1), (2, 2)], g3)) == 7
    assert closed_neighborhood([(1, 1)], GridDims(1, 1)) == {(1, 1)}


def test_closed_neighborhood_empty():
    with pytest.raises(InputError):
        closed_neighborhood([], GridDims(2, 2))


def test_k_sequence_examples(g3):
    # (3,3) touches none of the three cells, so the last entry is 8
    assert k_sequence([(2, 1), (2, 2), (1, 2)], g3) == [4, 7, 8]
    assert k_sequence(P1, GridDims(5, 5))[:6] == [4, 7, 10, 13, 15, 18]
    assert k_sequence([(2, 2)], g3) == [5]


@pytest.mark.parametrize("bad", [
    [(1, 1), (2, 2)],            # diagonal step
    [(1, 1), (1, 2), (1, 1)],    # revisit
    [(1, 1), (1, 3)],            # jump
])
def test_invalid_paths(bad):
    with pytest.raises(InputError):
        LatticePath(bad)


def test_k_sequence_out_of_bounds(g3):
    with pytest.raises(InputError):
        k_sequence([(3, 3), (3, 4)], g3)


def test_turns():
    assert turns(P1) == [4]
    assert turns([(1, 1), (1, 2), (1, 3)]) == []
    assert turns([(1, 1), (1, 2)]) == []
    # every bend of a staircase is a turn: the north-then-east corner at
    # (3,2) counts as well as the east-then-north ones
    assert turns(P3) == [2, 3, 5]
    assert turns(P2) == [3, 4, 5]


def test_turns_match_k_reductions():
    # each turn at position p lowers K_{p+1}, K_{p+2}, ... by one relative to a
    # straight interior run 4, 7, 10, 13, 16, 19
    straight = [4, 7, 10, 13, 16, 19]
    dims = GridDims(5, 5)
    for path in (P1, P2, P3):
        ks = k_sequence(path, dims)[:6]
        expected = [k - sum(1 for t in turns(path) if t + 1 <= j) for j, k in enumerate(straight, 1)]
        assert ks == expected


def _brute_shortest_paths(a, b, dims):
    length = abs(a[0] - b[0]) + abs(a[1] - b[1])
    found = []

    def walk(prefix):
        if len(prefix) == length + 1:
            if prefix[-1] == b:
                found.append(tuple(prefix))
            return
        for w in neighbors(prefix[-1], dims):
            if w not in prefix:
                walk(prefix + [w])

    walk([Coord(*a)])
    return set(found)


def test_monotone_paths_examples():
    d5 = GridDims(5, 5)
    paths = monotone_paths((4, 1), (1, 4), d5)
    assert len(paths) == 20
    assert {p.vertices for p in paths} == _brute_shortest_paths((4, 1), (1, 4), d5)
    assert len(monotone_paths((1, 1), (1, 3), GridDims(3, 3))) == 1
    assert len(monotone_paths((2, 1), (1, 2), GridDims(3, 3))) == 2


def test_monotone_paths_errors(g3):
    with pytest.raises(InputError):
        monotone_paths((1, 1), (1, 1), g3)
    with pytest.raises(ResourceCapError, match="cap of 5"):
        monotone_paths((1, 1), (3, 3), g3, cap=5)


@pytest.mark.parametrize("m, n", [(m, n) for m in range(1, 6) for n in range(1, 6)])
def test_monotone_path_counts_exhaustive(m, n):
    dims = GridDims(m, n)
    cells = dims.cells()
    for a in cells:
        for b in cells:
            if a == b:
                continue
            paths = monotone_paths(a, b, dims)
            dr, dc = abs(a.row - b.row), abs(a.col - b.col)
            assert len(paths) == comb(dr + dc, dr)
            assert len(set(paths)) == len(paths)
            for p in paths:
                p.check(dims)
                assert p[0] == a and p[-1] == b and p.edges == dr + dc


def test_squared_distance():
    assert squared_distance((1, 1), (1, 2)) == 1
    assert squared_distance((1, 1), (2, 2)) == 2
    assert squared_distance((1, 1), (3, 2)) == 5


def test_chords():
    assert has_chord([(1, 1), (1, 2), (2, 2), (2, 1)])
    assert not has_chord(P1)
    assert not has_chord([(1, 1)])


def test_parsing():
    assert parse_dims("3x4") == GridDims(3, 4)
    assert parse_dims("3X4") == GridDims(3, 4)
    assert parse_coords("2,1 2,2\t1,2") == [(2, 1), (2, 2), (1, 2)]
    for bad in ("3", "ax3", "0x3"):
        with pytest.raises(InputError):
            parse_dims(bad)
    with pytest.raises(InputError):
        parse_coords("2;1")


dims_st = st.builds(GridDims, st.integers(1, 7), st.integers(1, 7))


@st.composite
def dims_and_cell(draw):
    d = draw(dims_st)
    return d, Coord(draw(st.integers(1, d.m)), draw(st.integers(1, d.n)))


@st.composite
def dims_and_walk(draw):
    d, start = draw(dims_and_cell())
    walk = [start]
    for _ in range(draw(st.integers(0, 10))):
        options = sorted(w for w in neighbors(walk[-1], d) if w not in walk)
        if not options:
            break
        walk.append(draw(st.sampled_from(options)))
    return d, LatticePath(walk)


@given(dims_and_cell(), dims_and_cell())
def test_neighbors_symmetric(x, y):
    d, a = x
    b = Coord(min(y[1].row, d.m), min(y[1].col, d.n))
    assert (b in neighbors(a, d)) == (a in neighbors(b, d))


@given(dims_and_cell())
def test_closed_neighborhood_size(x):
    d, c = x
    assert len(closed_neighborhood([c], d)) == len(neighbors(c, d)) + 1
    assert len(neighbors(c, d)) <= 4


@given(dims_and_walk())
def test_k_sequence_growth(x):
    d, path = x
    ks = k_sequence(path, d)
    assert all(0 <= b - a <= 3 for a, b in zip(ks, ks[1:]))
    if not has_chord(path):
        # the prefix that enters the path probability grows strictly
        head = ks[:-1]
        assert all(1 <= b - a <= 3 for a, b in zip(head, head[1:]))
