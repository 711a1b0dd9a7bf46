"""Shared fixture graphs.

delta:  one vertex, one loop per color, commuting square; a single infinite path.
mono2:  one vertex, blue loops b1 b2, red loop r, identity squares.
flip2:  like mono2 but the red loop swaps b1 and b2.
bflip:  two vertices u, v with blue loops e, f and red edges h: v->u, g: u->v,
        squares e h = h f and f g = g e; one infinite path per vertex.
cyc7:   seven blue loops cyclically permuted by the red loop; single-coordinate
        shifts of a cycle path have period 7, which defeats naive shift bounds.
broken_cube: rank 3, two loops per color, squares bijective but one face
        mismatched so tri-colored words resolve inconsistently.
"""

import pytest

from kgraphrep import Degree, Edge, Skeleton, Square, validate


def _single_vertex(rank, edges, squares):
    return Skeleton(rank, ("w",),
                    tuple(Edge(n, c, "w", "w") for n, c in edges),
                    tuple(Square(l, r) for l, r in squares))


def delta_skeleton():
    return _single_vertex(2, [("b", 1), ("r", 2)], [(("b", "r"), ("r", "b"))])


def mono2_skeleton():
    return _single_vertex(2, [("b1", 1), ("b2", 1), ("r", 2)],
                          [(("b1", "r"), ("r", "b1")),
                           (("b2", "r"), ("r", "b2"))])


def flip2_skeleton():
    return _single_vertex(2, [("b1", 1), ("b2", 1), ("r", 2)],
                          [(("b1", "r"), ("r", "b2")),
                           (("b2", "r"), ("r", "b1"))])


def bflip_skeleton():
    return Skeleton(2, ("u", "v"),
                    (Edge("e", 1, "u", "u"), Edge("f", 1, "v", "v"),
                     Edge("h", 2, "v", "u"), Edge("g", 2, "u", "v")),
                    (Square(("e", "h"), ("h", "f")),
                     Square(("f", "g"), ("g", "e"))))


def cyc7_skeleton():
    edges = [(f"p{i}", 1) for i in range(1, 8)] + [("r", 2)]
    squares = [((f"p{i}", "r"), ("r", f"p{i % 7 + 1}")) for i in range(1, 8)]
    return _single_vertex(2, edges, squares)


def broken_cube_skeleton():
    edges = [("a1", 1), ("a2", 1), ("b1", 2), ("b2", 2), ("c1", 3), ("c2", 3)]
    flip = {"1": "2", "2": "1"}
    squares = []
    # colors (1,2): crossing a b-loop always swaps the a-index
    for i in "12":
        for j in "12":
            squares.append(((f"a{i}", f"b{j}"), (f"b{j}", f"a{flip[i]}")))
    # colors (1,3): a2 twists the c-index, a1 commutes
    squares.append((("a1", "c1"), ("c1", "a1")))
    squares.append((("a1", "c2"), ("c2", "a1")))
    squares.append((("a2", "c1"), ("c2", "a2")))
    squares.append((("a2", "c2"), ("c1", "a2")))
    # colors (2,3): identity
    for i in "12":
        for j in "12":
            squares.append(((f"b{i}", f"c{j}"), (f"c{j}", f"b{i}")))
    return _single_vertex(3, edges, squares)


@pytest.fixture(scope="session")
def delta():
    return validate(delta_skeleton())


@pytest.fixture(scope="session")
def mono2():
    return validate(mono2_skeleton())


@pytest.fixture(scope="session")
def flip2():
    return validate(flip2_skeleton())


@pytest.fixture(scope="session")
def bflip():
    return validate(bflip_skeleton())


@pytest.fixture(scope="session")
def cyc7():
    return validate(cyc7_skeleton())


@pytest.fixture
def d22():
    return Degree((2, 2))
