"""Module that defines all commonly used graphs for testing."""

from boxconvex import Graph

SINGLE_VERTEX = Graph.of(1)

SINGLE_EDGE = Graph.of(2, [(0, 1)])

EDGELESS_3 = Graph.of(3)

PATH_3 = Graph.of(3, [(0, 1), (1, 2)])

TRIANGLE = Graph.of(3, [(0, 1), (1, 2), (0, 2)])

STAR_4 = Graph.of(4, [(0, 1), (0, 2), (0, 3)])

CYCLE_4 = Graph.of(4, [(0, 1), (1, 2), (2, 3), (0, 3)])

COMPLETE_4 = Graph.of(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])

#: maximum cut sizes of the graphs above
MAX_CUTS = {
    SINGLE_VERTEX: 0,
    SINGLE_EDGE: 1,
    EDGELESS_3: 0,
    PATH_3: 2,
    TRIANGLE: 2,
    STAR_4: 3,
    CYCLE_4: 4,
    COMPLETE_4: 4,
}
