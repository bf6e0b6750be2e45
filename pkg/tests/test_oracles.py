# pylint: disable=missing-function-docstring,missing-module-docstring
import logging
from fractions import Fraction
from typing import Any
from typing import List
from typing import Tuple

import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from boxconvex import Graph
from boxconvex import SymMatrix
from boxconvex import build_gadget
from boxconvex import cut_size
from boxconvex import gap_check
from boxconvex import lemma_bound_check
from boxconvex import max_cut_bruteforce
from boxconvex import verify_reduction
from boxconvex.errors import BadIndicatorError
from boxconvex.errors import BadInputError
from boxconvex.errors import BadKError
from boxconvex.errors import TooLargeError
from boxconvex.gadgets import Cut
from boxconvex.gadgets import all_graphs
from boxconvex.gadgets import gadget_matrix
from boxconvex.linalg import invert
from boxconvex.oracles import GAP_CHECK_LIMIT
from boxconvex.oracles import MAX_CUT_LIMIT
from boxconvex.oracles import REDUCTION_LIMIT
from boxconvex.oracles import all_cut_sizes
from boxconvex.oracles import hty_bound_check
from boxconvex.oracles import hty_gershgorin_bound
from boxconvex.oracles import neumann_inverse

from .generators import graphs
from .generators import vectors
from .graphs import MAX_CUTS
from .graphs import SINGLE_EDGE
from .graphs import TRIANGLE

GRAPHS = list(MAX_CUTS)


def test_max_cut_of_known_graphs(auto_graph: Graph) -> None:
    cut = max_cut_bruteforce(auto_graph)
    assert cut.size == MAX_CUTS[auto_graph]
    assert cut.indicator[0] == 1
    assert cut_size(auto_graph, cut.indicator) == cut.size
    assert max(all_cut_sizes(auto_graph)) == cut.size


def test_max_cut_picks_the_smallest_indicator() -> None:
    assert max_cut_bruteforce(TRIANGLE) == Cut((1, -1, -1), 2)
    assert max_cut_bruteforce(Graph.of(1)) == Cut((1,), 0)
    assert max_cut_bruteforce(TRIANGLE).to_json() == {
        "size": 2,
        "indicator": [1, -1, -1],
    }


def test_cut_sizes_are_symmetric() -> None:
    # every cut is counted twice among all 2^n indicators
    for graph in all_graphs(4):
        sizes = all_cut_sizes(graph)
        assert len(sizes) == 16
        assert sizes == sizes[::-1]


@pytest.mark.parametrize(
    "indicator",
    [[1, 0, 1], [1, -1], [1, -1, 1, 1], [True, -1, 1], [1, "-1", 1]],
)
def test_bad_indicator(indicator: List[Any]) -> None:
    with pytest.raises(BadIndicatorError):
        cut_size(TRIANGLE, indicator)


def test_size_guards() -> None:
    with pytest.raises(TooLargeError):
        max_cut_bruteforce(Graph.of(MAX_CUT_LIMIT + 1))
    with pytest.raises(TooLargeError):
        gap_check(build_gadget(Graph.of(GAP_CHECK_LIMIT + 1), 1))
    with pytest.raises(TooLargeError):
        verify_reduction(Graph.of(REDUCTION_LIMIT + 1), 1)


def test_lemma_bound_on_single_edge() -> None:
    report = lemma_bound_check(SINGLE_EDGE.adjacency(), (1, -1))
    assert report
    assert report.value == Fraction(729, 52)
    assert report.lower == Fraction(55, 4)
    assert report.upper == Fraction(57, 4)
    assert report.to_json() == {
        "holds": True,
        "lower": "55/4",
        "value": "729/52",
        "upper": "57/4",
    }


@settings(max_examples=1000)
@given(
    st.integers(1, 10).flatmap(
        lambda n: st.tuples(graphs(min_n=n, max_n=n), vectors(n, 6, 6))
    )
)
def test_lemma_bound_for_random_points(
    instance: Tuple[Graph, Tuple[Fraction, ...]],
) -> None:
    graph, point = instance
    assert lemma_bound_check(graph.adjacency(), point).holds


@pytest.mark.parametrize(
    "matrix,point",
    [
        ([[0, 2], [2, 0]], [1, 1]),
        ([[0, 1], [1, 0]], [1]),
        ([[0, 1], [1, 0]], [2, 1]),
        ([[0, 1], [1, 0]], ["3/2", 0]),
    ],
)
def test_lemma_bad_input(matrix: List[List[int]], point: List[Any]) -> None:
    with pytest.raises(BadInputError):
        lemma_bound_check(SymMatrix.from_rows(matrix), point)


def test_neumann_inverse() -> None:
    adjacency = TRIANGLE.adjacency()
    assert neumann_inverse(adjacency, 1) == SymMatrix.identity(3).scaled(16)
    assert neumann_inverse(adjacency, 2) == (
        SymMatrix.identity(3).scaled(64) - adjacency
    ).scaled(Fraction(1, 4))
    exact = invert(gadget_matrix(adjacency))
    errors = [
        max(
            abs(a - b)
            for row, exact_row in zip(
                neumann_inverse(adjacency, terms).entries, exact.entries
            )
            for a, b in zip(row, exact_row)
        )
        for terms in range(1, 6)
    ]
    assert errors == sorted(errors, reverse=True)
    assert errors[-1] < Fraction(1, 10**5)

    with pytest.raises(BadInputError):
        neumann_inverse(adjacency, 0)


def test_gap_check_on_single_edge() -> None:
    report = gap_check(build_gadget(SINGLE_EDGE, 1))
    assert report.max_value == Fraction(5103, 364)
    assert report.lower_threshold == Fraction(53, 4)
    assert report.upper_threshold == Fraction(55, 4)
    assert not report.in_forbidden_band
    assert report.max_value >= report.upper_threshold

    report = gap_check(build_gadget(SINGLE_EDGE, 2))
    assert report.max_value <= report.lower_threshold
    assert report.to_json()["in_forbidden_band"] is False


def test_gap_never_lands_in_the_band() -> None:
    for n in range(1, 5):
        for graph in all_graphs(n):
            max_cut = max_cut_bruteforce(graph).size
            for k in range(1, n * n + 1):
                report = gap_check(build_gadget(graph, k))
                assert not report.in_forbidden_band
                if max_cut >= k:
                    assert report.max_value >= report.upper_threshold
                else:
                    assert report.max_value <= report.lower_threshold


def test_hty_bound() -> None:
    assert hty_gershgorin_bound(2, (1, 1, 1)) == 16
    assert hty_bound_check(2, (1, 1, 1))
    assert hty_gershgorin_bound(1, (0, 0)) == 0

    with pytest.raises(BadInputError):
        hty_bound_check(2, (1, 1))
    with pytest.raises(BadInputError):
        hty_bound_check(1, ("3/2", 0))


@pytest.mark.parametrize("n", range(1, 9))
@settings(max_examples=1000)
@given(data=st.data())
def test_hty_bound_for_random_points(n: int, data: st.DataObject) -> None:
    point = data.draw(vectors(n + 1, 8, 8))
    assert hty_bound_check(n, point)
    assert hty_gershgorin_bound(n, point) <= 8 * n


def test_verify_reduction_on_single_edge() -> None:
    report = verify_reduction(SINGLE_EDGE, 1)
    assert report.consistent
    assert not report.interval_psd
    assert not report.cubic_convex
    assert report.witness is not None
    assert report.witness.value <= -report.eta
    raw = report.to_json()
    assert raw["max_cut"] == 1
    assert raw["iff_holds"] is True
    assert raw["witness"]["point"] == ["1", "-1", "0", "0", "0"]

    report = verify_reduction(SINGLE_EDGE, 2)
    assert report.consistent
    assert report.interval_psd and report.cubic_convex
    assert report.witness is None
    assert report.to_json()["witness"] is None


def test_verify_reduction_bad_k() -> None:
    with pytest.raises(BadKError):
        verify_reduction(SINGLE_EDGE, 5)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_reduction_is_consistent_for_all_small_graphs(n: int) -> None:
    for graph in all_graphs(n):
        max_cut = max_cut_bruteforce(graph).size
        for k in range(1, n * n + 1):
            report = verify_reduction(graph, k, threads=1)
            assert report.consistent
            assert report.interval_psd == report.cubic_convex == (max_cut < k)


@pytest.mark.parametrize("k", range(1, 17))
def test_reduction_is_consistent_for_all_graphs_on_four_vertices(k: int) -> None:
    for graph in all_graphs(4):
        max_cut = max_cut_bruteforce(graph).size
        report = verify_reduction(graph, k, threads=1)
        assert report.consistent
        assert report.interval_psd == report.cubic_convex == (max_cut < k)


@settings(max_examples=200)
@given(graphs(min_n=5, max_n=6), st.booleans())
def test_reduction_for_random_graphs(graph: Graph, above: bool) -> None:
    max_cut = max_cut_bruteforce(graph).size
    k = max_cut + 1 if above else max(max_cut, 1)
    report = verify_reduction(graph, k)
    assert report.consistent
    assert report.cubic_convex == (max_cut < k)


def test_consistent_reduction_logs_no_error(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.ERROR, logger="boxconvex"):
        assert verify_reduction(TRIANGLE, 2).consistent

    assert not [r for r in caplog.records if r.levelno >= logging.ERROR]
