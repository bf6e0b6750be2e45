# pylint: disable=missing-function-docstring,missing-module-docstring
from fractions import Fraction
from typing import Tuple

import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from boxconvex import AffinePencil
from boxconvex import Box
from boxconvex import Polynomial
from boxconvex import SymMatrix
from boxconvex.errors import DegreeTooHighError
from boxconvex.errors import DimensionMismatchError
from boxconvex.errors import InputFormatError

from .generators import cubic_instances
from .generators import cubics
from .generators import vectors

X0 = Polynomial.variable(0, 2)
X1 = Polynomial.variable(1, 2)


def test_str() -> None:
    assert str(X0**2 * X1 + 3) == "x0^2*x1 + 3"
    assert str(Polynomial.zero(2)) == "0"
    assert str(X0 * Fraction(-1, 2)) == "-1/2*x0"


def test_arithmetic() -> None:
    assert (X0 + X1) * (X0 - X1) == X0**2 - X1**2
    assert 2 - X0 == -(X0 - 2)
    assert (X0 - X0) == Polynomial.zero(2)
    assert (X0 + X1) ** 0 == Polynomial.constant(1, 2)

    with pytest.raises(DimensionMismatchError):
        _ = X0 + Polynomial.variable(0, 1)


@pytest.mark.parametrize(
    "poly,degree",
    [
        (Polynomial.zero(2), 0),
        (Polynomial.constant(5, 2), 0),
        (X0 * X1, 2),
        (X0**2 * X1 + X1, 3),
        (X0**4 - 3 * X0**2, 4),
    ],
)
def test_degree(poly: Polynomial, degree: int) -> None:
    assert poly.degree == degree


def test_derivative() -> None:
    poly = X0**3 + 2 * X0 * X1
    assert poly.derivative(0) == 3 * X0**2 + 2 * X1
    assert poly.derivative(1) == 2 * X0

    with pytest.raises(DimensionMismatchError):
        poly.derivative(2)


def test_hessian() -> None:
    hess = (X0**3 + 2 * X0 * X1).hessian()
    two = Polynomial.constant(2, 2)
    assert hess == [[6 * X0, two], [two, Polynomial.zero(2)]]


def test_hessian_pencil_of_cube() -> None:
    pencil = Polynomial.monomial([3]).hessian_pencil()
    assert pencil.constant == SymMatrix.from_rows([[0]])
    assert pencil.coefficients == (SymMatrix.from_rows([[6]]),)


def test_hessian_pencil_of_triple_product() -> None:
    pencil = Polynomial.monomial([1, 1, 1]).hessian_pencil()
    assert pencil.constant == SymMatrix.zeros(3)
    assert pencil.evaluate(("1", "2", "3")) == SymMatrix.from_rows(
        [[0, 3, 2], [3, 0, 1], [2, 1, 0]]
    )


def test_hessian_pencil_degree_too_high() -> None:
    with pytest.raises(DegreeTooHighError):
        (X0**4).hessian_pencil()


@settings(max_examples=50)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(cubics(n), vectors(n, 5, 4))))
def test_hessian_pencil_matches_hessian(
    instance: Tuple[Polynomial, Tuple[Fraction, ...]],
) -> None:
    poly, point = instance
    assert poly.hessian_pencil().evaluate(point) == poly.hessian_at(point)


def test_evaluate() -> None:
    poly = X0**2 * X1 + 3
    assert poly.evaluate(("1/2", 4)) == 4
    assert poly.evaluate((Fraction(-1), Fraction(1, 3))) == Fraction(10, 3)

    with pytest.raises(DimensionMismatchError):
        poly.evaluate((1,))


def test_restrict() -> None:
    assert str((X0 + X1).restrict({0: 1})) == "x0 + 1"
    poly = X0**3 + X0 * X1**2
    assert poly.restrict({1: 2}) == Polynomial.monomial([3]) + Polynomial.monomial(
        [1], 4
    )
    assert poly.restrict({0: -1, 1: 0}) == Polynomial.constant(-1, 0)


def test_extended() -> None:
    assert Polynomial.monomial([2]).extended(2) == X0**2

    with pytest.raises(DimensionMismatchError):
        X0.extended(1)


def test_json() -> None:
    poly = X0**2 * X1 - Fraction(1, 3) * X1
    raw = poly.to_json()
    assert raw == {
        "nvars": 2,
        "terms": [
            {"exps": [0, 1], "coef": "-1/3"},
            {"exps": [2, 1], "coef": "1"},
        ],
    }
    assert Polynomial.from_json(raw) == poly


@pytest.mark.parametrize(
    "raw",
    [
        {"nvars": 1, "terms": [{"exps": [1], "coef": "1"}, {"exps": [1], "coef": "2"}]},
        {"nvars": 2, "terms": [{"exps": [1], "coef": "1"}]},
        {"nvars": 1, "terms": [{"exps": [-1], "coef": "1"}]},
        {"nvars": 1, "terms": [{"exps": [1], "coef": 0.5}]},
        {"nvars": 1},
        [],
    ],
)
def test_json_rejects(raw: object) -> None:
    with pytest.raises(InputFormatError):
        Polynomial.from_json(raw)


def test_box_vertices() -> None:
    assert list(Box.cube(2).vertices()) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    degenerate = Box((Fraction(0), Fraction(-1)), (Fraction(0), Fraction(1)))
    assert list(degenerate.vertices()) == [(0, -1), (0, 1)]
    assert degenerate.fixed_coordinates() == {0: 0}
    assert degenerate.free_indices == (1,)
    assert degenerate.reduced() == Box.cube(1)


def test_box_rejects_inverted_bounds() -> None:
    with pytest.raises(InputFormatError) as ctx:
        Box((Fraction(1),), (Fraction(0),))

    assert "exceeds upper bound" in str(ctx.value)


def test_box_json() -> None:
    box = Box((Fraction(-1, 2), Fraction(0)), (Fraction(1), Fraction(3, 2)))
    assert box.to_json() == {"lower": ["-1/2", "0"], "upper": ["1", "3/2"]}
    assert Box.from_json(box.to_json()) == box
    assert box.contains(("0", "3/2"))
    assert not box.contains(("2", "0"))
    assert str(box) == "[-1/2, 1] x [0, 3/2]"


def test_pencil_json() -> None:
    pencil = (X0**3 + X0 * X1).hessian_pencil()
    assert AffinePencil.from_json(pencil.to_json()) == pencil
    assert pencil.to_json()["nvars"] == 2

    with pytest.raises(InputFormatError):
        AffinePencil.from_json({**pencil.to_json(), "nvars": 3})


@settings(max_examples=50)
@given(cubic_instances())
def test_integral_pencil_matches_exact_evaluation(
    instance: Tuple[Polynomial, Box],
) -> None:
    poly, box = instance
    pencil = poly.hessian_pencil()
    denominator = 6
    evaluator = pencil.integral_evaluator(denominator)
    for vertex in box.vertices():
        if any((v * denominator).denominator != 1 for v in vertex):
            continue
        expected = pencil.evaluate(vertex).scaled(evaluator.scale)
        assert [list(row) for row in expected.entries] == evaluator.at(vertex)


def test_integral_pencil_rejects_foreign_denominators() -> None:
    evaluator = Polynomial.monomial([3]).hessian_pencil().integral_evaluator(2)
    assert evaluator.scale == 2
    assert evaluator.at((Fraction(1, 2),)) == [[6]]

    with pytest.raises(DimensionMismatchError):
        evaluator.at((Fraction(1, 3),))
