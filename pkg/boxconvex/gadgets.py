"""The gadgets module builds the reduction objects from a simple graph
MAX-CUT instance: the gadget matrix ``C`` and threshold ``μ``
(:py:class:`NemirovskiGadget`), the interval matrix family, the cubic
polynomial over ``[-1, 1]^(2n+1)`` (:py:class:`GadgetCubic`), explicit
nonconvexity witnesses from large cuts and the degree lift.

Vertices are 0-indexed everywhere. The variables of the cubic are ordered
``x0, ..., x(n-1)`` followed by ``y0, ..., yn``.

"""

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any
from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import Iterator
from typing import List
from typing import Sequence
from typing import Tuple
from typing import Union

import networkx as nx

from boxconvex.errors import BadDegreeError
from boxconvex.errors import BadIndicatorError
from boxconvex.errors import BadKError
from boxconvex.errors import CutTooSmallError
from boxconvex.errors import DegreeTooHighError
from boxconvex.errors import DimensionMismatchError
from boxconvex.errors import InputFormatError
from boxconvex.interval import IntervalSymMatrix
from boxconvex.linalg import RationalLike
from boxconvex.linalg import SymMatrix
from boxconvex.linalg import Vector
from boxconvex.linalg import dot
from boxconvex.linalg import format_rational
from boxconvex.linalg import invert
from boxconvex.linalg import parse_rational
from boxconvex.linalg import to_vector
from boxconvex.linalg import vector_to_json
from boxconvex.logging import _logger
from boxconvex.polynomial import AffinePencil
from boxconvex.polynomial import Box
from boxconvex.polynomial import Exponents
from boxconvex.polynomial import Polynomial

#: an undirected edge ``(i, j)`` with ``i < j``
Edge = Tuple[int, int]


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph on the vertices ``0, ..., n-1``.

    Edges may be passed in any orientation, they are stored as ``(i, j)``
    with ``i < j``.

    """

    #: number of vertices
    n: int

    #: set of edges
    edges: FrozenSet[Edge] = frozenset()

    def __post_init__(self) -> None:
        if not _is_int(self.n) or self.n < 1:
            raise InputFormatError(
                f"A graph needs a positive number of vertices, got {self.n!r}"
            )
        normalized = set()
        for edge in self.edges:
            if len(edge) != 2 or not all(_is_int(v) for v in edge):
                raise InputFormatError(f"Invalid edge {edge!r}")
            i, j = sorted(edge)
            if i == j:
                raise InputFormatError(f"Self-loop at vertex {i}")
            if i < 0 or j >= self.n:
                raise InputFormatError(
                    f"Edge ({i}, {j}) out of range for {self.n} vertices"
                )
            normalized.add((i, j))
        object.__setattr__(self, "edges", frozenset(normalized))

    def __str__(self) -> str:
        return f"n{self.n}-" + (
            "_".join(f"{i}{j}" for i, j in sorted(self.edges)) or "empty"
        )

    @staticmethod
    def of(n: int, edges: Iterable[Sequence[int]] = ()) -> "Graph":
        """Shorthand for a graph from any iterable of vertex pairs.

        >>> Graph.of(3, [(0, 1), (2, 1)]).sorted_edges
        [(0, 1), (1, 2)]

        """
        return Graph(n, frozenset((e[0], e[1]) for e in edges))

    @property
    def sorted_edges(self) -> List[Edge]:
        """The edges in lexicographic order."""
        return sorted(self.edges)

    def adjacency(self) -> SymMatrix:
        """The 0/1 adjacency matrix ``A``."""
        rows = [[0] * self.n for _ in range(self.n)]
        for i, j in self.edges:
            rows[i][j] = rows[j][i] = 1
        return SymMatrix.from_rows(rows)

    def cut_size(self, indicator: Sequence[Any]) -> int:
        """Number of edges cut by the bipartition ``indicator``, i.e.
        ``(eᵀAe - x̂ᵀAx̂) / 4``.

        Raises:
            BadIndicatorError: if ``indicator`` has the wrong length or an
                entry other than ``-1`` and ``1``
        """
        if len(indicator) != self.n or any(
            isinstance(v, bool)
            or not isinstance(v, (int, Fraction))
            or v not in (-1, 1)
            for v in indicator
        ):
            raise BadIndicatorError(
                f"Invalid cut indicator {list(indicator)!r} for {self.n} vertices"
            )
        return sum(1 for i, j in self.edges if indicator[i] != indicator[j])

    @staticmethod
    def from_networkx(graph: nx.Graph) -> "Graph":
        """Convert a networkx graph; its nodes are relabelled ``0, ..., n-1``
        in sorted order.

        """
        labels = {node: i for i, node in enumerate(sorted(graph.nodes))}
        return Graph(
            len(labels),
            frozenset((labels[u], labels[v]) for u, v in graph.edges),
        )

    def to_networkx(self) -> nx.Graph:
        """Convert into a networkx graph with integer nodes."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.sorted_edges)
        return graph

    def to_json(self) -> Any:
        """Serialize into ``{"n": N, "edges": [[i, j], ...]}``."""
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges]}

    @staticmethod
    def from_json(raw: Any) -> "Graph":
        """Create a graph from its JSON representation. Duplicate edges
        (in either orientation) are rejected.

        """
        if (
            not isinstance(raw, dict)
            or not _is_int(raw.get("n"))
            or not isinstance(raw.get("edges"), list)
        ):
            raise InputFormatError(f"Invalid graph object: {raw!r}")
        seen = set()
        for edge in raw["edges"]:
            if (
                not isinstance(edge, list)
                or len(edge) != 2
                or not all(_is_int(v) for v in edge)
            ):
                raise InputFormatError(f"Invalid edge {edge!r}")
            key = frozenset(edge)
            if key in seen:
                raise InputFormatError(f"Duplicate edge {edge!r}")
            seen.add(key)
        return Graph(raw["n"], frozenset(tuple(e) for e in raw["edges"]))


def all_graphs(n: int) -> Iterator[Graph]:
    """Every simple graph on ``n`` labelled vertices, in a fixed order: the
    ``i``-th graph contains the ``j``-th vertex pair (in lexicographic
    order) if bit ``j`` of ``i`` is set.

    """
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(2 ** len(pairs)):
        yield Graph(
            n,
            frozenset(p for bit, p in enumerate(pairs) if mask >> bit & 1),
        )


def random_graph(n: int, seed: Union[int, random.Random], p: float = 0.5) -> Graph:
    """A seeded Erdős-Rényi graph ``G(n, p)``."""
    return Graph.from_networkx(nx.gnp_random_graph(n, p, seed=seed))


@dataclass(frozen=True)
class Cut:
    """A bipartition of the vertices by a ±1 indicator vector."""

    #: ``indicator[i] == 1`` on one side, ``-1`` on the other
    indicator: Tuple[int, ...]

    #: number of edges between both sides
    size: int

    def to_json(self) -> Any:
        return {"size": self.size, "indicator": list(self.indicator)}


def cubic_constants(n: int) -> Tuple[Fraction, Fraction]:
    """The constants ``(α, η)`` of the cubic gadget for ``n`` vertices:
    ``α = 16 n (1 + 16 n^7)`` and ``η = 1 / (4 (1 + 16 n^7))``.

    """
    base = 1 + 16 * n**7
    return Fraction(16 * n * base), Fraction(1, 4 * base)


def curvature_margin(n: int) -> Fraction:
    """``η - 2n/α``, the curvature that the ``y`` block keeps after the
    mixed second derivatives are absorbed by the ``x`` block. Always equal to
    ``1 / (8 (1 + 16 n^7))``.

    """
    alpha, eta = cubic_constants(n)
    return eta - Fraction(2 * n) / alpha


@dataclass(frozen=True)
class NemirovskiGadget:
    """The matrix ``C = 4/(n+1)^3 (I + A/(n+1)^3)``, the threshold
    ``μ = n (n+1)^3/4 + k - 1 - eᵀAe/4`` and the pencil
    ``L(x) = [[C, x], [xᵀ, μ + 1/4]]`` for a graph with adjacency ``A``.

    """

    #: the underlying graph
    graph: Graph

    #: the cut threshold
    k: int

    #: the ``n x n`` gadget matrix
    c: SymMatrix

    #: the threshold ``μ``
    mu: Fraction

    #: the ``(n+1) x (n+1)`` pencil in ``n`` variables
    pencil: AffinePencil

    @property
    def n(self) -> int:
        """Number of vertices."""
        return self.graph.n

    @property
    def corner(self) -> Fraction:
        """The bottom right entry ``μ + 1/4`` of the pencil."""
        return self.mu + Fraction(1, 4)

    @cached_property
    def c_inverse(self) -> SymMatrix:
        """Exact inverse of :py:attr:`c`."""
        return invert(self.c)

    def manifest(self) -> Dict[str, Any]:
        """Defining constants of the reduction for ``n`` and ``k``."""
        alpha, eta = cubic_constants(self.n)
        return {
            "n": self.n,
            "k": self.k,
            "mu": format_rational(self.mu),
            "alpha": format_rational(alpha),
            "eta": format_rational(eta),
        }


def gadget_matrix(adjacency: SymMatrix) -> SymMatrix:
    """``C = 4/(n+1)^3 (I + A/(n+1)^3)`` for an ``n x n`` matrix ``A``."""
    n = adjacency.dim
    cube = (n + 1) ** 3
    return SymMatrix.from_rows(
        [
            [
                (Fraction(4, cube) if i == j else Fraction(0))
                + adjacency[i, j] * Fraction(4, cube**2)
                for j in range(n)
            ]
            for i in range(n)
        ]
    )


def _check_k(graph: Graph, k: int) -> None:
    if not _is_int(k) or not 1 <= k <= graph.n**2:
        raise BadKError(
            f"k must be an integer in [1, {graph.n**2}] for {graph.n} "
            f"vertices, got {k!r}"
        )


def build_gadget(graph: Graph, k: int) -> NemirovskiGadget:
    """Construct ``C``, ``μ`` and ``L(x)`` for ``graph`` and threshold
    ``k``.

    Raises:
        BadKError: unless ``1 <= k <= n^2``
    """
    _check_k(graph, k)
    n = graph.n
    cube = (n + 1) ** 3
    c = gadget_matrix(graph.adjacency())
    mu = Fraction(n * cube, 4) + k - 1 - Fraction(2 * len(graph.edges), 4)

    dim = n + 1
    constant = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(n):
        for j in range(n):
            constant[i][j] = c[i, j]
    constant[n][n] = mu + Fraction(1, 4)
    coefficients = []
    for i in range(n):
        mat = [[0] * dim for _ in range(dim)]
        mat[i][n] = mat[n][i] = 1
        coefficients.append(SymMatrix.from_rows(mat))

    _logger.debug("Built gadget for %s with k=%d, μ=%s", graph, k, mu)
    return NemirovskiGadget(
        graph,
        k,
        c,
        mu,
        AffinePencil(SymMatrix.from_rows(constant), tuple(coefficients)),
    )


def maxcut_to_interval(graph: Graph, k: int) -> IntervalSymMatrix:
    """The interval family whose members are ``L(x)`` with the entries
    ``x_i`` ranging independently over ``[-1, 1]``. Every member is PSD if and
    only if the maximum cut of ``graph`` is smaller than ``k``.

    Raises:
        BadKError: unless ``1 <= k <= n^2``
    """
    gadget = build_gadget(graph, k)
    n = graph.n
    lower = [list(row) for row in gadget.pencil.constant.entries]
    upper = [list(row) for row in gadget.pencil.constant.entries]
    for i in range(n):
        lower[i][n] = lower[n][i] = Fraction(-1)
        upper[i][n] = upper[n][i] = Fraction(1)
    return IntervalSymMatrix(
        SymMatrix.from_rows(lower), SymMatrix.from_rows(upper)
    )


@dataclass(frozen=True)
class GadgetCubic:
    """The cubic ``f(x, y) = ½ yᵀL(x)y + (α/2) xᵀx + (η/2) yᵀy`` in ``2n+1``
    variables over ``[-1, 1]^(2n+1)``. ``f`` is convex over its box if and
    only if the maximum cut of the graph is smaller than ``k``.

    """

    #: the gadget the cubic is built from
    gadget: NemirovskiGadget

    #: the cubic polynomial
    f: Polynomial

    #: the box ``[-1, 1]^(2n+1)``
    box: Box

    #: weight of ``xᵀx``
    alpha: Fraction

    #: weight of ``yᵀy``
    eta: Fraction

    @property
    def n(self) -> int:
        """Number of vertices of the underlying graph."""
        return self.gadget.n

    def manifest(self) -> Dict[str, Any]:
        return self.gadget.manifest()


def maxcut_to_cubic(graph: Graph, k: int) -> GadgetCubic:
    """Construct the cubic gadget polynomial for ``graph`` and ``k``.

    Raises:
        BadKError: unless ``1 <= k <= n^2``
    """
    gadget = build_gadget(graph, k)
    n = graph.n
    nvars = 2 * n + 1
    alpha, eta = cubic_constants(n)
    half = Fraction(1, 2)

    def unit(*indices: int) -> Exponents:
        exps = [0] * nvars
        for idx in indices:
            exps[idx] += 1
        return tuple(exps)

    def y(i: int) -> int:
        return n + i

    terms: Dict[Exponents, Fraction] = {}
    for i in range(n):
        terms[unit(i, i)] = alpha * half
        # ½ * 2 x_i y_i y_n from the off-diagonal pencil entries
        terms[unit(i, y(i), y(n))] = Fraction(1)
        for j in range(i, n):
            coef = gadget.c[i, j] * (half if i == j else 1)
            if coef:
                terms[unit(y(i), y(j))] = coef
    terms[unit(y(n), y(n))] = gadget.corner * half
    for i in range(n + 1):
        key = unit(y(i), y(i))
        terms[key] = terms.get(key, Fraction(0)) + eta * half

    return GadgetCubic(
        gadget, Polynomial(nvars, terms), Box.cube(nvars), alpha, eta
    )


def mixed_partials_matrix(
    n: int, y: Sequence[RationalLike]
) -> Tuple[Vector, ...]:
    """The ``n x (n+1)`` matrix ``H(y)`` of mixed partial derivatives
    ``∂/∂x_i (L(x) y)_j`` of ``yᵀL(x)y``: ``2 y_n`` on the diagonal, ``2 y_i``
    in the last column and zero elsewhere.

    """
    if len(y) != n + 1:
        raise DimensionMismatchError(
            f"H(y) for {n} vertices needs {n + 1} entries of y, got {len(y)}"
        )
    values = to_vector(y)
    rows = []
    for i in range(n):
        row = [Fraction(0)] * (n + 1)
        row[i] += 2 * values[n]
        row[n] += 2 * values[i]
        rows.append(tuple(row))
    return tuple(rows)


def schur_complement_psd(
    gadget: NemirovskiGadget, x: Sequence[RationalLike]
) -> bool:
    """Whether ``L(x)`` is PSD, decided through the Schur complement of the
    positive definite block ``C``: ``xᵀC⁻¹x <= μ + 1/4``.

    """
    if len(x) != gadget.n:
        raise DimensionMismatchError(
            f"Point of dimension {len(x)} for a gadget on {gadget.n} vertices"
        )
    return gadget.c_inverse.quadratic_form(to_vector(x)) <= gadget.corner


@dataclass(frozen=True)
class CutWitness:
    """A point of the cubic's box and a direction of negative curvature,
    constructed from a large cut.

    """

    #: the point ``(x̂, 0)``
    point: Vector

    #: the unnormalized direction ``(0, -C⁻¹x̂, 1)``
    direction: Vector

    #: the Rayleigh quotient ``zᵀ∇²f(point)z / zᵀz``
    value: Fraction

    @property
    def xbar(self) -> Vector:
        """The cut indicator part of :py:attr:`point`."""
        return self.point[: (len(self.point) - 1) // 2]

    def to_json(self) -> Any:
        return {
            "point": vector_to_json(self.point),
            "direction": vector_to_json(self.direction),
            "value": format_rational(self.value),
        }


def witness_from_cut(
    gadget: NemirovskiGadget, cubic: GadgetCubic, cut: Cut
) -> CutWitness:
    """Explicit nonconvexity witness of the cubic for a cut with at least
    ``k`` edges. The value is at most ``-η``.

    The size of the cut is recounted from the graph, ``cut.size`` is not
    trusted.

    Raises:
        DimensionMismatchError: if the indicator does not match the graph
        BadIndicatorError: if an indicator entry is not ``±1``
        CutTooSmallError: if the cut has less than ``k`` edges
    """
    if len(cut.indicator) != gadget.n:
        raise DimensionMismatchError(
            f"Cut indicator of length {len(cut.indicator)} for "
            f"{gadget.n} vertices"
        )
    size = gadget.graph.cut_size(cut.indicator)
    if size != cut.size:
        _logger.warning(
            "Cut claims %d edges but its indicator cuts %d", cut.size, size
        )
    if size < gadget.k:
        raise CutTooSmallError(f"Cut of size {size} is smaller than k={gadget.k}")
    xbar = tuple(Fraction(v) for v in cut.indicator)
    solved = gadget.c_inverse.matvec(xbar)
    point = xbar + (Fraction(0),) * (gadget.n + 1)
    direction = (
        (Fraction(0),) * gadget.n
        + tuple(-v for v in solved)
        + (Fraction(1),)
    )
    value = cubic.f.hessian_at(point).quadratic_form(direction) / dot(
        direction, direction
    )
    return CutWitness(point, direction, value)


def lift_degree(
    base: Polynomial, base_box: Box, degree: int
) -> Tuple[Polynomial, Box]:
    """Returns ``base + x_n^degree`` and ``base_box x [0, 1]``; the lifted
    polynomial is convex over the lifted box if and only if ``base`` is
    convex over ``base_box``.

    Raises:
        DegreeTooHighError: if ``base`` has degree 4 or higher
        BadDegreeError: if ``degree < 4``
    """
    if base.degree > 3:
        raise DegreeTooHighError(
            f"Only polynomials of degree <= 3 can be lifted, got {base.degree}"
        )
    if not _is_int(degree) or degree < 4:
        raise BadDegreeError(f"Lifting degree must be at least 4, got {degree!r}")
    if base.nvars != base_box.dim:
        raise DimensionMismatchError(
            f"Polynomial in {base.nvars} variables lifted over a "
            f"{base_box.dim}-dimensional box"
        )
    nvars = base.nvars + 1
    lifted = base.extended(nvars) + Polynomial.variable(base.nvars, nvars) ** degree
    return lifted, base_box.product(Box((Fraction(0),), (Fraction(1),)))


@dataclass(frozen=True)
class InstanceMetrics:
    """Size measures of a reduction instance."""

    #: bit length of the canonical serialization
    length: int

    #: largest numerator or denominator in magnitude
    max: int

    def to_json(self) -> Any:
        return {"length": self.length, "max": self.max}


def instance_description(
    obj: Union[GadgetCubic, IntervalSymMatrix, NemirovskiGadget]
) -> Any:
    """Canonical JSON data of an instance. A cubic is serialized as its
    expanded polynomial, its box and its manifest.

    """
    if isinstance(obj, GadgetCubic):
        return {"f": obj.f.to_json(), "box": obj.box.to_json(), **obj.manifest()}
    if isinstance(obj, NemirovskiGadget):
        return {
            "k": obj.k,
            "mu": format_rational(obj.mu),
            "pencil": obj.pencil.to_json(),
        }
    return obj.to_json()


def _defining_data(
    obj: Union[GadgetCubic, IntervalSymMatrix, NemirovskiGadget]
) -> Any:
    # The expanded cubic merges η/2 into the C_ii/2 coefficients, whose
    # common denominator grows like n^10; the instance is given by its
    # constants and the pencil.
    if isinstance(obj, GadgetCubic):
        return {
            "alpha": format_rational(obj.alpha),
            "eta": format_rational(obj.eta),
            "box": obj.box.to_json(),
            "pencil": obj.gadget.pencil.to_json(),
        }
    return instance_description(obj)


def _rationals(raw: Any) -> Iterable[Fraction]:
    if isinstance(raw, dict):
        for value in raw.values():
            yield from _rationals(value)
    elif isinstance(raw, list):
        for value in raw:
            yield from _rationals(value)
    elif isinstance(raw, (int, str)) and not isinstance(raw, bool):
        yield parse_rational(raw)


def instance_metrics(
    obj: Union[GadgetCubic, IntervalSymMatrix, NemirovskiGadget]
) -> InstanceMetrics:
    """``length`` is the number of bits of the compact canonical JSON
    serialization of the instance (see :py:func:`instance_description`),
    ``max`` the largest absolute numerator or denominator of the numbers that
    define it. For a cubic these are ``α``, ``η``, the box and the pencil
    ``L``, not the merged coefficients of ``f``.

    """
    serialized = json.dumps(
        instance_description(obj), sort_keys=True, separators=(",", ":")
    )
    return InstanceMetrics(
        length=8 * len(serialized.encode()),
        max=max(
            max(abs(v.numerator), v.denominator)
            for v in _rationals(_defining_data(obj))
        ),
    )
