"""Brute force and inequality oracles that validate the quantitative claims
behind the reductions of :py:mod:`boxconvex.gadgets`.

Every oracle computes in exact arithmetic, except for
:py:func:`hty_bound_check` which compares a floating point eigenvalue
against its bound with a fixed slack. Enumerations are guarded by hard size
limits, exceeding them raises :py:class:`~boxconvex.errors.TooLargeError`.

"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any
from typing import List
from typing import Optional
from typing import Sequence

import numpy as np

from boxconvex.convexity import ConvexityStatus
from boxconvex.convexity import check_cubic_exact
from boxconvex.errors import BadInputError
from boxconvex.errors import TooLargeError
from boxconvex.gadgets import Cut
from boxconvex.gadgets import CutWitness
from boxconvex.gadgets import Graph
from boxconvex.gadgets import NemirovskiGadget
from boxconvex.gadgets import gadget_matrix
from boxconvex.gadgets import maxcut_to_cubic
from boxconvex.gadgets import maxcut_to_interval
from boxconvex.gadgets import mixed_partials_matrix
from boxconvex.gadgets import witness_from_cut
from boxconvex.interval import check_interval_psd
from boxconvex.linalg import RationalLike
from boxconvex.linalg import SymMatrix
from boxconvex.linalg import format_rational
from boxconvex.linalg import invert
from boxconvex.linalg import to_vector
from boxconvex.logging import _logger

#: largest graph accepted by :py:func:`max_cut_bruteforce`
MAX_CUT_LIMIT = 24

#: largest gadget accepted by :py:func:`gap_check`
GAP_CHECK_LIMIT = 12

#: largest graph accepted by :py:func:`verify_reduction`
REDUCTION_LIMIT = 6

#: absolute slack of the floating point eigenvalue bound
EIGENVALUE_SLACK = 1e-9


def _guard(size: int, limit: int, what: str) -> None:
    if size > limit:
        raise TooLargeError(
            f"{what} is limited to n <= {limit}, got n = {size}"
        )


def cut_size(graph: Graph, indicator: Sequence[Any]) -> int:
    """Number of edges cut by the bipartition ``indicator``, see
    :py:meth:`~boxconvex.gadgets.Graph.cut_size`.

    Raises:
        BadIndicatorError: if ``indicator`` has the wrong length or an entry
            other than ``-1`` and ``1``
    """
    return graph.cut_size(indicator)


def max_cut_bruteforce(graph: Graph) -> Cut:
    """Maximum cut by enumeration of all bipartitions with ``x0 = 1``. Among
    all maximum cuts the lexicographically smallest indicator (with
    ``-1 < 1``) is returned.

    Raises:
        TooLargeError: if the graph has more than :py:data:`MAX_CUT_LIMIT`
            vertices
    """
    _guard(graph.n, MAX_CUT_LIMIT, "Brute force max cut")
    best: Optional[Cut] = None
    for rest in itertools.product((-1, 1), repeat=graph.n - 1):
        indicator = (1,) + rest
        size = cut_size(graph, indicator)
        if best is None or size > best.size:
            best = Cut(indicator, size)
    assert best is not None
    return best


@dataclass(frozen=True)
class LemmaReport:
    """Outcome of :py:func:`lemma_bound_check`."""

    #: ``True`` if ``lower <= value <= upper``
    holds: bool

    #: ``xᵀ((n+1)³I - A)x / 4 - 1/4``
    lower: Fraction

    #: ``xᵀC⁻¹x``
    value: Fraction

    #: ``xᵀ((n+1)³I - A)x / 4 + 1/4``
    upper: Fraction

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> Any:
        return {
            "holds": self.holds,
            "lower": format_rational(self.lower),
            "value": format_rational(self.value),
            "upper": format_rational(self.upper),
        }


def lemma_bound_check(
    adjacency: SymMatrix, x: Sequence[RationalLike]
) -> LemmaReport:
    """Checks the sandwich bound of ``xᵀC⁻¹x`` by its first order Neumann
    approximation ``xᵀ((n+1)³I - A)x / 4`` with slack ``1/4``, for ``x`` in
    the unit box.

    Raises:
        BadInputError: if ``adjacency`` is not a 0/1 matrix, ``x`` has the
            wrong length or ``max |x_i| > 1``
    """
    n = adjacency.dim
    if any(v not in (0, 1) for row in adjacency.entries for v in row):
        raise BadInputError(f"Matrix {adjacency} is not a 0/1 matrix")
    if len(x) != n:
        raise BadInputError(f"Vector of length {len(x)} for a {n}x{n} matrix")
    point = to_vector(x)
    if any(abs(v) > 1 for v in point):
        raise BadInputError("Entries of x must lie in [-1, 1]")

    value = invert(gadget_matrix(adjacency)).quadratic_form(point)
    approx = (
        SymMatrix.identity(n).scaled((n + 1) ** 3) - adjacency
    ).quadratic_form(point) / 4
    lower, upper = approx - Fraction(1, 4), approx + Fraction(1, 4)
    return LemmaReport(lower <= value <= upper, lower, value, upper)


def neumann_inverse(adjacency: SymMatrix, terms: int) -> SymMatrix:
    """Truncation ``(n+1)³/4 Σ_{k < terms} (-A)^k / (n+1)^(3k)`` of the
    Neumann series of ``C⁻¹``. Two terms give ``((n+1)³I - A) / 4``.

    """
    if terms < 1:
        raise BadInputError(f"At least one term is needed, got {terms}")
    n = adjacency.dim
    cube = (n + 1) ** 3
    step = adjacency.scaled(Fraction(-1, cube))
    power = SymMatrix.identity(n)
    total = SymMatrix.identity(n)
    for _ in range(terms - 1):
        power = SymMatrix.from_rows(power.matmul(step))
        total = total + power
    return total.scaled(Fraction(cube, 4))


@dataclass(frozen=True)
class GapReport:
    """Outcome of :py:func:`gap_check`."""

    #: maximum of ``xᵀC⁻¹x`` over the unit box
    max_value: Fraction

    #: ``μ + 1/4``
    lower_threshold: Fraction

    #: ``μ + 3/4``
    upper_threshold: Fraction

    #: whether :py:attr:`max_value` lies strictly between both thresholds
    in_forbidden_band: bool

    def to_json(self) -> Any:
        return {
            "max_value": format_rational(self.max_value),
            "lower_threshold": format_rational(self.lower_threshold),
            "upper_threshold": format_rational(self.upper_threshold),
            "in_forbidden_band": self.in_forbidden_band,
        }


def gap_check(gadget: NemirovskiGadget) -> GapReport:
    """Maximizes the convex form ``xᵀC⁻¹x`` over ``[-1, 1]^n`` at the
    vertices and checks that the maximum never falls strictly between
    ``μ + 1/4`` and ``μ + 3/4``.

    Raises:
        TooLargeError: if the gadget has more than
            :py:data:`GAP_CHECK_LIMIT` vertices
    """
    n = gadget.n
    _guard(n, GAP_CHECK_LIMIT, "The gap check")
    scale, rows = gadget.c_inverse.integral()
    best = max(
        sum(
            rows[i][j] * signs[i] * signs[j]
            for i in range(n)
            for j in range(n)
        )
        # the form is even, fixing x0 = 1 covers every vertex
        for signs in ((1,) + rest for rest in itertools.product((-1, 1), repeat=n - 1))
    )
    max_value = Fraction(best, scale)
    lower = gadget.mu + Fraction(1, 4)
    upper = gadget.mu + Fraction(3, 4)
    return GapReport(max_value, lower, upper, lower < max_value < upper)


def hty_gershgorin_bound(n: int, y: Sequence[RationalLike]) -> Fraction:
    """Exact Gershgorin bound ``max_a Σ_b |(H(y)ᵀH(y))_ab|`` on the largest
    eigenvalue of ``H(y)ᵀH(y)``.

    """
    h = mixed_partials_matrix(n, to_vector(y))
    gram = [
        [sum((row[a] * row[b] for row in h), Fraction(0)) for b in range(n + 1)]
        for a in range(n + 1)
    ]
    return max(sum((abs(v) for v in row), Fraction(0)) for row in gram)


def hty_bound_check(n: int, y: Sequence[RationalLike]) -> bool:
    """Checks ``λ_max(H(y)ᵀH(y)) <= 8n`` numerically (with slack
    :py:data:`EIGENVALUE_SLACK`) and the exact Gershgorin bound
    :py:func:`hty_gershgorin_bound` ``<= 8n``.

    Raises:
        BadInputError: if ``y`` does not have ``n + 1`` entries in
            ``[-1, 1]``
    """
    if n < 1 or len(y) != n + 1:
        raise BadInputError(f"y needs {n + 1} entries, got {len(y)}")
    values = to_vector(y)
    if any(abs(v) > 1 for v in values):
        raise BadInputError("Entries of y must lie in [-1, 1]")

    h = np.array(
        [[float(v) for v in row] for row in mixed_partials_matrix(n, values)],
        dtype=float,
    )
    largest = float(np.linalg.eigvalsh(h.T @ h)[-1])
    exact = hty_gershgorin_bound(n, values)
    _logger.debug(
        "λ_max(HᵀH) = %g, Gershgorin bound %s, limit %d", largest, exact, 8 * n
    )
    return largest <= 8 * n + EIGENVALUE_SLACK and exact <= 8 * n


@dataclass(frozen=True)
class ReductionReport:
    """Verdicts of all reduction legs for one ``(graph, k)`` instance."""

    #: number of vertices
    n: int

    #: cut threshold
    k: int

    #: the maximum cut
    max_cut: Cut

    #: whether every member of the interval family is PSD
    interval_psd: bool

    #: whether the gadget cubic is convex over its box
    cubic_convex: bool

    #: witness constructed from the maximum cut if it reaches ``k``
    witness: Optional[CutWitness]

    #: ``η`` of the cubic
    eta: Fraction

    @property
    def iff_holds(self) -> bool:
        """``max cut >= k`` iff the family is not all PSD iff the cubic is
        not convex.

        """
        large = self.max_cut.size >= self.k
        return (not self.interval_psd) == large and (not self.cubic_convex) == large

    @property
    def witness_holds(self) -> bool:
        """Whether the cut witness (if any) has a value of at most ``-η``."""
        return self.witness is None or self.witness.value <= -self.eta

    @property
    def consistent(self) -> bool:
        """All checks agree."""
        return self.iff_holds and self.witness_holds

    def to_json(self) -> Any:
        return {
            "n": self.n,
            "k": self.k,
            "max_cut": self.max_cut.size,
            "interval_psd": self.interval_psd,
            "cubic_convex": self.cubic_convex,
            "iff_holds": self.iff_holds,
            "witness": self.witness.to_json() if self.witness else None,
        }


def verify_reduction(
    graph: Graph, k: int, threads: Optional[int] = None
) -> ReductionReport:
    """Runs the brute force max cut, the interval PSD check of
    :py:func:`~boxconvex.gadgets.maxcut_to_interval` and the exact convexity
    check of :py:func:`~boxconvex.gadgets.maxcut_to_cubic` and, if the
    maximum cut reaches ``k``, builds the cut witness.

    Raises:
        TooLargeError: if the graph has more than
            :py:data:`REDUCTION_LIMIT` vertices
        BadKError: unless ``1 <= k <= n^2``
    """
    _guard(graph.n, REDUCTION_LIMIT, "Reduction verification")
    cut = max_cut_bruteforce(graph)
    interval = check_interval_psd(maxcut_to_interval(graph, k), threads=threads)
    cubic = maxcut_to_cubic(graph, k)
    verdict = check_cubic_exact(cubic.f, cubic.box, threads)
    witness = (
        witness_from_cut(cubic.gadget, cubic, cut) if cut.size >= k else None
    )
    report = ReductionReport(
        graph.n,
        k,
        cut,
        interval.all_psd,
        verdict.status == ConvexityStatus.CONVEX,
        witness,
        cubic.eta,
    )
    if not report.consistent:
        _logger.error(
            "Reduction is inconsistent for %s and k=%d: %s",
            graph,
            k,
            report.to_json(),
        )
    return report


def all_cut_sizes(graph: Graph) -> List[int]:
    """Sizes of the cuts of all ``2^n`` indicators in lexicographic order."""
    _guard(graph.n, MAX_CUT_LIMIT, "Cut enumeration")
    return [
        cut_size(graph, indicator)
        for indicator in itertools.product((-1, 1), repeat=graph.n)
    ]
