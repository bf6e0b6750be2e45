"""The convexity module decides whether a polynomial is convex over a box.

Polynomials of degree at most 3 are decided exactly: their Hessian is an
affine pencil, so it is positive semidefinite over the box if and only if it
is positive semidefinite at every vertex. For degree 4 and higher only a
sound sufficient test (interval Gershgorin dominance) and a sound necessary
test (sampled search for negative curvature) are available, the verdict is
therefore tri-state.

Degenerate coordinates (``lower == upper``) are substituted first, so that
convexity is judged on the box itself and not in the ambient space.

"""

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Any
from typing import Dict
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from boxconvex.errors import BadDegreeError
from boxconvex.errors import DegreeTooHighError
from boxconvex.errors import DimensionMismatchError
from boxconvex.gadgets import lift_degree
from boxconvex.helpers import first_failure
from boxconvex.interval import IntervalSymMatrix
from boxconvex.linalg import SymMatrix
from boxconvex.linalg import Vector
from boxconvex.linalg import common_denominator
from boxconvex.linalg import format_rational
from boxconvex.linalg import is_psd
from boxconvex.linalg import is_psd_integral
from boxconvex.linalg import vector_to_json
from boxconvex.logging import _logger
from boxconvex.polynomial import Box
from boxconvex.polynomial import Polynomial

#: largest denominator of rationalized sample points and directions
SAMPLE_DENOMINATOR_CAP = 10**4


@enum.unique
class ConvexityStatus(enum.Enum):
    """Possible outcomes of a convexity check."""

    #: the polynomial is convex over the box
    CONVEX = "convex"
    #: the polynomial is not convex over the box, a witness is attached
    NOT_CONVEX = "not_convex"
    #: neither convexity nor nonconvexity could be certified
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


@enum.unique
class CertificationMode(enum.Enum):
    """How a verdict was obtained."""

    #: the Hessian was checked at every vertex of the box
    EXACT_VERTEX_ENUMERATION = "exact-vertex-enumeration"
    #: the Hessian is constant and was checked once
    CONSTANT_HESSIAN = "constant-hessian"
    #: the interval Hessian over the box is diagonally dominant
    GERSHGORIN_SUFFICIENT = "gershgorin-sufficient"
    #: a sampled point with a direction of negative curvature was found
    NEGATIVE_CURVATURE_SEARCH = "negative-curvature-search"
    #: no test was conclusive
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ConvexityVerdict:
    """Result of a convexity check of a polynomial over a box.

    For :py:attr:`ConvexityStatus.NOT_CONVEX`, the witness satisfies
    ``zᵀ ∇²p(point) z < 0`` exactly with ``point`` inside of the box.

    """

    #: outcome of the check
    status: ConvexityStatus

    #: certification mode
    mode: CertificationMode

    #: point of the box at which the Hessian is not PSD
    witness_point: Optional[Vector] = None

    #: direction ``z`` of negative curvature at :py:attr:`witness_point`
    witness_direction: Optional[Vector] = None

    #: the negative value ``zᵀ ∇²p(point) z``
    witness_value: Optional[Fraction] = None

    #: human readable explanation for unknown verdicts
    diagnostics: str = ""

    @property
    def is_convex(self) -> bool:
        """``True`` if convexity has been certified."""
        return self.status == ConvexityStatus.CONVEX

    def to_json(self) -> Any:
        """Serialize the verdict; witness fields are only present for
        nonconvex verdicts and diagnostics only for unknown ones.

        """
        res: Dict[str, Any] = {"status": str(self.status), "mode": str(self.mode)}
        if self.status == ConvexityStatus.NOT_CONVEX:
            assert (
                self.witness_point is not None
                and self.witness_direction is not None
                and self.witness_value is not None
            )
            res["witness_point"] = vector_to_json(self.witness_point)
            res["witness_direction"] = vector_to_json(self.witness_direction)
            res["witness_value"] = format_rational(self.witness_value)
        if self.status == ConvexityStatus.UNKNOWN:
            res["diagnostics"] = self.diagnostics
        return res


@dataclass(frozen=True)
class _Restriction:
    """A polynomial with the degenerate coordinates of a box substituted."""

    original: Polynomial
    box: Box
    polynomial: Polynomial
    reduced_box: Box

    @staticmethod
    def of(poly: Polynomial, box: Box) -> "_Restriction":
        if poly.nvars != box.dim:
            raise DimensionMismatchError(
                f"Polynomial in {poly.nvars} variables checked over a "
                f"{box.dim}-dimensional box"
            )
        fixed = box.fixed_coordinates()
        if not fixed:
            return _Restriction(poly, box, poly, box)
        return _Restriction(poly, box, poly.restrict(fixed), box.reduced())

    def embed(self, reduced: Sequence[Fraction], fill: bool) -> Vector:
        """Map a vector of the reduced space back, placing the fixed values
        (points, ``fill=True``) or zeros (directions) in the degenerate
        coordinates.

        """
        free = iter(reduced)
        return tuple(
            next(free)
            if low != high
            else (low if fill else Fraction(0))
            for low, high in zip(self.box.lower, self.box.upper)
        )

    def not_convex(
        self,
        mode: CertificationMode,
        point: Sequence[Fraction],
        direction: Sequence[Fraction],
    ) -> ConvexityVerdict:
        full_point = self.embed(point, fill=True)
        full_direction = self.embed(direction, fill=False)
        value = self.original.hessian_at(full_point).quadratic_form(
            full_direction
        )
        assert value < 0 and self.box.contains(full_point)
        _logger.debug(
            "Negative curvature %s at %s in direction %s",
            value,
            vector_to_json(full_point),
            vector_to_json(full_direction),
        )
        return ConvexityVerdict(
            ConvexityStatus.NOT_CONVEX,
            mode,
            full_point,
            full_direction,
            value,
        )


def check_cubic_exact(
    poly: Polynomial, box: Box, threads: Optional[int] = None
) -> ConvexityVerdict:
    """Decides exactly whether a polynomial of degree at most 3 is convex over
    ``box`` by checking its Hessian at every vertex.

    Vertices are visited in lexicographic order (lower bound first) with
    early exit, the witness of a nonconvex verdict is therefore the
    lexicographically smallest failing vertex together with the PSD failure
    witness of its Hessian.

    Raises:
        DegreeTooHighError: if the polynomial has degree 4 or higher
        DimensionMismatchError: if the box does not match the polynomial
    """
    if poly.degree > 3:
        raise DegreeTooHighError(
            f"Exact vertex certification needs degree <= 3, got {poly.degree}"
        )
    restriction = _Restriction.of(poly, box)
    reduced = restriction.polynomial
    if reduced.nvars == 0:
        return ConvexityVerdict(
            ConvexityStatus.CONVEX, CertificationMode.EXACT_VERTEX_ENUMERATION
        )

    pencil = reduced.hessian_pencil()
    evaluator = pencil.integral_evaluator(
        common_denominator(
            restriction.reduced_box.lower + restriction.reduced_box.upper
        )
    )
    _logger.debug(
        "Checking the Hessian at %d vertices of %s",
        2**reduced.nvars,
        restriction.reduced_box,
    )

    def check(vertex: Vector) -> Optional[bool]:
        return None if is_psd_integral(evaluator.at(vertex)) else False

    failure = first_failure(
        check, restriction.reduced_box.vertices(), threads
    )
    if failure is None:
        return ConvexityVerdict(
            ConvexityStatus.CONVEX, CertificationMode.EXACT_VERTEX_ENUMERATION
        )

    vertex = failure[0]
    cert = is_psd(pencil.evaluate(vertex))
    assert cert.witness is not None
    return restriction.not_convex(
        CertificationMode.EXACT_VERTEX_ENUMERATION, vertex, cert.witness
    )


def check_quadratic(poly: Polynomial, box: Box) -> ConvexityVerdict:
    """Decides whether a polynomial of degree at most 2 is convex over
    ``box`` with a single PSD test of its constant Hessian. Over a full
    dimensional box the verdict does not depend on the box.

    Raises:
        DegreeTooHighError: if the polynomial has degree 3 or higher
    """
    if poly.degree > 2:
        raise DegreeTooHighError(
            f"The Hessian of a degree {poly.degree} polynomial is not constant"
        )
    restriction = _Restriction.of(poly, box)
    reduced = restriction.polynomial
    if reduced.nvars == 0:
        return ConvexityVerdict(
            ConvexityStatus.CONVEX, CertificationMode.CONSTANT_HESSIAN
        )

    point = restriction.reduced_box.lower
    cert = is_psd(reduced.hessian_at(point))
    if cert.verdict:
        return ConvexityVerdict(
            ConvexityStatus.CONVEX, CertificationMode.CONSTANT_HESSIAN
        )
    assert cert.witness is not None
    return restriction.not_convex(
        CertificationMode.CONSTANT_HESSIAN, point, cert.witness
    )


def _power_range(
    low: Fraction, high: Fraction, exponent: int
) -> Tuple[Fraction, Fraction]:
    if exponent == 0:
        return Fraction(1), Fraction(1)
    at_low, at_high = low**exponent, high**exponent
    if exponent % 2 == 0 and low < 0 < high:
        return Fraction(0), max(at_low, at_high)
    return min(at_low, at_high), max(at_low, at_high)


def _product_range(
    lhs: Tuple[Fraction, Fraction], rhs: Tuple[Fraction, Fraction]
) -> Tuple[Fraction, Fraction]:
    products = [a * b for a in lhs for b in rhs]
    return min(products), max(products)


def _polynomial_range(poly: Polynomial, box: Box) -> Tuple[Fraction, Fraction]:
    """Interval enclosure of ``poly`` over ``box`` by monomial-wise interval
    arithmetic.

    """
    low_sum, high_sum = Fraction(0), Fraction(0)
    for exps, coef in poly.terms.items():
        rng = (coef, coef)
        for e, low, high in zip(exps, box.lower, box.upper):
            if e:
                rng = _product_range(rng, _power_range(low, high, e))
        low_sum += rng[0]
        high_sum += rng[1]
    return low_sum, high_sum


def hessian_enclosure(poly: Polynomial, box: Box) -> IntervalSymMatrix:
    """Interval family containing the Hessian of ``poly`` at every point of
    ``box``.

    """
    if poly.nvars != box.dim:
        raise DimensionMismatchError(
            f"Polynomial in {poly.nvars} variables enclosed over a "
            f"{box.dim}-dimensional box"
        )
    ranges = [
        [_polynomial_range(entry, box) for entry in row]
        for row in poly.hessian()
    ]
    return IntervalSymMatrix(
        SymMatrix.from_rows([[r[0] for r in row] for row in ranges]),
        SymMatrix.from_rows([[r[1] for r in row] for row in ranges]),
    )


def gershgorin_box_sufficient(poly: Polynomial, box: Box) -> bool:
    """Sound sufficient test for convexity over ``box``: encloses every
    Hessian entry in an interval and checks that every row is diagonally
    dominant in the worst case. ``True`` implies convexity, ``False`` is
    inconclusive.

    """
    if poly.nvars == 0:
        return True
    enclosure = hessian_enclosure(poly, box)
    dim = enclosure.dim
    return all(
        enclosure.lower[i, i]
        - sum(
            max(abs(enclosure.lower[i, j]), abs(enclosure.upper[i, j]))
            for j in range(dim)
            if j != i
        )
        >= 0
        for i in range(dim)
    )


def _rationalize(value: float) -> Fraction:
    return Fraction(value).limit_denominator(SAMPLE_DENOMINATOR_CAP)


def _search(
    poly: Polynomial, box: Box, samples: int, seed: int
) -> Optional[Tuple[Vector, Vector]]:
    hessian = poly.hessian()
    rng = np.random.default_rng(seed)
    low = np.array([float(v) for v in box.lower])
    high = np.array([float(v) for v in box.upper])
    for _ in range(samples):
        raw = rng.uniform(low, high)
        point = tuple(
            min(max(_rationalize(float(val)), lower), upper)
            for val, lower, upper in zip(raw, box.lower, box.upper)
        )
        hess = SymMatrix.from_rows(
            [[entry.evaluate(point) for entry in row] for row in hessian]
        )
        eigenvalues, eigenvectors = np.linalg.eigh(hess.to_float())
        if eigenvalues[0] >= 0:
            continue
        vec = eigenvectors[:, 0]
        vec = vec / np.max(np.abs(vec))
        direction = tuple(_rationalize(float(v)) for v in vec)
        if not any(direction):
            continue
        if hess.quadratic_form(direction) < 0:
            return point, direction
    return None


def negative_curvature_search(
    poly: Polynomial, box: Box, samples: int, seed: int
) -> Optional[Tuple[Vector, Vector]]:
    """Samples ``samples`` points of ``box`` from a generator seeded with
    ``seed`` and looks for a direction of negative curvature of ``poly`` at
    each of them numerically. Sample points and candidate directions are
    rationalized (denominators at most :py:data:`SAMPLE_DENOMINATOR_CAP`)
    and only pairs ``(point, z)`` that satisfy ``zᵀ ∇²p(point) z < 0`` in
    exact arithmetic are returned.

    """
    restriction = _Restriction.of(poly, box)
    if restriction.polynomial.nvars == 0:
        return None
    found = _search(
        restriction.polynomial, restriction.reduced_box, samples, seed
    )
    if found is None:
        return None
    return (
        restriction.embed(found[0], fill=True),
        restriction.embed(found[1], fill=False),
    )


def check_sampled(
    poly: Polynomial, box: Box, budget: int, seed: int
) -> ConvexityVerdict:
    """Tri-state check of any degree: the sufficient Gershgorin test first,
    then the sampled negative curvature search with ``budget`` samples.

    """
    restriction = _Restriction.of(poly, box)
    reduced, reduced_box = restriction.polynomial, restriction.reduced_box
    if gershgorin_box_sufficient(reduced, reduced_box):
        return ConvexityVerdict(
            ConvexityStatus.CONVEX, CertificationMode.GERSHGORIN_SUFFICIENT
        )
    found = _search(reduced, reduced_box, budget, seed) if reduced.nvars else None
    if found is not None:
        return restriction.not_convex(
            CertificationMode.NEGATIVE_CURVATURE_SEARCH, found[0], found[1]
        )
    return ConvexityVerdict(
        ConvexityStatus.UNKNOWN,
        CertificationMode.INCONCLUSIVE,
        diagnostics=(
            "interval Hessian is not diagonally dominant and no direction of "
            f"negative curvature was found in {budget} samples (seed {seed})"
        ),
    )


def check_general(
    poly: Polynomial, box: Box, budget: int, seed: int
) -> ConvexityVerdict:
    """Checks convexity of a polynomial of any degree over ``box``.

    Degree at most 2 is decided by :py:func:`check_quadratic`, degree 3 by
    :py:func:`check_cubic_exact` and higher degrees by
    :py:func:`check_sampled`. Convex and nonconvex verdicts always carry an
    exact certificate.

    """
    if poly.nvars != box.dim:
        raise DimensionMismatchError(
            f"Polynomial in {poly.nvars} variables checked over a "
            f"{box.dim}-dimensional box"
        )
    if poly.degree <= 2:
        return check_quadratic(poly, box)
    if poly.degree == 3:
        return check_cubic_exact(poly, box)
    return check_sampled(poly, box, budget, seed)


def check_lifted_exact(
    base: Polynomial, base_box: Box, degree: int
) -> ConvexityVerdict:
    """Decides convexity of ``base + x_{n+1}^degree`` over
    ``base_box x [0, 1]`` exactly, for a polynomial ``base`` of degree at most
    3. The Hessian of the lifted polynomial is block diagonal with the
    nonnegative entry ``d (d-1) x_{n+1}^(d-2)``, so the verdict is the one of
    the base polynomial over ``base_box``.

    Raises:
        DegreeTooHighError: if ``base`` has degree 4 or higher
        BadDegreeError: if ``degree < 4``
    """
    if degree < 4:
        raise BadDegreeError(f"Lifting degree must be at least 4, got {degree}")
    lifted, lifted_box = lift_degree(base, base_box, degree)
    verdict = check_cubic_exact(base, base_box)
    if verdict.status != ConvexityStatus.NOT_CONVEX:
        return verdict

    assert (
        verdict.witness_point is not None
        and verdict.witness_direction is not None
    )
    point = verdict.witness_point + (Fraction(0),)
    direction = verdict.witness_direction + (Fraction(0),)
    value = lifted.hessian_at(point).quadratic_form(direction)
    assert value == verdict.witness_value and lifted_box.contains(point)
    return ConvexityVerdict(
        ConvexityStatus.NOT_CONVEX, verdict.mode, point, direction, value
    )

