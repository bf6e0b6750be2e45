"""The interval module decides whether every symmetric matrix of an interval
family (:py:class:`IntervalSymMatrix`) is positive semidefinite and bridges
affine pencils over boxes to such families.

The smallest eigenvalue is concave on the polytope of the family, so it
suffices to check the vertex matrices. The diagonal can furthermore be fixed
at its lower bounds, as adding a nonnegative diagonal never decreases the
smallest eigenvalue.

"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

from boxconvex.errors import DimensionMismatchError
from boxconvex.errors import InputFormatError
from boxconvex.helpers import first_failure
from boxconvex.linalg import SymMatrix
from boxconvex.linalg import Vector
from boxconvex.linalg import common_denominator
from boxconvex.linalg import is_psd
from boxconvex.linalg import is_psd_integral
from boxconvex.linalg import vector_from_json
from boxconvex.linalg import vector_to_json
from boxconvex.logging import _logger
from boxconvex.polynomial import AffinePencil
from boxconvex.polynomial import Box


@dataclass(frozen=True)
class IntervalSymMatrix:
    """The family of all symmetric matrices ``M`` with
    ``lower[i][j] <= M[i][j] <= upper[i][j]``.

    """

    #: entrywise lower bounds
    lower: SymMatrix

    #: entrywise upper bounds
    upper: SymMatrix

    def __post_init__(self) -> None:
        if self.lower.dim != self.upper.dim:
            raise InputFormatError(
                f"Bounds have different dimensions {self.lower.dim} and "
                f"{self.upper.dim}"
            )
        for i in range(self.dim):
            for j in range(i, self.dim):
                if self.lower[i, j] > self.upper[i, j]:
                    raise InputFormatError(
                        f"Lower bound {self.lower[i, j]} exceeds the upper "
                        f"bound {self.upper[i, j]} at entry ({i}, {j})"
                    )

    @property
    def dim(self) -> int:
        """Size of the matrices in the family."""
        return self.lower.dim

    @staticmethod
    def point(mat: SymMatrix) -> "IntervalSymMatrix":
        """The family consisting of ``mat`` only."""
        return IntervalSymMatrix(mat, mat)

    def free_entries(self, include_diagonal: bool = False) -> List[Tuple[int, int]]:
        """Upper triangular positions ``(i, j)`` with ``lower < upper`` in
        lexicographic order. The diagonal is only included on request.

        """
        return [
            (i, j)
            for i in range(self.dim)
            for j in range(i if include_diagonal else i + 1, self.dim)
            if self.lower[i, j] != self.upper[i, j]
        ]

    def contains(self, mat: SymMatrix) -> bool:
        """Whether ``mat`` is a member of the family."""
        if mat.dim != self.dim:
            return False
        return all(
            self.lower[i, j] <= mat[i, j] <= self.upper[i, j]
            for i in range(self.dim)
            for j in range(self.dim)
        )

    def to_json(self) -> Any:
        """Serialize into ``{"n": N, "lower": [[...]], "upper": [[...]]}``."""
        return {
            "n": self.dim,
            "lower": [vector_to_json(row) for row in self.lower.entries],
            "upper": [vector_to_json(row) for row in self.upper.entries],
        }

    @staticmethod
    def from_json(raw: Any) -> "IntervalSymMatrix":
        """Create an interval family from its JSON representation."""
        if not isinstance(raw, dict) or not {"lower", "upper"} <= set(raw):
            raise InputFormatError(f"Invalid interval matrix object: {raw!r}")
        try:
            family = IntervalSymMatrix(
                SymMatrix(tuple(vector_from_json(r) for r in raw["lower"])),
                SymMatrix(tuple(vector_from_json(r) for r in raw["upper"])),
            )
        except TypeError as type_err:
            raise InputFormatError(
                f"Invalid interval matrix bounds: {raw!r}"
            ) from type_err
        if raw.get("n", family.dim) != family.dim:
            raise InputFormatError(
                f"Interval matrix claims n={raw['n']} but has {family.dim} rows"
            )
        return family


@dataclass(frozen=True)
class IntervalPsdResult:
    """Outcome of :py:func:`check_interval_psd`."""

    #: ``True`` if every member of the family is positive semidefinite
    all_psd: bool

    #: number of vertex matrices that were checked
    checked_vertices: int

    #: a member of the family that is not positive semidefinite
    witness_matrix: Optional[SymMatrix] = None

    #: ``v`` with ``vᵀ M v < 0`` for :py:attr:`witness_matrix`
    witness_vector: Optional[Vector] = None

    def __bool__(self) -> bool:
        return self.all_psd

    def to_json(self) -> Any:
        """Serialize the result; witness fields are ``null`` on success."""
        return {
            "all_psd": self.all_psd,
            "checked_vertices": self.checked_vertices,
            "witness_matrix": (
                self.witness_matrix.to_json() if self.witness_matrix else None
            ),
            "witness_vector": (
                vector_to_json(self.witness_vector)
                if self.witness_vector is not None
                else None
            ),
        }


def check_interval_psd(
    family: IntervalSymMatrix,
    fix_diagonal: bool = True,
    threads: Optional[int] = None,
) -> IntervalPsdResult:
    """Decides whether all members of ``family`` are positive semidefinite.

    Diagonal entries are fixed at their lower bounds (unless ``fix_diagonal``
    is ``False``, then they are enumerated like the off-diagonal entries) and
    the remaining free entries are enumerated over both of their bounds in
    lexicographic order, lower bound first. The first non-PSD vertex matrix
    is returned as witness.

    """
    dim = family.dim
    free = family.free_entries(include_diagonal=not fix_diagonal)
    scale = common_denominator(
        v
        for bound in (family.lower, family.upper)
        for row in bound.entries
        for v in row
    )
    base = [[int(v * scale) for v in row] for row in family.lower.entries]
    choices = [
        (i, j, int(family.lower[i, j] * scale), int(family.upper[i, j] * scale))
        for i, j in free
    ]
    _logger.debug(
        "Checking %d vertex matrices of a %dx%d interval family",
        2 ** len(free),
        dim,
        dim,
    )

    def vertex_rows(pattern: Sequence[int]) -> List[List[int]]:
        rows = [list(row) for row in base]
        for (i, j, low, high), pick in zip(choices, pattern):
            rows[i][j] = rows[j][i] = high if pick else low
        return rows

    def check(pattern: Tuple[int, ...]) -> Optional[bool]:
        return None if is_psd_integral(vertex_rows(pattern)) else False

    failure = first_failure(
        check, itertools.product((0, 1), repeat=len(free)), threads
    )
    if failure is None:
        return IntervalPsdResult(True, 2 ** len(free))

    pattern = failure[0]
    witness_matrix = SymMatrix.from_rows(
        [[Fraction(v, scale) for v in row] for row in vertex_rows(pattern)]
    )
    cert = is_psd(witness_matrix)
    assert not cert.verdict and cert.witness is not None
    checked = 1 + int("".join(map(str, pattern)) or "0", 2)
    return IntervalPsdResult(False, checked, witness_matrix, cert.witness)


def interval_enclosure(pencil: AffinePencil, box: Box) -> IntervalSymMatrix:
    """Entrywise exact range of the affine entries of ``pencil`` over
    ``box``. Every value of the pencil over the box is a member of the
    returned family; the converse only holds if no variable appears in more
    than one symmetric pair of entries.

    """
    if pencil.nvars != box.dim:
        raise DimensionMismatchError(
            f"Pencil in {pencil.nvars} variables cannot be enclosed over a "
            f"{box.dim}-dimensional box"
        )
    dim = pencil.dim
    lower = [list(row) for row in pencil.constant.entries]
    upper = [list(row) for row in pencil.constant.entries]
    for mat, low, high in zip(pencil.coefficients, box.lower, box.upper):
        for i in range(dim):
            for j in range(dim):
                coef = mat[i, j]
                if coef == 0:
                    continue
                lower[i][j] += min(coef * low, coef * high)
                upper[i][j] += max(coef * low, coef * high)
    return IntervalSymMatrix(
        SymMatrix.from_rows(lower), SymMatrix.from_rows(upper)
    )
