"""The linalg module contains the exact rational scalar, vector and matrix
arithmetic that every other module of :py:mod:`boxconvex` is built on, as well
as the certified positive semidefiniteness tests.

Rationals are :py:class:`fractions.Fraction` instances throughout; they
normalize themselves on construction, so equality is canonical.

"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any
from typing import Iterable
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

import numpy as np
import numpy.typing as npt

from boxconvex.errors import DimensionMismatchError
from boxconvex.errors import InputFormatError
from boxconvex.errors import SingularMatrixError
from boxconvex.logging import _logger

#: The universal number type of :py:mod:`boxconvex`
Rational = Fraction

#: Anything that converts losslessly into a :py:data:`Rational`
RationalLike = Union[int, Fraction, str]

#: An exact vector
Vector = Tuple[Fraction, ...]

_RATIONAL_RE = re.compile(r"^\s*(?P<num>[+-]?\d+)(\s*/\s*(?P<den>\d+))?\s*$")


def parse_rational(value: RationalLike) -> Fraction:
    """Converts an integer, a :py:class:`~fractions.Fraction` or a string of
    the form ``p/q``, ``-p/q`` or ``p`` into a normalized rational.

    Floating point numbers and float-like strings are rejected, as they
    cannot be represented exactly.

    >>> parse_rational("6/4")
    Fraction(3, 2)
    >>> parse_rational(-2)
    Fraction(-2, 1)

    """
    if isinstance(value, bool):
        raise InputFormatError(f"Invalid rational number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        matches = _RATIONAL_RE.match(value)
        if not matches:
            raise InputFormatError(f"Invalid rational number: '{value}'")
        den = int(matches.group("den") or 1)
        if den == 0:
            raise InputFormatError(f"Zero denominator in '{value}'")
        return Fraction(int(matches.group("num")), den)
    raise InputFormatError(f"Invalid rational number: {value!r}")


def format_rational(value: Fraction) -> str:
    """Canonical string form of a rational: ``p/q`` or ``-p/q`` and just
    ``p`` when the denominator is one.

    >>> format_rational(Fraction(-3, 6))
    '-1/2'
    >>> format_rational(Fraction(4, 2))
    '2'

    """
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_vector(values: Iterable[RationalLike]) -> Vector:
    """Convert the given values into an exact vector."""
    return tuple(parse_rational(v) for v in values)


def vector_from_json(raw: Any) -> Vector:
    """Parse a JSON array of rational strings (or integers) into a vector."""
    if not isinstance(raw, list):
        raise InputFormatError(f"Expected a JSON array, got {raw!r}")
    return to_vector(raw)


def vector_to_json(vector: Sequence[Fraction]) -> List[str]:
    """Serialize a vector into a list of canonical rational strings."""
    return [format_rational(Fraction(v)) for v in vector]


def common_denominator(values: Iterable[Fraction]) -> int:
    """Returns the least common multiple of the denominators of ``values``
    (1 for an empty iterable).

    """
    res = 1
    for val in values:
        res = math.lcm(res, val.denominator)
    return res


def dot(lhs: Sequence[Fraction], rhs: Sequence[Fraction]) -> Fraction:
    """Exact inner product of two vectors of equal length."""
    if len(lhs) != len(rhs):
        raise DimensionMismatchError(
            f"Cannot multiply vectors of length {len(lhs)} and {len(rhs)}"
        )
    return sum((a * b for a, b in zip(lhs, rhs)), Fraction(0))


def all_ones(n: int) -> Vector:
    """The vector of all ones ``e`` of length ``n``."""
    return (Fraction(1),) * n


@dataclass(frozen=True)
class SymMatrix:
    """A dense symmetric matrix with rational entries.

    The entries are converted into :py:class:`~fractions.Fraction` on
    construction and the matrix is checked for symmetry.

    """

    #: row-major entries, ``entries[i][j] == entries[j][i]``
    entries: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(
            tuple(parse_rational(val) for val in row) for row in self.entries
        )
        dim = len(rows)
        if dim == 0:
            raise InputFormatError("A matrix must have at least one row")
        for i, row in enumerate(rows):
            if len(row) != dim:
                raise InputFormatError(
                    f"Row {i} has {len(row)} entries, expected {dim}"
                )
        for i in range(dim):
            for j in range(i + 1, dim):
                if rows[i][j] != rows[j][i]:
                    raise InputFormatError(
                        f"Matrix is not symmetric: entry ({i}, {j}) is "
                        f"{rows[i][j]} but ({j}, {i}) is {rows[j][i]}"
                    )
        object.__setattr__(self, "entries", rows)

    @property
    def dim(self) -> int:
        """Number of rows (and columns) of the matrix."""
        return len(self.entries)

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        return self.entries[index[0]][index[1]]

    def __str__(self) -> str:
        return (
            "["
            + ", ".join(
                "[" + ", ".join(format_rational(v) for v in row) + "]"
                for row in self.entries
            )
            + "]"
        )

    @staticmethod
    def from_rows(rows: Sequence[Sequence[RationalLike]]) -> "SymMatrix":
        """Create a matrix from a nested sequence of rational-like values."""
        return SymMatrix(tuple(tuple(row) for row in rows))  # type: ignore[arg-type]

    @staticmethod
    def zeros(dim: int) -> "SymMatrix":
        """The ``dim x dim`` zero matrix."""
        return SymMatrix(((Fraction(0),) * dim,) * dim)

    @staticmethod
    def identity(dim: int) -> "SymMatrix":
        """The ``dim x dim`` identity matrix ``I``."""
        return SymMatrix.diagonal([Fraction(1)] * dim)

    @staticmethod
    def diagonal(values: Sequence[RationalLike]) -> "SymMatrix":
        """A diagonal matrix with the given diagonal."""
        dim = len(values)
        return SymMatrix(
            tuple(
                tuple(
                    parse_rational(values[i]) if i == j else Fraction(0)
                    for j in range(dim)
                )
                for i in range(dim)
            )
        )

    def _check_same_dim(self, other: "SymMatrix") -> None:
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"Matrix dimensions {self.dim} and {other.dim} differ"
            )

    def __add__(self, other: "SymMatrix") -> "SymMatrix":
        self._check_same_dim(other)
        return SymMatrix(
            tuple(
                tuple(a + b for a, b in zip(row, other_row))
                for row, other_row in zip(self.entries, other.entries)
            )
        )

    def __sub__(self, other: "SymMatrix") -> "SymMatrix":
        return self + other.scaled(Fraction(-1))

    def scaled(self, factor: RationalLike) -> "SymMatrix":
        """Returns ``factor * self``."""
        fac = parse_rational(factor)
        return SymMatrix(
            tuple(tuple(fac * v for v in row) for row in self.entries)
        )

    def matvec(self, vector: Sequence[Fraction]) -> Vector:
        """Matrix vector product ``M v``."""
        if len(vector) != self.dim:
            raise DimensionMismatchError(
                f"Vector of length {len(vector)} does not fit a "
                f"{self.dim}x{self.dim} matrix"
            )
        return tuple(dot(row, vector) for row in self.entries)

    def quadratic_form(self, vector: Sequence[Fraction]) -> Fraction:
        """Exact value of ``vᵀ M v``."""
        return dot(vector, self.matvec(vector))

    def matmul(self, other: "SymMatrix") -> Tuple[Vector, ...]:
        """Returns the rows of the (in general non-symmetric) product
        ``self @ other``.

        """
        self._check_same_dim(other)
        cols = list(zip(*other.entries))
        return tuple(
            tuple(dot(row, col) for col in cols) for row in self.entries
        )

    def principal_submatrix(self, indices: Sequence[int]) -> "SymMatrix":
        """The principal submatrix on the given row/column indices."""
        return SymMatrix(
            tuple(
                tuple(self.entries[i][j] for j in indices) for i in indices
            )
        )

    def integral(self) -> Tuple[int, Tuple[Tuple[int, ...], ...]]:
        """Returns ``(s, N)`` where ``s`` is the smallest positive integer
        such that ``N = s * M`` has integer entries.

        """
        scale = common_denominator(v for row in self.entries for v in row)
        return scale, tuple(
            tuple(int(v * scale) for v in row) for row in self.entries
        )

    def to_float(self) -> npt.NDArray[np.float64]:
        """Floating point copy of the matrix as a numpy array."""
        return np.array(
            [[float(v) for v in row] for row in self.entries], dtype=float
        )

    def to_json(self) -> Any:
        """Serialize into ``{"n": dim, "entries": [["p/q", ...], ...]}``."""
        return {
            "n": self.dim,
            "entries": [vector_to_json(row) for row in self.entries],
        }

    @staticmethod
    def from_json(raw: Any) -> "SymMatrix":
        """Create a matrix from its JSON representation."""
        if not isinstance(raw, dict) or "entries" not in raw:
            raise InputFormatError(f"Invalid matrix object: {raw!r}")
        entries = raw["entries"]
        if not isinstance(entries, list) or not all(
            isinstance(row, list) for row in entries
        ):
            raise InputFormatError(f"Invalid matrix entries: {entries!r}")
        mat = SymMatrix(tuple(vector_from_json(row) for row in entries))
        if "n" in raw and raw["n"] != mat.dim:
            raise InputFormatError(
                f"Matrix claims n={raw['n']} but has {mat.dim} rows"
            )
        return mat


@dataclass(frozen=True)
class _EliminationStep:
    """Record of one fraction-free pivot step on the integral matrix."""

    #: row/column index of the pivot
    index: int
    #: pivot entry after the previous steps (0 for a skipped zero row)
    pivot: int
    #: divisor of the step, i.e. the previous nonzero pivot (or 1)
    divisor: int
    #: entries below the pivot in the pivot column
    column: Tuple[int, ...]


def _fraction_free_elimination(
    rows: Sequence[Sequence[int]],
) -> Tuple[List[_EliminationStep], Optional[Tuple[int, Optional[int]]]]:
    """Symmetric fraction-free (Bareiss) elimination down the diagonal of an
    integral matrix.

    Returns the list of completed steps and ``None`` if every pivot was
    nonnegative, or ``(k, j)`` describing the first violation: ``j`` is
    ``None`` for a negative pivot in row ``k`` and otherwise the first column
    with a nonzero entry in the zero-pivot row ``k``.

    """
    dim = len(rows)
    work = [list(row) for row in rows]
    steps: List[_EliminationStep] = []
    prev = 1
    for k in range(dim):
        row_k = work[k]
        pivot = row_k[k]
        if pivot < 0:
            return steps, (k, None)
        if pivot == 0:
            for j in range(k + 1, dim):
                if row_k[j] != 0:
                    return steps, (k, j)
            steps.append(
                _EliminationStep(k, 0, prev, (0,) * (dim - k - 1))
            )
            continue

        steps.append(
            _EliminationStep(
                k, pivot, prev, tuple(work[i][k] for i in range(k + 1, dim))
            )
        )
        for i in range(k + 1, dim):
            row_i = work[i]
            a_ik = row_i[k]
            for j in range(i, dim):
                val = (pivot * row_i[j] - a_ik * row_k[j]) // prev
                row_i[j] = val
                work[j][i] = val
        prev = pivot
    return steps, None


def is_psd_integral(rows: Sequence[Sequence[int]]) -> bool:
    """Fast verdict-only positive semidefiniteness test of a symmetric
    integral matrix. It performs the same elimination as :py:func:`is_psd`
    but builds no certificate.

    """
    return _fraction_free_elimination(rows)[1] is None


def _gauss_jordan(aug: List[List[Fraction]], dim: int) -> List[List[Fraction]]:
    """Reduces the left ``dim x dim`` block of the augmented matrix ``aug`` to
    the identity in place and returns ``aug``.

    Raises:
        SingularMatrixError: if the left block is singular
    """
    for col in range(dim):
        pivot_row = next(
            (r for r in range(col, dim) if aug[r][col] != 0), None
        )
        if pivot_row is None:
            raise SingularMatrixError("The matrix is singular")
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        piv = aug[col][col]
        aug[col] = [v / piv for v in aug[col]]
        for r in range(dim):
            if r != col and aug[r][col] != 0:
                fac = aug[r][col]
                aug[r] = [a - fac * b for a, b in zip(aug[r], aug[col])]
    return aug


def solve(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> Vector:
    """Solve the square linear system ``rows @ x = rhs`` exactly by
    Gauss-Jordan elimination.

    Raises:
        SingularMatrixError: if the system matrix is singular
    """
    dim = len(rows)
    aug = _gauss_jordan([list(row) + [rhs[i]] for i, row in enumerate(rows)], dim)
    return tuple(aug[r][dim] for r in range(dim))


@dataclass(frozen=True)
class PsdCertificate:
    """Outcome of :py:func:`is_psd`.

    On success, the recorded fraction-free elimination steps yield an
    ``L D Lᵀ`` factorization with nonnegative ``D`` reconstructing the matrix
    (see :py:meth:`reconstruct`). On failure, :py:attr:`witness` is a vector
    ``v`` with ``vᵀ M v < 0``.

    """

    #: ``True`` if and only if the matrix is positive semidefinite
    verdict: bool

    #: the tested matrix
    matrix: SymMatrix

    #: positive integer ``s`` such that ``s * M`` is integral; the
    #: elimination runs on ``s * M``
    scale: int

    #: fraction-free elimination steps (up to the first violation)
    steps: Tuple[_EliminationStep, ...]

    #: index of the first violating pivot on failure
    failing_index: Optional[int] = None

    #: vector ``v`` with ``vᵀ M v < 0`` on failure
    witness: Optional[Vector] = None

    def __bool__(self) -> bool:
        return self.verdict

    @cached_property
    def witness_value(self) -> Optional[Fraction]:
        """The (negative) value ``vᵀ M v`` of the witness."""
        if self.witness is None:
            return None
        return self.matrix.quadratic_form(self.witness)

    @cached_property
    def pivots(self) -> Vector:
        """The diagonal ``D`` of the factorization of :py:attr:`matrix`, i.e.
        the pivots of the completed steps divided by the scale.

        """
        return tuple(
            Fraction(step.pivot, step.divisor * self.scale)
            for step in self.steps
        )

    @cached_property
    def factor(self) -> Tuple[Vector, ...]:
        """The unit lower triangular factor ``L`` of the completed steps."""
        dim = self.matrix.dim
        lower = [
            [Fraction(int(i == j)) for j in range(dim)] for i in range(dim)
        ]
        for step in self.steps:
            if step.pivot == 0:
                continue
            for offset, entry in enumerate(step.column):
                lower[step.index + 1 + offset][step.index] = Fraction(
                    entry, step.pivot
                )
        return tuple(tuple(row) for row in lower)

    def reconstruct(self) -> SymMatrix:
        """Returns ``L D Lᵀ`` from the recorded factorization. This equals
        :py:attr:`matrix` exactly when :py:attr:`verdict` is ``True``.

        """
        if not self.verdict:
            raise ValueError(
                "Only successful certificates carry a full factorization"
            )
        dim = self.matrix.dim
        lower, diag = self.factor, self.pivots
        return SymMatrix(
            tuple(
                tuple(
                    sum(
                        (
                            lower[i][k] * diag[k] * lower[j][k]
                            for k in range(min(i, j) + 1)
                        ),
                        Fraction(0),
                    )
                    for j in range(dim)
                )
                for i in range(dim)
            )
        )


def _witness(
    mat: SymMatrix,
    scaled: Sequence[Sequence[int]],
    steps: Sequence[_EliminationStep],
    violation: Tuple[int, Optional[int]],
) -> Vector:
    """Back-substitutes the Schur complement violation into a vector ``v``
    with ``vᵀ M v < 0``.

    """
    k, j = violation
    dim = mat.dim
    active = [step.index for step in steps if step.pivot != 0]

    # current Schur complement of the integral matrix, up to a positive factor
    work = [[Fraction(v) for v in row] for row in scaled]
    for idx in active:
        piv = work[idx][idx]
        for r in range(dim):
            if r == idx or work[r][idx] == 0:
                continue
            fac = work[r][idx] / piv
            work[r] = [a - fac * b for a, b in zip(work[r], work[idx])]

    # vector u on the remaining indices with uᵀ S u < 0
    tail = [Fraction(0)] * dim
    if j is None:
        tail[k] = Fraction(1)
    else:
        tail[k] = -(work[j][j] + 1) / (2 * work[k][j])
        tail[j] = Fraction(1)

    if not active:
        return tuple(tail)

    rhs = [
        -sum((mat[p, r] * tail[r] for r in range(dim)), Fraction(0))
        for p in active
    ]
    head = solve(
        [[mat[p, q] for q in active] for p in active],
        rhs,
    )
    for p, val in zip(active, head):
        tail[p] = val
    return tuple(tail)


def is_psd(mat: SymMatrix) -> PsdCertificate:
    """Decides exactly whether ``mat`` is positive semidefinite.

    The matrix is scaled to an integral matrix and eliminated with symmetric
    fraction-free pivoting down the diagonal: a zero pivot is acceptable only
    if its whole remaining row is zero (the index is then skipped), a negative
    pivot or a zero pivot with a nonzero remaining row ends the elimination.
    In the latter case, the witness is back-substituted from the first
    violating pivot in row order, so it is deterministic.

    """
    scale, scaled = mat.integral()
    steps, violation = _fraction_free_elimination(scaled)
    if violation is None:
        return PsdCertificate(True, mat, scale, tuple(steps))

    witness = _witness(mat, scaled, steps, violation)
    _logger.debug(
        "Matrix is not PSD: pivot %d fails, witness %s",
        violation[0],
        vector_to_json(witness),
    )
    cert = PsdCertificate(
        False, mat, scale, tuple(steps), violation[0], witness
    )
    value = cert.witness_value
    assert value is not None and value < 0, "witness must be negative"
    return cert


def characteristic_polynomial(mat: SymMatrix) -> Vector:
    """Coefficients of ``det(λI - M)`` in descending order of the power of
    ``λ`` (the first coefficient is always 1).

    The Faddeev-LeVerrier recursion runs on the integral matrix ``s * M``,
    where every division is exact.

    >>> characteristic_polynomial(SymMatrix.identity(2))
    (Fraction(1, 1), Fraction(-2, 1), Fraction(1, 1))

    """
    scale, scaled = mat.integral()
    return tuple(
        Fraction(c, scale**power)
        for power, c in enumerate(_integral_charpoly(scaled))
    )


def _integral_charpoly(rows: Sequence[Sequence[int]]) -> List[int]:
    dim = len(rows)
    coefficients = [1]
    prev = [[0] * dim for _ in range(dim)]
    for k in range(1, dim + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        current = [
            [
                sum(rows[i][m] * prev[m][j] for m in range(dim))
                + (coefficients[-1] if i == j else 0)
                for j in range(dim)
            ]
            for i in range(dim)
        ]
        trace = sum(
            sum(rows[i][m] * current[m][i] for m in range(dim))
            for i in range(dim)
        )
        assert trace % k == 0
        coefficients.append(-trace // k)
        prev = current
    return coefficients


def is_psd_charpoly(mat: SymMatrix) -> bool:
    """Decides whether ``mat`` is positive semidefinite by checking that the
    coefficients of its characteristic polynomial alternate in sign (zeros
    allowed). Intended as an independent cross-check of :py:func:`is_psd`.

    """
    _, scaled = mat.integral()
    return all(
        (-1) ** power * c >= 0
        for power, c in enumerate(_integral_charpoly(scaled))
    )


def invert(mat: SymMatrix) -> SymMatrix:
    """Exact inverse of a nonsingular symmetric matrix.

    Raises:
        SingularMatrixError: if ``det(mat) == 0``
    """
    dim = mat.dim
    aug = _gauss_jordan(
        [
            list(mat.entries[i]) + [Fraction(int(i == j)) for j in range(dim)]
            for i in range(dim)
        ],
        dim,
    )
    return SymMatrix(tuple(tuple(row[dim:]) for row in aug))


def gershgorin_lower_bound(mat: SymMatrix) -> Fraction:
    """Lower bound ``min_i (M_ii - sum_{j != i} |M_ij|)`` on the smallest
    eigenvalue of ``mat``, by Gershgorin's circle theorem.

    """
    return min(
        row[i] - sum(abs(v) for j, v in enumerate(row) if j != i)
        for i, row in enumerate(mat.entries)
    )


def approx_eigenvalues(mat: SymMatrix) -> List[float]:
    """Floating point eigenvalues of ``mat`` in ascending order.

    These values are only ever used for cross-checks, never as an authority.

    """
    return [float(v) for v in np.linalg.eigvalsh(mat.to_float())]
