"""The polynomial module contains sparse multivariate polynomials with
rational coefficients (:py:class:`Polynomial`), axis aligned boxes
(:py:class:`Box`) and affine symmetric matrix pencils
(:py:class:`AffinePencil`), the form that the Hessian of every cubic
polynomial takes.

Variables are positional: ``x0, x1, ...`` are identified by their index only.

"""

import itertools
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from typing import Any
from typing import Dict
from typing import Iterator
from typing import List
from typing import Mapping
from typing import Sequence
from typing import Tuple
from typing import Union

from boxconvex.errors import DegreeTooHighError
from boxconvex.errors import DimensionMismatchError
from boxconvex.errors import InputFormatError
from boxconvex.linalg import RationalLike
from boxconvex.linalg import SymMatrix
from boxconvex.linalg import Vector
from boxconvex.linalg import common_denominator
from boxconvex.linalg import format_rational
from boxconvex.linalg import parse_rational
from boxconvex.linalg import to_vector
from boxconvex.linalg import vector_from_json
from boxconvex.linalg import vector_to_json

#: exponent vector of a monomial
Exponents = Tuple[int, ...]


def _check_point(point: Sequence[Any], nvars: int) -> None:
    if len(point) != nvars:
        raise DimensionMismatchError(
            f"Point of dimension {len(point)} given for {nvars} variables"
        )


@dataclass(frozen=True)
class Polynomial:
    """A sparse polynomial in :py:attr:`nvars` variables with rational
    coefficients. Zero coefficients are never stored.

    Polynomials support ``+``, ``-``, ``*`` (with polynomials and scalars) and
    ``**`` with nonnegative integer exponents:

    >>> x0 = Polynomial.variable(0, 2)
    >>> x1 = Polynomial.variable(1, 2)
    >>> str(x0**2 * x1 + 3)
    'x0^2*x1 + 3'

    """

    #: number of variables
    nvars: int

    #: mapping of exponent vectors to their nonzero coefficients
    terms: Dict[Exponents, Fraction] = field(
        default_factory=dict, hash=False
    )

    def __post_init__(self) -> None:
        if self.nvars < 0:
            raise InputFormatError(
                f"Number of variables must be nonnegative, got {self.nvars}"
            )
        cleaned: Dict[Exponents, Fraction] = {}
        for exps, coef in self.terms.items():
            if len(exps) != self.nvars or any(
                not isinstance(e, int) or e < 0 for e in exps
            ):
                raise InputFormatError(
                    f"Invalid exponent vector {exps} for {self.nvars} variables"
                )
            value = parse_rational(coef)
            if value != 0:
                cleaned[tuple(exps)] = value
        object.__setattr__(self, "terms", cleaned)

    @staticmethod
    def zero(nvars: int) -> "Polynomial":
        """The zero polynomial."""
        return Polynomial(nvars)

    @staticmethod
    def constant(value: RationalLike, nvars: int) -> "Polynomial":
        """The constant polynomial ``value``."""
        return Polynomial(nvars, {(0,) * nvars: parse_rational(value)})

    @staticmethod
    def variable(index: int, nvars: int) -> "Polynomial":
        """The polynomial ``x_index``."""
        if not 0 <= index < nvars:
            raise DimensionMismatchError(
                f"Variable index {index} out of range for {nvars} variables"
            )
        return Polynomial(
            nvars, {tuple(int(i == index) for i in range(nvars)): Fraction(1)}
        )

    @staticmethod
    def monomial(exps: Sequence[int], coef: RationalLike = 1) -> "Polynomial":
        """The monomial ``coef * prod(x_i ** exps[i])``."""
        return Polynomial(len(exps), {tuple(exps): parse_rational(coef)})

    def _coerce(
        self, other: Union["Polynomial", RationalLike]
    ) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise DimensionMismatchError(
                    f"Cannot combine polynomials in {self.nvars} and "
                    f"{other.nvars} variables"
                )
            return other
        return Polynomial.constant(other, self.nvars)

    def __add__(self, other: Union["Polynomial", RationalLike]) -> "Polynomial":
        rhs = self._coerce(other)
        res = dict(self.terms)
        for exps, coef in rhs.terms.items():
            res[exps] = res.get(exps, Fraction(0)) + coef
        return Polynomial(self.nvars, res)

    def __radd__(self, other: RationalLike) -> "Polynomial":
        return self + other

    def __neg__(self) -> "Polynomial":
        return Polynomial(
            self.nvars, {exps: -coef for exps, coef in self.terms.items()}
        )

    def __sub__(self, other: Union["Polynomial", RationalLike]) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other: RationalLike) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other: Union["Polynomial", RationalLike]) -> "Polynomial":
        rhs = self._coerce(other)
        res: Dict[Exponents, Fraction] = {}
        for (exps_a, coef_a), (exps_b, coef_b) in itertools.product(
            self.terms.items(), rhs.terms.items()
        ):
            exps = tuple(a + b for a, b in zip(exps_a, exps_b))
            res[exps] = res.get(exps, Fraction(0)) + coef_a * coef_b
        return Polynomial(self.nvars, res)

    def __rmul__(self, other: RationalLike) -> "Polynomial":
        return self * other

    def __pow__(self, power: int) -> "Polynomial":
        if power < 0:
            raise ValueError(f"Negative power {power} of a polynomial")
        res = Polynomial.constant(1, self.nvars)
        for _ in range(power):
            res = res * self
        return res

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, reverse=True):
            coef = self.terms[exps]
            factors = [
                f"x{i}" if e == 1 else f"x{i}^{e}"
                for i, e in enumerate(exps)
                if e > 0
            ]
            if not factors:
                parts.append(format_rational(coef))
            elif coef == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([format_rational(coef)] + factors))
        return " + ".join(parts)

    @property
    def degree(self) -> int:
        """Total degree of the polynomial; 0 for the zero polynomial."""
        return max((sum(exps) for exps in self.terms), default=0)

    def derivative(self, index: int) -> "Polynomial":
        """Partial derivative with respect to ``x_index``."""
        if not 0 <= index < self.nvars:
            raise DimensionMismatchError(
                f"Variable index {index} out of range for {self.nvars} "
                "variables"
            )
        res: Dict[Exponents, Fraction] = {}
        for exps, coef in self.terms.items():
            if exps[index] == 0:
                continue
            new_exps = list(exps)
            new_exps[index] -= 1
            res[tuple(new_exps)] = coef * exps[index]
        return Polynomial(self.nvars, res)

    def hessian(self) -> List[List["Polynomial"]]:
        """Matrix of all second order partial derivatives ``∂²p/∂xᵢ∂xⱼ``."""
        gradient = [self.derivative(i) for i in range(self.nvars)]
        hess: List[List[Polynomial]] = [
            [Polynomial.zero(self.nvars)] * self.nvars
            for _ in range(self.nvars)
        ]
        for i in range(self.nvars):
            for j in range(i, self.nvars):
                hess[i][j] = hess[j][i] = gradient[i].derivative(j)
        return hess

    def hessian_pencil(self) -> "AffinePencil":
        """The Hessian of a polynomial of degree at most 3 as an affine matrix
        pencil ``L0 + sum_k x_k L_k``.

        Raises:
            DegreeTooHighError: if the polynomial has degree 4 or higher
        """
        if self.degree > 3:
            raise DegreeTooHighError(
                f"The Hessian of a degree {self.degree} polynomial is not "
                "affine"
            )
        if self.nvars == 0:
            raise DimensionMismatchError(
                "A polynomial without variables has no Hessian"
            )
        dim = self.nvars
        mats = [
            [[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim + 1)
        ]
        for i, row in enumerate(self.hessian()):
            for j, entry in enumerate(row):
                for exps, coef in entry.terms.items():
                    # entries have degree <= 1: either constant or x_k
                    pos = next((k for k, e in enumerate(exps) if e), None)
                    mats[0 if pos is None else pos + 1][i][j] = coef
        return AffinePencil(
            SymMatrix.from_rows(mats[0]),
            tuple(SymMatrix.from_rows(m) for m in mats[1:]),
        )

    def evaluate(self, point: Sequence[RationalLike]) -> Fraction:
        """Exact value of the polynomial at ``point``."""
        _check_point(point, self.nvars)
        values = to_vector(point)
        res = Fraction(0)
        for exps, coef in self.terms.items():
            term = coef
            for val, e in zip(values, exps):
                if e:
                    term *= val**e
            res += term
        return res

    def hessian_at(self, point: Sequence[RationalLike]) -> SymMatrix:
        """Exact Hessian matrix at ``point``."""
        _check_point(point, self.nvars)
        return SymMatrix.from_rows(
            [[entry.evaluate(point) for entry in row] for row in self.hessian()]
        )

    def restrict(
        self, assignments: Mapping[int, RationalLike]
    ) -> "Polynomial":
        """Substitute the given variables by rational values. The remaining
        variables are renumbered in their original order.

        >>> p = Polynomial.variable(0, 2) + Polynomial.variable(1, 2)
        >>> str(p.restrict({0: 1}))
        'x0 + 1'

        """
        for index in assignments:
            if not 0 <= index < self.nvars:
                raise DimensionMismatchError(
                    f"Cannot assign variable {index} of a polynomial in "
                    f"{self.nvars} variables"
                )
        values = {i: parse_rational(v) for i, v in assignments.items()}
        kept = [i for i in range(self.nvars) if i not in values]
        res: Dict[Exponents, Fraction] = {}
        for exps, coef in self.terms.items():
            for i, val in values.items():
                coef *= val ** exps[i]
            new_exps = tuple(exps[i] for i in kept)
            res[new_exps] = res.get(new_exps, Fraction(0)) + coef
        return Polynomial(len(kept), res)

    def extended(self, nvars: int) -> "Polynomial":
        """The same polynomial in ``nvars >= self.nvars`` variables; the new
        variables are appended and do not occur.

        """
        if nvars < self.nvars:
            raise DimensionMismatchError(
                f"Cannot embed {self.nvars} variables into {nvars}"
            )
        pad = (0,) * (nvars - self.nvars)
        return Polynomial(
            nvars, {exps + pad: coef for exps, coef in self.terms.items()}
        )

    def to_json(self) -> Any:
        """Serialize into ``{"nvars": m, "terms": [{"exps": [...],
        "coef": "p/q"}, ...]}`` with the terms in ascending exponent order.

        """
        return {
            "nvars": self.nvars,
            "terms": [
                {"exps": list(exps), "coef": format_rational(self.terms[exps])}
                for exps in sorted(self.terms)
            ],
        }

    @staticmethod
    def from_json(raw: Any) -> "Polynomial":
        """Create a polynomial from its JSON representation. Duplicate
        exponent vectors are rejected.

        """
        if (
            not isinstance(raw, dict)
            or not isinstance(raw.get("nvars"), int)
            or not isinstance(raw.get("terms"), list)
        ):
            raise InputFormatError(f"Invalid polynomial object: {raw!r}")
        terms: Dict[Exponents, Fraction] = {}
        for term in raw["terms"]:
            if (
                not isinstance(term, dict)
                or not isinstance(term.get("exps"), list)
                or "coef" not in term
            ):
                raise InputFormatError(f"Invalid polynomial term: {term!r}")
            exps = tuple(term["exps"])
            if exps in terms:
                raise InputFormatError(f"Duplicate exponent vector {exps}")
            terms[exps] = parse_rational(term["coef"])
        return Polynomial(raw["nvars"], terms)


@dataclass(frozen=True)
class Box:
    """The axis aligned box ``{x | lower_i <= x_i <= upper_i}``."""

    #: lower bounds of the box
    lower: Vector

    #: upper bounds of the box
    upper: Vector

    def __post_init__(self) -> None:
        lower = to_vector(self.lower)
        upper = to_vector(self.upper)
        if len(lower) != len(upper):
            raise InputFormatError(
                f"Box has {len(lower)} lower but {len(upper)} upper bounds"
            )
        for i, (low, high) in enumerate(zip(lower, upper)):
            if low > high:
                raise InputFormatError(
                    f"Lower bound {low} exceeds upper bound {high} in "
                    f"coordinate {i}"
                )
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    def __str__(self) -> str:
        return " x ".join(
            f"[{format_rational(low)}, {format_rational(high)}]"
            for low, high in zip(self.lower, self.upper)
        )

    @staticmethod
    def cube(
        dim: int, low: RationalLike = -1, high: RationalLike = 1
    ) -> "Box":
        """The box ``[low, high]^dim``."""
        return Box(
            (parse_rational(low),) * dim, (parse_rational(high),) * dim
        )

    @property
    def dim(self) -> int:
        """Dimension of the ambient space."""
        return len(self.lower)

    def vertices(self) -> Iterator[Vector]:
        """All extreme points of the box in lexicographic order, the lower
        bound of each coordinate before its upper bound. Degenerate
        coordinates contribute a single value.

        """
        return itertools.product(
            *(
                (low,) if low == high else (low, high)
                for low, high in zip(self.lower, self.upper)
            )
        )

    def contains(self, point: Sequence[RationalLike]) -> bool:
        """Whether ``point`` lies in the (closed) box."""
        _check_point(point, self.dim)
        return all(
            low <= val <= high
            for low, val, high in zip(self.lower, to_vector(point), self.upper)
        )

    def fixed_coordinates(self) -> Dict[int, Fraction]:
        """Mapping of the degenerate coordinates (``lower == upper``) to their
        value.

        """
        return {
            i: low
            for i, (low, high) in enumerate(zip(self.lower, self.upper))
            if low == high
        }

    @property
    def free_indices(self) -> Tuple[int, ...]:
        """Indices of the non degenerate coordinates."""
        return tuple(
            i
            for i, (low, high) in enumerate(zip(self.lower, self.upper))
            if low != high
        )

    def reduced(self) -> "Box":
        """The box spanned by the non degenerate coordinates only."""
        return Box(
            tuple(self.lower[i] for i in self.free_indices),
            tuple(self.upper[i] for i in self.free_indices),
        )

    def product(self, other: "Box") -> "Box":
        """The cartesian product ``self x other``."""
        return Box(self.lower + other.lower, self.upper + other.upper)

    def to_json(self) -> Any:
        """Serialize into ``{"lower": [...], "upper": [...]}``."""
        return {
            "lower": vector_to_json(self.lower),
            "upper": vector_to_json(self.upper),
        }

    @staticmethod
    def from_json(raw: Any) -> "Box":
        """Create a box from its JSON representation."""
        if not isinstance(raw, dict) or not {"lower", "upper"} <= set(raw):
            raise InputFormatError(f"Invalid box object: {raw!r}")
        return Box(vector_from_json(raw["lower"]), vector_from_json(raw["upper"]))


@dataclass(frozen=True)
class AffinePencil:
    """The symmetric matrix valued map ``L(x) = L0 + sum_k x_k L_k``."""

    #: the constant matrix ``L0``
    constant: SymMatrix

    #: the matrices ``L1, ..., L_nvars``
    coefficients: Tuple[SymMatrix, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        for k, mat in enumerate(self.coefficients):
            if mat.dim != self.constant.dim:
                raise InputFormatError(
                    f"Coefficient {k + 1} is {mat.dim}x{mat.dim} but the "
                    f"constant matrix is {self.dim}x{self.dim}"
                )

    @property
    def dim(self) -> int:
        """Size of the matrices of the pencil."""
        return self.constant.dim

    @property
    def nvars(self) -> int:
        """Number of variables of the pencil."""
        return len(self.coefficients)

    def evaluate(self, point: Sequence[RationalLike]) -> SymMatrix:
        """The matrix ``L(point)``."""
        _check_point(point, self.nvars)
        values = to_vector(point)
        rows = [list(row) for row in self.constant.entries]
        for val, mat in zip(values, self.coefficients):
            if val == 0:
                continue
            for i, row in enumerate(mat.entries):
                for j, entry in enumerate(row):
                    if entry:
                        rows[i][j] += val * entry
        return SymMatrix.from_rows(rows)

    def integral_evaluator(self, denominator: int) -> "IntegralPencil":
        """An evaluator of positive integral multiples of ``L(x)`` for points
        whose coordinates are all multiples of ``1/denominator``.

        """
        return IntegralPencil(self, denominator)

    def to_json(self) -> Any:
        """Serialize into ``{"n": dim, "nvars": m, "constant": <matrix>,
        "coefficients": [<matrix>, ...]}``.

        """
        return {
            "n": self.dim,
            "nvars": self.nvars,
            "constant": self.constant.to_json(),
            "coefficients": [mat.to_json() for mat in self.coefficients],
        }

    @staticmethod
    def from_json(raw: Any) -> "AffinePencil":
        """Create a pencil from its JSON representation."""
        if (
            not isinstance(raw, dict)
            or "constant" not in raw
            or not isinstance(raw.get("coefficients"), list)
        ):
            raise InputFormatError(f"Invalid pencil object: {raw!r}")
        pencil = AffinePencil(
            SymMatrix.from_json(raw["constant"]),
            tuple(SymMatrix.from_json(m) for m in raw["coefficients"]),
        )
        if raw.get("nvars", pencil.nvars) != pencil.nvars:
            raise InputFormatError(
                f"Pencil claims {raw['nvars']} variables but has "
                f"{pencil.nvars} coefficient matrices"
            )
        return pencil


class IntegralPencil:
    """Evaluates ``s * L(x)`` as an integer matrix for a fixed positive
    integer ``s``, given points with coordinates in ``(1/denominator) Z``.
    Used to run the fraction-free PSD test on many points without rational
    arithmetic.

    """

    def __init__(self, pencil: AffinePencil, denominator: int) -> None:
        self._denominator = denominator
        self._pencil_scale = common_denominator(
            v
            for mat in (pencil.constant,) + pencil.coefficients
            for row in mat.entries
            for v in row
        )
        self._constant = [
            [int(v * self._pencil_scale * denominator) for v in row]
            for row in pencil.constant.entries
        ]
        self._coefficients = [
            [
                (i, j, int(v * self._pencil_scale))
                for i, row in enumerate(mat.entries)
                for j, v in enumerate(row)
                if v
            ]
            for mat in pencil.coefficients
        ]

    @property
    def scale(self) -> int:
        """The positive factor ``s`` of the evaluated matrices."""
        return self._pencil_scale * self._denominator

    def at(self, point: Sequence[Fraction]) -> List[List[int]]:
        """The integer matrix ``s * L(point)``."""
        rows = [list(row) for row in self._constant]
        for val, nonzeros in zip(point, self._coefficients):
            scaled = val * self._denominator
            if scaled.denominator != 1:
                raise DimensionMismatchError(
                    f"Coordinate {val} is not a multiple of "
                    f"1/{self._denominator}"
                )
            factor = scaled.numerator
            if factor == 0:
                continue
            for i, j, entry in nonzeros:
                rows[i][j] += factor * entry
        return rows