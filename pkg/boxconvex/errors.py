"""The errors module defines the exception hierarchy of :py:mod:`boxconvex`.

Every exception raised deliberately by this package derives from
:py:class:`BoxConvexError`. The command line interface maps the three main
branches onto distinct exit codes (see :py:mod:`boxconvex.cli`).

"""


class BoxConvexError(Exception):
    """Base class of all errors raised by :py:mod:`boxconvex`."""


class InputFormatError(BoxConvexError, ValueError):
    """A serialized object or a constructor argument is malformed."""


class DomainError(BoxConvexError, ValueError):
    """The input is well formed but outside of the mathematical domain of the
    requested operation.

    """


class SingularMatrixError(DomainError):
    """The matrix to invert has determinant zero."""


class DegreeTooHighError(DomainError):
    """The polynomial's total degree exceeds what the operation supports."""


class DimensionMismatchError(DomainError):
    """Vector, matrix, polynomial or box dimensions do not agree."""


class BadKError(DomainError):
    """The cut threshold ``k`` is outside of ``1 <= k <= n**2``."""


class BadDegreeError(DomainError):
    """The lifting degree ``d`` is smaller than 4."""


class CutTooSmallError(DomainError):
    """The cut does not reach the threshold ``k`` of the gadget."""


class BadIndicatorError(DomainError):
    """A cut indicator has entries other than ``-1`` and ``1`` or the wrong
    length.

    """


class BadInputError(DomainError):
    """An oracle received data outside of its precondition."""


class TooLargeError(BoxConvexError):
    """An exhaustive enumeration would exceed its hard size guard."""
