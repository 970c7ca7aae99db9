"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`CPDError`.
Errors caused by malformed arguments also derive from :class:`ValueError` so
that generic callers can catch them the usual way.
"""


class CPDError(Exception):
    """Base class for all package errors."""


# --- argument / shape errors ------------------------------------------------

class InvalidDimsError(CPDError, ValueError):
    """Dimensions are incompatible with the requested operation."""


class NotMemberError(CPDError, ValueError):
    """A tuple does not belong to the multi-index family."""


class BinomialOverflowError(CPDError, OverflowError):
    """A binomial coefficient does not fit in a signed 64-bit integer."""


class TooLargeError(CPDError, ValueError):
    """Input exceeds a hard size cap."""


class BadLengthError(CPDError, ValueError):
    """Vector length is not of the required form."""


class ColumnMismatchError(CPDError, ValueError):
    """Matrices do not share the same number of columns."""


class BadShapeError(CPDError, ValueError):
    """Array shape is inconsistent with the declared dimensions."""


class FormatError(CPDError, ValueError):
    """A tensor or factor file does not follow the documented grammar."""


# --- numerical failures of the solvers ---------------------------------------

class GEVDError(CPDError):
    """Base class for failures of the two-slice pencil solver."""


class ComplexEigenvaluesError(GEVDError):
    """The pencil has eigenvalues with a significant imaginary part."""


class EigenvalueCollisionError(GEVDError):
    """Two pencil eigenvalues coincide to working precision."""


class DegeneratePencilError(GEVDError):
    """The compressed second pencil matrix is singular for every seed tried."""


class RankMismatchError(GEVDError):
    """The multilinear rank of the tensor differs from the requested rank."""


class DiagnosticError(CPDError):
    """A working condition of the algebraic algorithm is violated.

    Attributes
    ----------
    report : DiagnosticsReport or None
        Diagnostics collected up to the point of failure.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class KernelDimMismatchError(DiagnosticError):
    """The kernel of the detecting matrix has an unexpected dimension."""


class WCpdFailedError(DiagnosticError):
    """The CPD of the kernel tensor could not be computed."""


class NotEnoughColumnsError(DiagnosticError):
    """Fewer than R candidate columns of C were found."""


class TooManyColumnsError(DiagnosticError):
    """More than R non-collinear candidate columns of C were found."""


class AlignmentFailedError(DiagnosticError):
    """Reduced third factor could not be matched to the known one."""


class Rank1SplitFailedError(DiagnosticError):
    """A Khatri-Rao column is not a vectorized rank-1 matrix."""


class PairScanEmptyError(DiagnosticError):
    """No slice pair of the transformed tensor has the required rank."""


class ClusterCountMismatchError(DiagnosticError):
    """Collinearity clustering did not produce exactly R clusters."""


class ResidualTooLargeError(DiagnosticError):
    """The final decomposition does not reproduce the tensor."""


class NoBijectionError(CPDError):
    """Two sets of factor matrices cannot be matched column by column."""
