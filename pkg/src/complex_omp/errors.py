"""Exception types raised by the package."""

import numpy as np


class OmpError(Exception):
    """Base class for all package errors."""


class DimensionError(OmpError, ValueError):
    pass


class SingularMatrixError(OmpError, np.linalg.LinAlgError):
    """Raised when a least-squares system is (numerically) rank deficient.

    ``column`` is the index, in the caller's column numbering, of the first
    column found to be linearly dependent on the ones already factored.
    """

    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"matrix is rank deficient at column {column}")


class DegenerateAtomError(OmpError, ValueError):
    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"column {column} has (near) zero norm")


class DomainError(OmpError, ValueError):
    pass


class CertificateInapplicableError(OmpError, ValueError):
    pass


class InconsistencyError(OmpError, ValueError):
    pass


class DegenerateInputError(OmpError, ValueError):
    pass


class ParseError(OmpError, ValueError):
    """Malformed input file. ``line`` is 1-based, ``field`` names the offending cell or key."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
