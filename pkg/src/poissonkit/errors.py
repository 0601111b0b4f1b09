"""Exception hierarchy shared by every module."""


class PoissonKitError(Exception):
    pass


class DimensionError(PoissonKitError, ValueError):
    """Operands live over different numbers of variables."""


class DegreeError(PoissonKitError, ValueError):
    """An operand has the wrong (or an inhomogeneous) degree."""


class ParseError(PoissonKitError, ValueError):
    def __init__(self, message, text=None, column=None):
        self.text = text
        self.column = column
        if column is not None:
            message = f"{message} (column {column + 1})"
        super().__init__(message)


class UnverifiedStructureError(PoissonKitError):
    """The bivector has not passed the Jacobi check."""


class TruncationError(PoissonKitError):
    """An operator image leaves the requested truncation."""


class HypothesisError(PoissonKitError):
    """A precondition of the star identity does not hold."""


class ChartError(PoissonKitError):
    """A leaf chart violates the rank or tangency invariant."""

    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)


class NumericError(PoissonKitError, ArithmeticError):
    pass
