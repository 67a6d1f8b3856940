"""Exception hierarchy shared by all modules."""


class DpmNetError(Exception):
    """Base class for errors raised by dpmnet."""


class ParseError(DpmNetError, ValueError):
    """Malformed input file. Messages carry line (and column) numbers."""


class DimensionError(DpmNetError, ValueError):
    """Array shapes or sample counts violate an operation's preconditions."""


class ConstantVariableError(DpmNetError, ValueError):
    """A variable has zero variance where a nonzero one is required."""

    def __init__(self, name, message=None):
        self.name = name
        super().__init__(message or f"variable {name!r} is constant")


class UnknownLabelError(DpmNetError, KeyError):
    """A gold-standard edge refers to a node that is not in the dataset."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class SingularMatrixError(DpmNetError, ArithmeticError):
    """Naive inversion requested on a singular or ill-conditioned Gram matrix."""


class NumericalError(DpmNetError, ArithmeticError):
    """An internal consistency check on a floating point result failed."""


class UndefinedMetricError(DpmNetError, ValueError):
    """ROC/PR metrics requested for a ranking without positives or negatives."""
