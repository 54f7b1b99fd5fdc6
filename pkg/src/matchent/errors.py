"""Shared exception types."""


class ResourceLimitError(RuntimeError):
    """An exact computation would exceed its configured size guard."""


class NumericFailureError(RuntimeError):
    """An iterative numeric routine failed to converge.

    Carries the last observed residual so callers can report diagnostics.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
