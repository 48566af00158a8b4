"""Shared exception types."""


class ConsistencyViolationError(RuntimeError):
    """A closed-form value and its independent brute-force check disagree.

    This is never caught-and-reconciled internally; it signals a genuine
    defect (or a mis-read formula) and maps to CLI exit code 2.
    """


class DimensionCapError(ValueError):
    """Requested module exceeds the configured Weyl-dimension cap."""


class UnsupportedOperatorError(ValueError):
    """Operator is outside the span handled by the graded action."""


class MultiplicityAnomalyError(RuntimeError):
    """A maximal-vector space expected to be a line is not one-dimensional."""
