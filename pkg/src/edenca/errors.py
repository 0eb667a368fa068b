"""Shared exception types."""


class RegionOverflowError(Exception):
    """A computed cell left the declared coordinate window of its space.

    Raised instead of wrapping around or silently truncating: callers must
    either enlarge the window (``extent``) or shrink their working region.
    """

    def __init__(self, cell, extent):
        super().__init__(f"cell {cell!r} is outside the declared window (extent {extent})")
        self.cell = cell
        self.extent = extent


class BudgetExceededError(Exception):
    """An exhaustive enumeration would exceed the configured pattern budget."""

    def __init__(self, required, budget):
        super().__init__(f"enumeration needs {required} patterns, budget is {budget}")
        self.required = required
        self.budget = budget


class PreconditionViolation(ValueError):
    """A named precondition of an operation does not hold."""

    def __init__(self, clause, detail=""):
        msg = f"precondition violated: {clause}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.clause = clause
