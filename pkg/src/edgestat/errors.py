"""Exception hierarchy shared by all edgestat modules."""


class EdgeStatError(ValueError):
    """Base class for precondition and input errors."""


class Graph6Error(EdgeStatError):
    pass


class BudgetExceeded(EdgeStatError):
    """Raised when an exact enumeration would visit too many subsets."""

    def __init__(self, required: int, budget: int, what: str = "subsets"):
        self.required = required
        self.budget = budget
        super().__init__(
            f"exact enumeration needs {required} {what}, budget is {budget}; "
            "raise --budget or use Monte Carlo"
        )


class RecordsError(EdgeStatError):
    pass
