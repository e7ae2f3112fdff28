"""Error types shared across the package.

The CLI maps these onto process exit codes: usage problems exit 1,
budget refusals exit 2, contract violations exit 3.
"""


class BudgetError(RuntimeError):
    """An operation would exceed a configured resource budget.

    Budgets are explicit knobs (factoring bit bound, enumeration bound,
    point-count bound).  Raising instead of grinding keeps runs predictable.
    """


class ContractViolation(AssertionError):
    """A mathematical guarantee failed on inputs where it must hold.

    This is never a user error: it means either an implementation bug or a
    genuine counterexample, and both deserve a loud stop.
    """


class UsageError(ValueError):
    """Bad user input (flags, ranges, non-admissible parameters)."""
