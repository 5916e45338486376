# lab_errors.py
# Exception hierarchy shared by the field, code and CLI layers


class LabError(Exception):
    """Base class for every error raised on purpose by tgrs-lab."""


class FieldError(LabError, ValueError):
    """Bad field description, modulus, element token or mixed fields."""


class ParameterError(LabError, ValueError):
    """Invalid code parameters. `violations` lists every broken constraint."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class BudgetExceeded(LabError, RuntimeError):
    """An exhaustive enumeration would exceed its configured budget."""

    def __init__(self, what, size, budget):
        self.what = what
        self.size = size
        self.budget = budget
        super().__init__(f"{what}: {size} exceeds budget {budget}")


class PreconditionError(LabError, ValueError):
    """The operation refuses its input (e.g. a code that is neither MDS nor AMDS)."""


class CrossCheckError(LabError, AssertionError):
    """A criterion verdict disagrees with its brute-force oracle."""
