from __future__ import annotations


class ChoiceIdError(Exception):
    """Base class for all errors raised by choiceid."""


class ValidationError(ChoiceIdError, ValueError):
    """An input object violates one of its invariants."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class DimensionError(ChoiceIdError, ValueError):
    pass


class EnumerationRefused(ChoiceIdError):
    """Brute-force enumeration was asked for beyond its configured cap."""


class IntractableError(ChoiceIdError):
    """Exact computation refused because the instance is too large."""


class InconsistentSystemError(ChoiceIdError, ValueError):
    """Observed data cannot be produced by the model."""
