"""Exception hierarchy.

Every error carries a machine-readable ``code`` (the class name) so the
command line can render it without a lookup table.
"""


class ProdmixError(Exception):
    """Base class for all toolkit errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# group construction

class InvalidPermutation(ProdmixError, ValueError):
    pass


class NotABijection(InvalidPermutation):
    pass


class OrderExceeded(ProdmixError):
    pass


# set algebra / counting

class EmptySet(ProdmixError, ValueError):
    pass


class NotNormal(ProdmixError, ValueError):
    pass


# character tables

class TrivialGroup(ProdmixError, ValueError):
    pass


class PrimeSearchFailed(ProdmixError):
    pass


class DegenerateEigenspace(ProdmixError):
    pass


class RoundingDrift(ProdmixError):
    pass


class ValidationFailed(ProdmixError, ValueError):
    def __init__(self, invariant: str, residual: float, detail: str = ""):
        self.invariant = invariant
        self.residual = residual
        msg = f"{invariant} violated (residual {residual:.3e})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


# certification

class BudgetExceeded(ProdmixError):
    def __init__(self, message: str, trials: int = 0, stats: dict | None = None):
        super().__init__(message)
        self.trials = trials
        self.stats = dict(stats or {})


class PreconditionNotCertified(ProdmixError):
    pass


# input files

class FormatSyntaxError(ProdmixError, ValueError):
    """Malformed input document.  ``line``/``column`` are 1-based, or None
    when the problem is structural rather than lexical."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)

    @property
    def code(self) -> str:
        return "SyntaxError"
