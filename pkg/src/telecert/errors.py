"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto distinct exit codes: validation failures,
precondition failures, and I/O failures are kept apart so scripted callers
can react to each differently.
"""


class TelecertError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(TelecertError):
    """Input data is structurally or numerically invalid."""


class EnsembleFormatError(ValidationError):
    """A custom-ensemble document does not match the expected schema."""


class StateNormalizationError(ValidationError):
    """A state vector's norm is too far from one."""


class PriorSumError(ValidationError):
    """Prior probabilities are negative or do not sum to one."""


class PreconditionError(TelecertError):
    """Inputs are well formed but lie outside an operation's domain."""


class BudgetExceededError(PreconditionError):
    """An exact computation would exceed its configured work budget."""
