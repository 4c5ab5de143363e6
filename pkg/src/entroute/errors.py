"""Exception types shared across the package.

The CLI maps these onto process exit codes: invalid parameters and bad
configs exit 2, topology generation failures exit 3, and internal
invariant breaches exit 4.
"""


class InvalidParameterError(ValueError):
    """An argument or configuration value violates a documented precondition."""


class GenerationFailureError(RuntimeError):
    """Random topology generation exhausted its retry budget."""


class InvariantViolationError(RuntimeError):
    """An internal consistency guarantee was broken (e.g. double allocation)."""
