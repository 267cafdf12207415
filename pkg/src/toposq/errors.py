"""Exception types shared across the package.

Every domain error carries a machine-readable ``kind`` plus the name of the
subsystem that raised it, so the CLI can emit a structured error report
without inspecting messages.
"""


class ToposError(Exception):
    """Base class for all domain errors raised by this package."""

    kind = "error"
    module = "toposq"

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def payload(self):
        """JSON-serializable description of the error."""
        return {
            "kind": self.kind,
            "module": self.module,
            "message": self.message,
            "details": {k: self.details[k] for k in sorted(self.details)},
        }


class InvalidInputError(ToposError):
    kind = "invalid-input"


class NonCommutingError(InvalidInputError):
    kind = "non-commuting"
    module = "contexts"


class NotInAlgebraError(ToposError):
    kind = "not-in-algebra"
    module = "spectral"


class OrderError(ToposError):
    """Raised when an operation needs one context below another and it is not."""

    kind = "order"
    module = "spectral"


class InternalConsistencyError(ToposError):
    """A structural identity that should hold by construction failed.

    Seeing this means a tolerance is mis-tuned or there is a bug, never bad
    user input.
    """

    kind = "internal-consistency"


class PreconditionError(ToposError):
    kind = "precondition"


class PLSyntaxError(InvalidInputError):
    kind = "syntax"
    module = "pl"

    def __init__(self, message, position=None, **details):
        if position is not None:
            details["position"] = position
        super().__init__(message, **details)
        self.position = position
