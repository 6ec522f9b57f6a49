"""Exception types shared across the toolkit."""


class InputError(ValueError):
    """Malformed input: wrong dimension, non-finite entries, bad parameters."""


class UnsupportedError(InputError):
    """The requested combination of parameters is not supported."""


class PreconditionError(ValueError):
    """A mathematical precondition of an operation does not hold.

    ``witness`` carries whatever object demonstrates the failure (a matrix,
    a scaling factor, a verdict record), or ``None``.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PositivityViolation(PreconditionError):
    """A set fails the positivity axiom F + P ⊂ F, so it is not a subequation."""


class Refusal(PreconditionError):
    """An operation declined to run; ``witness`` holds the deciding verdict."""
