"""Shared exception types."""


class ValidationError(ValueError):
    """Raised when an input value violates a documented precondition."""


class CycleError(ValidationError):
    """Raised when precedence edges form a cycle.

    ``witness`` holds one offending cycle as an ordered tuple of activity ids.
    """

    def __init__(self, witness):
        self.witness = tuple(witness)
        super().__init__("precedence cycle: " + " -> ".join(self.witness))


class UnknownIdError(ValidationError):
    """Raised when an id references nothing in the current registry/network."""

    def __init__(self, kind: str, identifier: str):
        self.kind = kind
        self.identifier = identifier
        super().__init__(f"unknown {kind}: {identifier!r}")
