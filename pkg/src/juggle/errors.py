class DomainError(ValueError):
    """Input outside the domain of an operation."""


class VerificationError(AssertionError):
    pass
