"""Shared exception types."""


class FamilyDefinitionError(ValueError):
    """An infinite-family generator produced an inconsistent or invalid digraph."""


class BudgetExceededError(RuntimeError):
    """A search or enumeration ran out of its node/count budget.

    ``partial`` carries whatever lower bound or partial result was available
    when the budget ran out (may be None).
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class SpectralRadiusError(ValueError):
    """An operation requiring spectral radius < 1 was called outside that range."""


class MetadataError(ValueError):
    """A structural fact needed for a decision was not declared by the family."""
