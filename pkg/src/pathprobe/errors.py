"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid static configuration (vertex counts, probabilities, seeds)."""


class InvalidQueryError(ValueError):
    """Adjacency query for a self-pair or a vertex outside the oracle."""


class InvalidInputError(ValueError):
    """Structurally invalid argument (bad permutation, cyclic forest, ...)."""


class DomainError(ValueError):
    """Numeric argument outside the mathematical domain of an operation."""


class SizeLimitError(RuntimeError):
    """Instance exceeds a hard size limit for exhaustive computation."""


class CapExceededError(RuntimeError):
    """A sampling run exceeded its safety cap."""


class ProtocolViolationError(RuntimeError):
    """A plugged-in search algorithm returned an invalid answer."""
