"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the region where the state or formula is defined."""


class AnnihilatedStateError(ArithmeticError):
    """An operation produced the zero vector, so the state cannot be normalized."""


class TruncationError(RuntimeError):
    """The Fock truncation is too small for the requested operator order."""


class ConsistencyError(RuntimeError):
    """A quantity that must be real came out with a non-negligible imaginary part."""


class TruncationWarning(UserWarning):
    """A user-supplied truncation is smaller than the automatically chosen one."""
