"""Exception hierarchy shared by all fockforge modules."""


class FockforgeError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FockforgeError, ValueError):
    """An argument lies outside the domain of an operation."""


class NotNormalizable(DomainError):
    """A state with (numerically) zero norm cannot be normalized."""


class PostSelectionEmpty(DomainError):
    """The post-selection projector annihilates the state."""
