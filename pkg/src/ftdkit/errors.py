"""Exception types shared across the package."""


class FtdkitError(Exception):
    """Base class for package-specific errors."""


class GadgetMissingError(FtdkitError):
    """A required gadget family is empty.

    ``witness`` is the ordered vertex pair (bowties) or the edge (pinwheels)
    whose family came up empty.
    """

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class NoTrianglesError(FtdkitError):
    """A weighting was requested on a graph with edges but no triangles."""


class CapacityError(FtdkitError):
    """An instance exceeds a documented size guard.

    Raised instead of silently attempting work the desk-scale oracle cannot
    finish; the message carries the sizing information.
    """


class OracleInconclusiveError(FtdkitError):
    """The LP oracle could not certify either verdict numerically.

    Raised in preference to returning a wrong verdict.
    """


class PatternDomainError(FtdkitError):
    """A rooted-pattern operation was called outside its supported domain."""
