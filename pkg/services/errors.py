"""Exception hierarchy shared by the algebra services and the CLI."""


class ParQSymError(Exception):
    """Base class for every error raised by the toolkit."""


class MalformedInputError(ParQSymError, ValueError):
    """Input text, JSON or options that cannot be interpreted."""


class DiagramError(MalformedInputError):
    """A block list that is not a set partition of the diagram's nodes, or a bad cut."""


class MetadataMismatchError(MalformedInputError):
    """Binary operation on elements whose space, basis or q disagree."""


class InvariantViolation(ParQSymError, ValueError):
    """A mathematically illegal request (q = -1, singular weights, non-refining pairs)."""
