class CrlabError(ValueError):
    """Base class for every input or contract error raised by crlab."""


class MalformedEncoding(CrlabError):
    """A graph6 string has a bad length or a byte outside 63..126."""


class EmptyGraph(CrlabError):
    """An operation that needs at least one vertex got n = 0."""


class GenerationExhausted(CrlabError):
    """The constrained generator could not meet its bounds within the attempt budget."""


class TooLarge(CrlabError):
    """A Kneser graph would exceed the configured vertex cap."""


class ShapeMismatch(CrlabError):
    """A vertex map has the wrong length or a value outside the target."""


class StaleMatch(CrlabError):
    """A forbidden-configuration match no longer holds on the graph it is applied to."""


class NotInducedPath(CrlabError):
    """A vertex sequence handed to path collapsing is not an induced path."""


class TargetMismatch(CrlabError):
    """A coloring handed to a lift is not a homomorphism into the stated Kneser graph."""


class NonTermination(CrlabError):
    """Discharging exceeded its round cap."""
