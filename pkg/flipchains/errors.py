"""Exception hierarchy for flipchains."""


class FlipChainsError(Exception):
    """Base class for all library errors."""


class InvalidMap(FlipChainsError, ValueError):
    """A rotation system fails structural validation."""


class InvalidEdge(FlipChainsError, IndexError):
    """Edge index out of range for the map."""


class MalformedCode(FlipChainsError, ValueError):
    """A canonical code or tree code cannot be decoded."""


class NotALeaf(FlipChainsError, ValueError):
    """The vertex passed to a leaf move is not a leaf."""


class BadCorner(FlipChainsError, ValueError):
    """Corner index outside the admissible range."""


class BadColour(FlipChainsError, ValueError):
    """Colour outside 1..r."""


class NotAPeak(FlipChainsError, ValueError):
    """Position in a Dyck word is not a peak."""


class NegativeLabel(FlipChainsError, ValueError):
    """A tree required to have non-negative labels has a negative one."""


class EmptyTree(FlipChainsError, ValueError):
    """Operation needs at least one edge."""


class DegenerateRotation(FlipChainsError, ValueError):
    """Root rotation requested around a vertex of degree 1."""


class TooLarge(FlipChainsError, ValueError):
    """State space exceeds the configured ceiling."""


class ConstantObservable(FlipChainsError, ValueError):
    """Observable has zero variance under the stationary law."""


class ConfigError(FlipChainsError, ValueError):
    """Invalid configuration value."""


class NoPath(FlipChainsError, RuntimeError):
    """Bounded flip search did not reach its target."""
