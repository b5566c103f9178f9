"""Exception types shared across the package."""


class ShapeBenchError(Exception):
    """Base class for all shapebench errors."""


class GenerationExhausted(ShapeBenchError):
    """Raised when the retry budget runs out before a valid scene is found.

    Signals an over-constrained generation config, not a transient failure.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class IllPosedScene(ShapeBenchError):
    """A required uniqueness property (nearest/farthest/largest) does not hold."""


class ManifestCorrupt(ShapeBenchError):
    """A manifest failed schema or invariant validation."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class AnswerMismatch(ShapeBenchError):
    """A stored answer disagrees with the answer re-derived from the scene."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class GroupSizeMismatch(ShapeBenchError):
    """A reward group has the wrong number of entries."""


class LengthMismatch(ShapeBenchError):
    """Per-token sequences of unequal length."""


class RasterizeFailure(ShapeBenchError):
    """The rasterizer received SVG it cannot handle."""
