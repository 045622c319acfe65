"""Exception types shared across the package."""


class EmbshapeError(Exception):
    """Base class for all errors raised by this package."""


class EmbeddingFormatError(EmbshapeError, ValueError):
    """Raised when an embedding file cannot be parsed (bad header, wrong
    coordinate count, non-numeric or non-finite values, empty input)."""


class DegenerateTriangleError(EmbshapeError, ValueError):
    """Raised when three points are too close to collinear (or coincident)
    to define a projection plane or a triangle."""


class DegenerateSamplingError(EmbshapeError, RuntimeError):
    """Raised when every sampled vertex triple for a candidate turned out
    degenerate and no trial could be completed."""
