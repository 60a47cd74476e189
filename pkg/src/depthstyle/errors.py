"""Exception hierarchy shared across the engine."""


class DepthStyleError(Exception):
    """Base class for all engine errors."""


class InvalidInputError(DepthStyleError, ValueError):
    """An argument violates a documented precondition."""


class WeightFormatError(DepthStyleError, ValueError):
    """A weight file is malformed, truncated, or fails validation."""


class DegenerateDepthError(DepthStyleError, ValueError):
    """A depth map is constant and cannot be min-max rescaled."""
