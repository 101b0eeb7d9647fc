"""Exception hierarchy shared by every recvc module."""


class RVCError(ValueError):
    """Base class for all scheme, format and image errors."""


class InconsistentTriple(RVCError):
    """Three received symbols with exactly two equal."""

    def __init__(self, message, position=None, level=None):
        super().__init__(message)
        self.position = position
        self.level = level


class ConstraintOutOfRange(RVCError):
    pass


class LengthMismatch(RVCError):
    pass


class DuplicateShareIndex(RVCError):
    pass


class BadLengthRatio(RVCError):
    pass


class EmptyChain(RVCError):
    pass


class BadImageShape(RVCError):
    pass


class LevelOutOfRange(RVCError):
    pass


class LayoutMismatch(RVCError):
    pass


# prefix code
class TruncatedStream(RVCError):
    pass


class NonzeroPadding(RVCError):
    pass


# share container format
class InvariantViolation(RVCError):
    pass


class ContainerError(RVCError):
    """A share file that cannot be trusted as written."""


class BadMagic(ContainerError):
    pass


class UnsupportedVersion(ContainerError):
    pass


class BadShareIndex(ContainerError):
    pass


class ChecksumMismatch(ContainerError):
    pass


class TruncatedPayload(ContainerError):
    pass


# images
class ShapeMismatch(RVCError):
    pass


class InvalidStack(RVCError):
    pass


class MalformedBlock(RVCError):
    pass


class BadHeader(RVCError):
    pass


class DimensionOverflow(RVCError):
    pass


class TruncatedRaster(RVCError):
    pass
