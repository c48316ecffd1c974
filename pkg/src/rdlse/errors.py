"""Exception types raised across the package."""


class RdlseError(Exception):
    """Base class for all library errors."""


class DegenerateRegion(RdlseError):
    """The level set puts (almost) the whole domain on one side."""


class StabilityViolation(RdlseError):
    """Explicit diffusion time step outside the von Neumann stable range."""


class NonFinite(RdlseError):
    """A field picked up NaN or Inf during evolution."""

    def __init__(self, stage, iteration=None):
        self.stage = stage
        self.iteration = iteration
        where = f" at iteration {iteration}" if iteration is not None else ""
        super().__init__(f"non-finite values after {stage} step{where}")


class EmptyMask(RdlseError):
    pass


class DimensionMismatch(RdlseError):
    pass


class UnsupportedFormat(RdlseError):
    pass


class CorruptHeader(RdlseError):
    pass


class DimensionTooSmall(RdlseError):
    pass


class ConfigError(RdlseError):
    pass


class IoFailure(RdlseError, OSError):
    pass
