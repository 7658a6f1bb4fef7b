"""Exception hierarchy shared by all gaussmaj modules."""


class GaussmajError(Exception):
    """Base class for every error raised by gaussmaj."""


class ParameterError(GaussmajError, ValueError):
    """A physical or numerical parameter is outside its allowed range."""


class CutoffError(GaussmajError):
    """The Fock cutoff is too small for the configured leak tolerance."""


class PositivityError(GaussmajError):
    """A density operator has an eigenvalue below the clamp threshold."""


class DimensionError(GaussmajError, ValueError):
    """Objects with incompatible cutoffs were combined."""


class UnphysicalStateError(GaussmajError):
    """A covariance matrix violates the uncertainty principle."""


class FunctionClassError(GaussmajError, ValueError):
    """A function is not a member of the nonnegative concave class on [0, 1]."""


class NoWitnessError(GaussmajError):
    """A witness was requested for a pair that actually majorizes."""


class ConfigError(GaussmajError, ValueError):
    """An experiment configuration is malformed."""
