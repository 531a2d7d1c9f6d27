"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A parameter is outside its admissible range."""


class UndefinedConditionalStateError(InvalidParameterError):
    """The click-conditioned state does not exist (zero success probability)."""


class DomainError(ValueError):
    """An argument lies outside the measurement's outcome domain."""


class NonconvergenceError(RuntimeError):
    """A series or quadrature failed to reach its error target."""


class UnsupportedFamilyError(ValueError):
    """The requested quantity has no closed form for this state family."""
