"""Exception types shared across the model modules."""


class PerilsError(Exception):
    """Base class for all model errors."""


class DomainError(PerilsError, ValueError):
    """An input lies outside the domain where the formula is defined."""


class DivergenceError(DomainError):
    """A geometric series in the model does not converge."""


class HorizonError(PerilsError):
    """A finite-horizon summation would discard too much tail mass."""


class NoRootError(PerilsError):
    """The objective has no sign change on the admissible interval."""


class ConvergenceError(PerilsError):
    """An iterative solver stopped before reaching tolerance."""


class ConfigError(PerilsError, ValueError):
    """A configuration file or flag could not be parsed."""
