"""Exceptions raised across the integrability toolkit."""


class IntegrabilityToolError(Exception):
    """Base class for every error the toolkit raises on purpose."""


class PotentialError(IntegrabilityToolError, ValueError):
    """A potential is malformed (zero, inhomogeneous, duplicated terms)."""


class DimensionMismatchError(IntegrabilityToolError, ValueError):
    """A point does not have as many coordinates as the potential."""


class RootFindingError(IntegrabilityToolError, RuntimeError):
    """Polynomial root polishing did not converge."""


class DarbouxError(IntegrabilityToolError, ValueError):
    """A Darboux point is invalid or cannot be located."""


class ZeroMultiplierError(DarbouxError):
    """The multiplier of a Darboux point vanishes."""


class PoleError(IntegrabilityToolError, ValueError):
    """A rational expression was evaluated at one of its poles."""


class PellError(IntegrabilityToolError, ValueError):
    """A Pell or conic computation got an invalid input, such as a
    perfect-square discriminant or a point off the conic."""


class SubluminalityError(IntegrabilityToolError, ValueError):
    """The velocity of a straight-line solution reached light speed."""


class EnergyMismatchError(IntegrabilityToolError, ValueError):
    """An initial state does not lie on the requested energy level."""


class ConfigError(IntegrabilityToolError, ValueError):
    """A run configuration or input file failed validation."""


class IntegrationError(IntegrabilityToolError, RuntimeError):
    """Base class for failures of the numerical integrator."""


class StepSizeUnderflowError(IntegrationError):
    """The adaptive step size collapsed below machine resolution."""


class MaxStepsExceededError(IntegrationError):
    """The integrator used its whole step budget before t_end."""


class DivergenceError(IntegrationError):
    """The state left the divergence radius or became non-finite."""


class NonFiniteStateError(IntegrationError, ValueError):
    """A phase state handed to a vector field contains NaN or infinity."""
