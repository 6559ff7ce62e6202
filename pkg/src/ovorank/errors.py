"""Exception types raised across the package."""


class ValidationError(ValueError):
    """Input failed a structural check (bad permutation, malformed data, bad config)."""


class DimensionError(ValidationError):
    """Two objects that must share a label count do not."""


class ParameterError(ValueError):
    """A numeric parameter lies outside its admissible range."""


class EndpointError(ParameterError):
    """A closed-form bound was evaluated at an exponent endpoint where it is undefined."""


class DegeneracyError(ValueError):
    """Posterior probabilities are tied where a strict order is required."""
