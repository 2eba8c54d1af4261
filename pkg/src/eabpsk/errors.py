"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A parameter is outside its documented domain. Message names the field."""


class UnsupportedConfigurationError(ValueError):
    """A requested combination of options is not implemented."""


class DegenerateInputError(ValueError):
    """Inputs collapse the problem (e.g. zero spread on both hypotheses)."""


class ConvergenceError(ArithmeticError):
    """An iterative numerical routine failed to converge."""
