"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class NumericalError(RuntimeError):
    """A numerical routine failed or produced an unphysical value.

    ``realization`` names the disorder realization index when the failure
    happened inside a Monte Carlo loop.
    """

    def __init__(self, message, realization=None):
        if realization is not None:
            message = f"realization {realization}: {message}"
        super().__init__(message)
        self.realization = realization


class RegimeError(ValueError):
    """An asymptotic formula was evaluated outside its regime of validity."""
