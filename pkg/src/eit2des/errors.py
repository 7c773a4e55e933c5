"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid parameters, settings or configuration text."""

    def __init__(self, message, key=None, line=None):
        super().__init__(message)
        self.key = key
        self.line = line


class NumericalError(RuntimeError):
    """Propagation produced NaN/inf or an undefined closed form was requested."""


class NoSplittingError(ValueError):
    """The absorption line is not split into two resolved troughs."""


class FitError(RuntimeError):
    """Damped-oscillation fit failed; ``history`` holds residuals of the attempts."""

    def __init__(self, message, history=(), oscillatory=True):
        super().__init__(message)
        self.history = list(history)
        self.oscillatory = oscillatory
