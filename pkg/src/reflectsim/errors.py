"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Raised for geometric inputs that cannot describe a physical setup."""


class BeamTooWideError(ValueError):
    """Raised when a cut has no -3 dB crossing on both sides of the peak."""


class NoRealSolutionError(ValueError):
    """Raised when an angle equation has no real solution (|arg| > 1)."""


class CalibrationRangeError(ValueError):
    """Raised when a calibration target lies outside the achievable interval.

    Carries the achievable (lo, hi) interval in dB so callers can report it.
    """

    def __init__(self, message, achievable):
        super().__init__(message)
        self.achievable = achievable


class ConfigError(ValueError):
    """Configuration file error, annotated with key name and line number."""

    def __init__(self, message, key=None, line=None):
        if key is not None and line is not None:
            message = f"{message} (key '{key}', line {line})"
        elif key is not None:
            message = f"{message} (key '{key}')"
        super().__init__(message)
        self.key = key
        self.line = line
