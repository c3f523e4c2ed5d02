"""Exception types shared across the package."""


class PidTuneError(Exception):
    """Base class for all pidtune errors."""


class ImproperLoop(PidTuneError):
    """Controller/plant pair whose unity-feedback loop is not proper."""


class ImproperSystem(PidTuneError):
    """Transfer function with numerator degree above denominator degree."""


class NoUltimateGain(PidTuneError):
    """Proportional loop never crosses the stability boundary."""


class NonFiniteStart(PidTuneError):
    """Direct search started from a point with a non-finite score."""


class ResampleExhausted(PidTuneError):
    """No destabilizing random start found within the attempt budget."""


class OutputUnwritable(PidTuneError):
    """Frame output directory could not be created or written."""


class PlantParseError(PidTuneError):
    """Plant text that does not match the coefficient grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
