"""Exception hierarchy. Everything raised on purpose derives from GaugeQEDError."""


class GaugeQEDError(Exception):
    pass


class ConvergenceError(GaugeQEDError):
    """Base for numerical-convergence failures (CLI exit code 3)."""


class GridTooCoarse(ConvergenceError):
    pass


class BoundaryLeak(ConvergenceError):
    pass


class TruncationTooSmall(ConvergenceError):
    pass


class RootBracketFailure(ConvergenceError):
    pass


class CurvatureUndefined(GaugeQEDError):
    pass


class PerturbativeRegimeViolated(GaugeQEDError):
    pass


class UnstableBranch(GaugeQEDError):
    """Raised when the frequency of an unstable (imaginary) polariton branch is requested."""


class ConfigError(GaugeQEDError):
    """Invalid experiment configuration (CLI exit code 2)."""
