"""Exception and warning types shared across the package.

Exit codes used by the command line map onto the exception classes:
``ValidationError`` -> 2, ``ConvergenceError`` -> 3, ``QuadratureTailError`` -> 4.
"""


class MajdaBielloError(Exception):
    exit_code = 1


class ValidationError(MajdaBielloError, ValueError):
    exit_code = 2


class ConvergenceError(MajdaBielloError):
    exit_code = 3

    def __init__(self, message, differences=(), ratios=(), attempts=()):
        super().__init__(message)
        self.differences = list(differences)
        self.ratios = list(ratios)
        self.attempts = list(attempts)


class QuadratureTailError(MajdaBielloError):
    exit_code = 4

    def __init__(self, message, tail=float("nan")):
        super().__init__(message)
        self.tail = tail


class NumericsWarning(UserWarning):
    """Base class for flagged-but-tolerated numerical conditions."""


class IncompatibleDataWarning(NumericsWarning):
    pass


class OffGridTraceWarning(NumericsWarning):
    pass


class AdmissibilityWarning(NumericsWarning):
    pass
