# -*- coding: utf-8 -*-


class MFCNError(Exception):
    """Base class for every error raised by the library."""


class ArgumentError(MFCNError, ValueError):
    pass


class ParseError(MFCNError):

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        if line is not None:
            message = "line %d: %s" % (line, message)
        if path is not None:
            message = "%s: %s" % (path, message)
        super(ParseError, self).__init__(message)


class EvaluationError(MFCNError):

    def __init__(self, message, index=None):
        self.index = index
        super(EvaluationError, self).__init__(message)


class ConfigurationError(MFCNError):

    def __init__(self, message, keys=None):
        self.keys = list(keys or [])
        super(ConfigurationError, self).__init__(message)


class DimensionError(MFCNError):

    def __init__(self, message, step=None):
        self.step = step
        if step is not None:
            message = "%s: %s" % (step, message)
        super(DimensionError, self).__init__(message)


class SolverError(MFCNError):

    def __init__(self, message, residuals=None):
        self.residuals = residuals
        super(SolverError, self).__init__(message)


class DomainError(MFCNError):

    def __init__(self, estimate, domain_max):
        self.estimate = estimate
        self.domain_max = domain_max
        super(DomainError, self).__init__(
            "spectral radius estimate %.6g exceeds Chebyshev domain [0, %.6g]" % (estimate, domain_max))


class ApproximationError(MFCNError):

    def __init__(self, message, error_bound=None):
        self.error_bound = error_bound
        super(ApproximationError, self).__init__(message)


class NormalizationError(MFCNError):

    def __init__(self, message, layer=None):
        self.layer = layer
        super(NormalizationError, self).__init__(message)


class UnsupportedOracleError(MFCNError):
    pass


class ExperimentError(MFCNError):

    def __init__(self, message, n=None, failed=None):
        self.n = n
        self.failed = failed
        super(ExperimentError, self).__init__(message)


# usage errors map to exit code 2 on the command line, the rest to 1
USAGE_ERRORS = (ArgumentError, ParseError, ConfigurationError)
