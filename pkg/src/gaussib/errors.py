"""Exception hierarchy shared across the package."""


class GaussianIBError(Exception):
    """Base class for all errors raised by this package."""


class NonPositiveDefinite(GaussianIBError):
    """A covariance matrix failed a positive-definiteness check."""


class DegenerateMode(GaussianIBError):
    """An eigenvalue is (numerically) zero, implying deterministic dependence."""


class NumericalFailure(GaussianIBError):
    """A numerical routine produced values outside its guaranteed range."""


class OutOfRange(GaussianIBError):
    """An argument violates its documented domain."""


class DivergentInformation(GaussianIBError):
    """The requested information quantity is infinite for these inputs."""


class RootNotFound(GaussianIBError):
    """Neither the closed-form roots nor bisection located a valid solution."""


class ConvergenceFailure(GaussianIBError):
    """No optimizer restart reached the required gradient tolerance."""


class Unreachable(GaussianIBError):
    """The requested target lies outside the achievable range."""


class ConfigError(GaussianIBError):
    """A run configuration file or override is invalid."""
