"""Exception and warning types shared across the package."""


class DataError(ValueError):
    """Invalid input data: bad pixel values, malformed manifests, bad labels."""


class DegenerateStatisticsError(ArithmeticError):
    """A covariance matrix stayed singular after ridge regularization."""


class EstimationError(RuntimeError):
    """Parameter estimation cannot run on the given sample."""


class ConvergenceWarning(UserWarning):
    """Iterative estimation stopped before meeting its tolerance."""
