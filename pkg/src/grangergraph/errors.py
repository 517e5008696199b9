"""Exception types shared across the package."""


class GrangerGraphError(Exception):
    """Base class for domain errors raised by this package."""


class QueryError(GrangerGraphError, ValueError):
    """Malformed query: unknown vertex, overlapping sets, bad level."""


class GraphFormatError(GrangerGraphError, ValueError):
    """Unparseable graph file."""


class ModelError(GrangerGraphError, ValueError):
    """Invalid model parameters (non-stationary, singular covariance, ...)."""


class EstimationError(GrangerGraphError, ValueError):
    """Estimation impossible on the given data (rank deficiency, too few samples)."""
