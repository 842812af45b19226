"""Exception types shared across the package."""


class GraphProdError(Exception):
    """Base class for all graphprod errors."""


class InvalidParameterError(GraphProdError, ValueError):
    """A generator spec, experiment config, or argument is out of range."""


class UnachievableDensityError(InvalidParameterError):
    """No admissible model parameter realizes the requested edge density."""


class VertexRangeError(GraphProdError, IndexError):
    """A vertex index is outside [0, n)."""


class SizeOverflowError(GraphProdError):
    """A product would exceed the configured vertex cap."""


class BudgetExceededError(GraphProdError):
    """A clique search exhausted its node budget; no partial result is returned."""


class DomainError(GraphProdError, ValueError):
    """A closed-form expression was evaluated outside its domain."""


class DegenerateDegreeError(DomainError):
    """A binomial denominator vanishes because the relevant degree is too small."""


class InstanceTooLargeError(GraphProdError):
    """A brute-force routine was asked for an instance beyond its size limits."""
