"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for geometric failures (degenerate input, bad preconditions)."""


class DegenerateInput(GeometryError):
    """Input is not a full-dimensional, irredundant polytope."""


class EmptyIntersection(GeometryError):
    """A clip produced the empty set."""


class OriginNotInterior(GeometryError):
    """An operation requiring 0 in the interior was called on a body without it."""


class SingularMatrix(GeometryError):
    """A linear map that must be invertible is (numerically) singular."""


class NotAVertex(GeometryError):
    """The queried point is not a vertex of the polytope."""


class PointNotInRelativeInterior(GeometryError):
    """The base point of a relative polar is not in the facet's relative interior."""


class ConvergenceFailure(GeometryError):
    """An iterative solver did not reach its residual target."""


class SymmetryRequired(GeometryError):
    """The operation is only defined for centrally symmetric bodies."""


class NotInJohnSandwich(GeometryError):
    """The body is not sandwiched between the unit ball and sqrt(n) times it."""


class UnknownGenerator(ValueError):
    """No named polytope generator with that name."""


class BadParameter(ValueError):
    """A configuration value or generator parameter is out of range."""
