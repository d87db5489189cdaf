"""Exception hierarchy for hilbert_flats."""


class HilbertFlatsError(Exception):
    """Base class for every error raised by the package."""


class GeometryError(HilbertFlatsError):
    pass


class NonCollinear(GeometryError):
    pass


class DegenerateConfiguration(GeometryError):
    pass


class EigenSolverFailure(HilbertFlatsError):
    pass


class NotConverged(HilbertFlatsError):
    pass


class CoincidentPoints(GeometryError):
    pass


class NotInterior(GeometryError):
    pass


class OutsideDomain(GeometryError):
    pass


class EmptyInput(HilbertFlatsError):
    pass


class EmptySubset(HilbertFlatsError):
    pass


class FaceMembershipViolated(GeometryError):
    pass


class InvariantViolation(HilbertFlatsError):
    """A property that must hold by theory failed numerically."""


class NonPositiveCoordinates(GeometryError):
    pass


class LengthMismatch(HilbertFlatsError):
    pass


class OrbitBlowup(HilbertFlatsError):
    pass


class NotPolytope(HilbertFlatsError):
    pass


class NonBoundaryLimit(HilbertFlatsError):
    pass


class NotSimultaneouslyDiagonalizable(HilbertFlatsError):
    """The group lies outside the constructive scope (complex or defective spectrum)."""


class NoSimplexFound(HilbertFlatsError):
    pass


class VertexNotFixed(HilbertFlatsError):
    pass


class MinSetEmpty(HilbertFlatsError):
    pass


class ParseError(HilbertFlatsError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class ValidationError(HilbertFlatsError):
    pass


class UnknownCommand(HilbertFlatsError):
    pass
