"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`ApolloniusError`, which is itself a ``ValueError`` so callers that
only care about bad input can catch the builtin.
"""


class ApolloniusError(ValueError):
    pass


class NonPositiveAxis(ApolloniusError):
    pass


class InvalidEllipse(ApolloniusError):
    pass


class OffSurface(ApolloniusError):
    pass


class PoleParameter(ApolloniusError):
    pass


class DegenerateCoordinate(ApolloniusError):
    pass


class DegenerateZeroPolynomial(ApolloniusError):
    pass


class CircleDegenerate(ApolloniusError):
    pass


class AxisEqualityDegenerate(ApolloniusError):
    pass


class NotTriaxial(ApolloniusError):
    pass


class NotRevolution(ApolloniusError):
    pass


class NotFourNormals(ApolloniusError):
    pass


class PointNotExterior(ApolloniusError):
    """Tangent lines were requested from a point that is not outside."""


class PointInsideEllipse(PointNotExterior):
    pass


class PointOnEllipse(PointNotExterior):
    pass


class OutOfCoordinateRange(ApolloniusError):
    pass


class OutOfRange(ApolloniusError):
    pass


class FamiliesAbsent(ApolloniusError):
    pass


class CurveAbsentForShape(ApolloniusError):
    pass


class IoFailure(ApolloniusError):
    pass
