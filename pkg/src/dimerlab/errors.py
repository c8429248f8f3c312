"""Exception hierarchy.

Every error raised by the package derives from :class:`DimerLabError`, and
input-validation failures additionally derive from :class:`ValueError` so that
callers can treat them as ordinary bad arguments.
"""


class DimerLabError(Exception):
    """Base class for all package errors."""


class ValidationError(DimerLabError, ValueError):
    """An input violates a documented invariant."""


class GraphFormatError(ValidationError):
    pass


class NotBipartite(ValidationError):
    pass


class NotConnected(ValidationError):
    pass


class BadRotation(ValidationError):
    pass


class NonPlanarEmbedding(ValidationError):
    pass


class OddVertexCount(ValidationError):
    pass


class OddTorusSide(ValidationError):
    pass


class TorusGraph(ValidationError):
    """Kasteleyn machinery was requested on a torus graph."""


class NoPerfectMatching(DimerLabError):
    pass


class NonSquare(ValidationError):
    pass


class Singular(DimerLabError, ZeroDivisionError):
    pass


class DegreeBoundExceeded(ValidationError):
    pass


class SharedVertex(ValidationError):
    pass


class TooLarge(DimerLabError):
    pass


class NotTrivalent(ValidationError):
    pass


class DegenerateGraph(DimerLabError):
    pass


class TargetOutsidePolytope(ValidationError):
    pass


class MaxIterations(DimerLabError):
    pass


class BadParity(ValidationError):
    pass


class UnsupportedArea(ValidationError):
    pass


class WrongOrder(ValidationError):
    pass


class BadHoleFace(ValidationError):
    pass


class IllConditioned(DimerLabError):
    pass


class UnrealizableTrace(DimerLabError):
    pass


class NonTermination(DimerLabError):
    pass


class GroupTooLarge(DimerLabError):
    pass
