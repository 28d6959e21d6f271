"""Exception hierarchy shared by all ricciflow modules."""


class RicciFlowError(Exception):
    """Base class for every error raised by this package."""


# -- mesh / lengths ---------------------------------------------------------

class MeshError(RicciFlowError, ValueError):
    pass


class NonManifold(MeshError):
    pass


class NonOrientable(NonManifold):
    pass


class DegenerateFace(MeshError):
    pass


class DanglingVertex(MeshError):
    pass


class MeshFormatError(MeshError):
    pass


class MissingEdgeLength(RicciFlowError, KeyError):
    pass


class CoincidentVertices(MeshError):
    pass


class InvalidLengths(RicciFlowError, ValueError):
    """Some faces violate the triangle inequality.

    ``faces`` holds the offending face indices.
    """

    def __init__(self, message, faces=()):
        super().__init__(message)
        self.faces = list(faces)


# -- packing ---------------------------------------------------------------

class PackingError(RicciFlowError, ValueError):
    pass


class MissingRadius(PackingError):
    pass


class MissingAngle(PackingError):
    pass


class AngleOutOfRange(PackingError):
    pass


class NonPositiveScale(PackingError):
    pass


class HyperbolicScaleUnsupported(PackingError):
    pass


# -- numerics / metric geometry --------------------------------------------

class NumericalDomain(RicciFlowError, ArithmeticError):
    pass


class InvalidQuadruple(RicciFlowError, ValueError):
    pass


class InvalidTriangle(RicciFlowError, ValueError):
    pass


class SphericalDomain(RicciFlowError, ValueError):
    pass


class DomainExceeded(RicciFlowError, ValueError):
    pass


class ZeroKappa(RicciFlowError, ValueError):
    pass


class NoAdmissibleRoot(RicciFlowError, ArithmeticError):
    pass


class AmbiguousRoot(RicciFlowError, ArithmeticError):
    def __init__(self, message, roots=()):
        super().__init__(message)
        self.roots = list(roots)


class StarTooSmall(RicciFlowError, ValueError):
    pass


# -- flow ------------------------------------------------------------------

class InitialStateInvalid(RicciFlowError, ValueError):
    pass


class StepUnderflow(RicciFlowError, ArithmeticError):
    """Adaptive step fell below ``h_min``; ``trace`` holds the partial run."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class InsufficientSamples(RicciFlowError, ValueError):
    pass
