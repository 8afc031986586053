"""Exception hierarchy shared by all qdgraph modules."""


class QDError(Exception):
    """Base class for every error raised by qdgraph."""


class PoleEvaluation(QDError):
    pass


class BranchAmbiguity(QDError):
    """Both square roots are equally close to the running value."""


class NotDoublePole(QDError):
    pass


class OddDegree(QDError):
    pass


class InfiniteCriticalPoint(QDError):
    pass


class NotHigherOrderPole(QDError):
    pass


class StartsAtInfiniteCriticalPoint(QDError):
    pass


class PoleOnPath(QDError):
    pass


class NotAZero(QDError):
    pass


class ZerosCoincide(QDError):
    pass


class ArcThroughPole(QDError):
    pass


class NoNearbyRay(QDError):
    pass


class BranchNotClosed(QDError):
    pass


class DegenerateParams(QDError):
    """Family parameters collapse two zeros or push a zero onto a pole."""


class DegenerateC(DegenerateParams):
    pass


class ConditionABViolated(DegenerateParams):
    pass


class ZeroPoleCollision(DegenerateParams):
    pass


class DegenerateSample(DegenerateParams):
    pass


class DegreeTooLarge(QDError):
    pass


class NonConvergence(QDError):
    pass


class EdgesDontMeet(QDError):
    pass
