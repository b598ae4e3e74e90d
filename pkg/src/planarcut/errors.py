"""Exception hierarchy.

Two families matter to callers: ``InputError`` covers bad user input (the
CLI maps it to exit status 2) and ``InvariantViolation`` flags internal
consistency failures (exit status 1).
"""


class PlanarCutError(Exception):
    """Base class for every error raised by the package."""


class InputError(PlanarCutError):
    pass


class InvariantViolation(PlanarCutError):
    pass


# --- input problems -------------------------------------------------------

class NonPlanarEmbedding(InputError):
    pass


class NegativeWeight(InputError):
    pass


class MalformedRotation(InputError):
    pass


class Disconnected(InputError):
    pass


class NonSimplePath(InputError):
    pass


class TooManyHoles(InputError):
    pass


class InvalidR(InputError):
    pass


class SameVertex(InputError):
    pass


class EmptyGraph(InputError):
    pass


class BadParams(InputError):
    pass


# --- internal invariants --------------------------------------------------

class CrossingPaths(InvariantViolation):
    pass


class Unreachable(InvariantViolation):
    pass


class VisitAccountingOverflow(InvariantViolation):
    pass


class NotSeparating(InvariantViolation):
    pass
