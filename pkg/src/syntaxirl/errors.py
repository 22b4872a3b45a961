"""Exception hierarchy.

Two families: :class:`InputError` for bad data or arguments and
:class:`NumericalError` for divergence or degenerate statistics. The CLI
maps them to exit codes 2 and 3.
"""


class SyntaxIrlError(Exception):
    """Base class for every error raised by the package."""


class InputError(SyntaxIrlError):
    pass


class NumericalError(SyntaxIrlError):
    pass


class InvalidEdge(InputError):
    pass


class DuplicateEdge(InputError):
    pass


class NodeNotFound(InputError):
    pass


class Unreachable(InputError):
    pass


class IsolatedNode(InputError):
    pass


class EmptyGraph(InputError):
    pass


class InvalidTrajectory(InputError):
    pass


class EmptyCorpus(InputError):
    pass


class TrajectoryTooLong(InputError):
    pass


class InvalidDistribution(InputError):
    pass


class TooLarge(InputError):
    pass


class MalformedXml(InputError):
    pass


class NoHighways(InputError):
    pass


class GraphTooSmall(InputError):
    pass


class BadSplit(InputError):
    pass


class GraphMismatch(InputError):
    pass


class NumericalOverflow(NumericalError):
    """Raised when the soft value recursion produces a non-finite value.

    ``iteration`` is set when the failure happens inside the training loop.
    """

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class DegenerateInput(NumericalError):
    pass
