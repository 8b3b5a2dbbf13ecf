"""Exception hierarchy shared by every module."""


class SimpcatError(Exception):
    """Base class for all errors raised by simpcat."""


class EmptyInput(SimpcatError, ValueError):
    pass


class BadParameter(SimpcatError, ValueError):
    pass


class ParseError(SimpcatError, ValueError):
    pass


class ResourceLimit(SimpcatError):
    """A configured search budget or size cap was exceeded; the answer is unknown."""


class NotASimplex(SimpcatError, ValueError):
    pass


class ParentMismatch(SimpcatError, ValueError):
    pass


class DomainMismatch(SimpcatError, ValueError):
    pass


class DisconnectedComplex(SimpcatError, ValueError):
    pass


class NotSimplicial(SimpcatError, ValueError):
    def __init__(self, simplex, message=None):
        self.simplex = simplex
        super().__init__(message or f"image of {simplex} is not a simplex")


class AgreementFailure(SimpcatError, ValueError):
    def __init__(self, vertex, message=None):
        self.vertex = vertex
        super().__init__(message or f"maps disagree at vertex {vertex}")


class PasteFailure(SimpcatError):
    pass


class NotT0(SimpcatError, ValueError):
    pass


class NotMonotone(SimpcatError, ValueError):
    pass


class EmptyFiber(SimpcatError, ValueError):
    pass
