"""Exception hierarchy shared by all modules."""


class CambrianError(Exception):
    """Base class for every error raised by this package."""


class BadMatrix(CambrianError, ValueError):
    pass


class BadLabel(CambrianError, ValueError):
    pass


class InfiniteType(CambrianError):
    pass


class CapExceeded(CambrianError):
    pass


class SystemMismatch(CambrianError, ValueError):
    pass


class NotALattice(CambrianError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotPolygonal(CambrianError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotACongruence(CambrianError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CyclicOrientation(CambrianError, ValueError):
    pass


class NotSortable(CambrianError, ValueError):
    pass


class NonConvexUnion(CambrianError):
    pass


class MismatchWithClassFan(CambrianError):
    pass


class RankUnsupported(CambrianError, ValueError):
    pass


class NotADiagonal(CambrianError, ValueError):
    pass
