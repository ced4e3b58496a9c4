"""Exception hierarchy shared across the package."""


class CardminError(Exception):
    """Base class for every error raised by cardmin."""


class ArityMismatch(CardminError, ValueError):
    pass


class UnsupportedArity(CardminError, ValueError):
    pass


class MalformedEncoding(CardminError, ValueError):
    pass


class InvalidSize(CardminError, ValueError):
    pass


class SizeMismatch(CardminError, ValueError):
    pass


class StructuralError(CardminError):
    """A protocol tree is ill-formed or misbehaves during execution."""


class BranchTableIncomplete(StructuralError):
    pass


class CardConservationViolated(StructuralError):
    pass


class NonTermination(StructuralError):
    pass


class NonUniformShuffleCount(StructuralError):
    pass


class FreeCardUnavailable(StructuralError):
    pass
