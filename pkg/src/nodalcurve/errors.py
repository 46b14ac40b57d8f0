"""Exception hierarchy shared by every module of the package."""


class NodalCurveError(Exception):
    """Base class for all package errors."""


class TauTooLarge(NodalCurveError):
    pass


class NonPositiveArgument(NodalCurveError):
    pass


class ArgumentOutOfRange(NodalCurveError):
    pass


class NoBracket(NodalCurveError):
    pass


class RegimeUnavailable(NodalCurveError):
    pass


class IntegrationRange(NodalCurveError):
    pass


class KindMismatch(NodalCurveError):
    pass


class AllZero(NodalCurveError):
    """Raised when a circle function vanishes identically (log undefined)."""


class Unresolved(NodalCurveError):
    """A near-tangential zero could not be resolved by grid refinement."""


class ContourZero(NodalCurveError):
    pass


class ZeroRestriction(NodalCurveError):
    """The restriction of a wave to a curve has zero L2 norm."""


class PoleProximity(NodalCurveError):
    pass


class DivergentTail(NodalCurveError):
    pass


class TruncationInsufficient(NodalCurveError):
    pass


class ConfigError(NodalCurveError):
    pass
