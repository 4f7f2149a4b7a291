"""Exception hierarchy shared by every module of the package."""


class WalkError(ValueError):
    """Base class for all errors raised by recurwalk."""


class InvalidLaw(WalkError):
    """A step law failed validation."""


class EmptySupport(InvalidLaw):
    pass


class WeightSumMismatch(InvalidLaw):
    pass


class NonPositiveWeight(InvalidLaw):
    pass


class NonPositiveDenominator(InvalidLaw):
    pass


class DuplicateAtom(InvalidLaw):
    pass


class MalformedLawFile(InvalidLaw):
    """The law file is not valid JSON or a field is missing or mistyped."""


class DenominatorMismatch(WalkError):
    pass


class ExactCapExceeded(WalkError):
    """Requested step count is above the exact backend's cap."""


class ZeroSecondMoment(WalkError):
    """The law is degenerate (E|X|^2 = 0), so the ball B_n is undefined."""


class AsymmetricLaw(WalkError):
    pass
