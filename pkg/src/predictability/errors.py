"""Exception types raised across the package."""


class PredictabilityError(ValueError):
    """Base class for every error raised by this package."""


class DimensionMismatch(PredictabilityError):
    pass


class BadIndex(PredictabilityError):
    pass


class BadDimension(PredictabilityError):
    pass


class WrongDimension(BadDimension):
    pass


class TooLarge(BadDimension):
    pass


class BadParameter(PredictabilityError):
    pass


class NonHermitian(PredictabilityError):
    pass


class ConvergenceFailure(PredictabilityError, ArithmeticError):
    pass


class InvalidState(PredictabilityError):
    pass


class NotNormalized(InvalidState):
    pass


class NotPure(InvalidState):
    pass


class SupportViolation(PredictabilityError, ArithmeticError):
    """Relative entropy diverges: the first argument leaks outside the support of the second."""


class RankDeficient(PredictabilityError):
    pass


class NotMutuallyUnbiased(PredictabilityError):
    pass


class NotUnitary(PredictabilityError):
    pass


class IdentityViolation(PredictabilityError):
    pass


class EmptyHistogram(PredictabilityError):
    pass


class ConfigError(PredictabilityError):
    pass
