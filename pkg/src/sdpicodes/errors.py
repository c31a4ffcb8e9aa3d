"""Exception hierarchy shared by all modules."""


class SdpiError(Exception):
    """Base class for every error raised by this package."""


class InputError(SdpiError, ValueError):
    """Invalid argument or malformed input."""


# prob_space
class EmptyOrSingleton(InputError):
    pass


class NonPositiveEntry(InputError):
    pass


class SumOutOfTolerance(InputError):
    pass


class KTooSmall(InputError):
    pass


# tensor_fn
class BadCoordinate(InputError):
    pass


class AxisCoverage(InputError):
    pass


class TooLargeForExact(InputError):
    pass


class TooLarge(InputError):
    pass


# sdpi
class QOutOfRange(InputError):
    pass


class RhoOutOfRange(InputError):
    pass


class MuStarOutOfRange(InputError):
    pass


class QNotSupported(InputError):
    pass


class NuEqualsMu(InputError):
    pass


class ConstantRV(InputError):
    pass


class MeanNotZero(InputError):
    pass


class AtomBelowMinusOne(InputError):
    pass


class AlphaNonPositive(InputError):
    pass


# gf / code
class NotPrime(InputError):
    pass


class NoModulusInTable(InputError):
    pass


class EmptyGenerator(InputError):
    pass


class CodeTooLarge(InputError):
    pass


class ZeroDimensional(InputError):
    pass


class NonIntegerResult(SdpiError, ArithmeticError):
    pass


# channel
class BadParameter(InputError):
    pass


class NotStochastic(InputError):
    pass


class NotSupported(InputError):
    pass


# bounds / simulate
class CNotLessThanOne(SdpiError, ArithmeticError):
    """The block-error bound is vacuous for the given inputs."""


class NoRoot(SdpiError, ArithmeticError):
    pass


class CodeTooLargeForMAP(InputError):
    pass


# verifier
class ViolationFound(SdpiError):
    """An inequality was violated beyond tolerance; ``report`` holds the witness."""

    def __init__(self, report):
        super().__init__(
            f"{report.violations} violation(s), min margin {report.min_margin:.3e}"
        )
        self.report = report


class MonotonicityViolation(ViolationFound):
    pass
