"""Exception hierarchy.

Every error raised on purpose by the library derives from ``SemiArithError``
so that the command line front end can map it to a machine readable record
and a nonzero exit code.  ``ValidationError`` marks bad input (exit code 2);
everything else is a computation error (exit code 3).
"""


class SemiArithError(Exception):
    """Base class for all library errors."""

    exit_code = 3

    def to_json(self):
        return {"error": type(self).__name__, "message": str(self)}


class ValidationError(SemiArithError):
    exit_code = 2


# numfield
class NotIrreducible(ValidationError):
    pass


class NotTotallyReal(ValidationError):
    pass


class NotMonic(ValidationError):
    pass


class NotTotallyPositive(SemiArithError):
    pass


class NotIntegral(SemiArithError):
    pass


class UnsupportedIdealFactorization(SemiArithError):
    pass


class NotAUnit(SemiArithError):
    pass


class BadPrime(SemiArithError):
    pass


# hypgeom
class IdentityElement(SemiArithError):
    pass


class NotHyperbolic(SemiArithError):
    pass


class CoincidentPoints(ValidationError):
    pass


class NonPositiveUnit(ValidationError):
    pass


class PlacementFailure(SemiArithError):
    pass


class NonPositiveInput(ValidationError):
    pass


class ParabolicFactor(SemiArithError):
    pass


class AllElliptic(SemiArithError):
    pass


# grouptheory
class NotAHomomorphism(ValidationError):
    pass


class NotSurjective(ValidationError):
    pass


class PatternMismatch(SemiArithError):
    pass


class DedupInconclusive(SemiArithError):
    pass


# semiarith
class IntegralityFailure(SemiArithError):
    pass


class TotallyRealFailure(SemiArithError):
    pass


class BudgetTooSmall(SemiArithError):
    pass


class NoHyperbolicFound(SemiArithError):
    pass


class EmptySample(SemiArithError):
    pass


# congruence
class NotPIntegral(SemiArithError):
    pass


class CapExceeded(SemiArithError):
    pass


class NoKernelElementFound(SemiArithError):
    pass


# quaternion
class ZeroParameter(ValidationError):
    pass


class NotNormOne(SemiArithError):
    pass


class UnsupportedIdeal(ValidationError):
    pass
