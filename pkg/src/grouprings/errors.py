"""Exception hierarchy.

Every error carries a machine-readable ``reason`` and belongs to one of three
failure classes (input, budget, invariant) that map onto CLI exit codes.
"""


class GroupRingError(Exception):
    kind = "invariant"

    def __init__(self, message="", **details):
        super().__init__(message or self.__class__.__name__)
        self.details = details

    @property
    def reason(self):
        return self.__class__.__name__


class InputError(GroupRingError):
    kind = "input"


class BudgetError(GroupRingError):
    kind = "budget"


class InvariantBreach(GroupRingError):
    kind = "invariant"


# input class
class NotAPermutation(InputError):
    pass


class NotASubgroup(InputError):
    pass


class NotNormal(InputError):
    pass


class NotContained(InputError):
    pass


class GroupMismatch(InputError):
    pass


class ConductorMismatch(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class QuotientNotCyclic(InputError):
    pass


class NotAnIdempotent(InputError):
    pass


class ParameterInvalid(InputError):
    pass


class NotInImage(InputError):
    pass


class SchurIndexNotOne(InputError):
    pass


class ExceptionalComponent(InputError):
    pass


class NotAShodaPair(InputError):
    pass


class InvalidChain(InputError):
    pass


# budget class
class OrderBoundExceeded(BudgetError):
    pass


class BudgetExceeded(BudgetError):
    pass


class TwistingNotTrivialized(BudgetError):
    pass


# invariant class
class DivisionByZero(InvariantBreach, ZeroDivisionError):
    pass


class NonRationalOutput(InvariantBreach):
    pass


class MatrixUnitRelationFailed(InvariantBreach):
    pass


class GaloisSizeMismatch(InvariantBreach):
    pass


class SingularSystem(InvariantBreach):
    pass


class NonIntegralInverse(InvariantBreach):
    pass


class MinimalExponentNotFound(InvariantBreach):
    pass


class VerificationFailed(InvariantBreach):
    pass


EXIT_CODES = {"input": 2, "budget": 3, "invariant": 4}
