"""Exception types raised across the package.

Every validation failure derives from :class:`DivmaxError` (itself a
``ValueError``) so callers such as the CLI can catch a single type and
print the one-line message.
"""


class DivmaxError(ValueError):
    pass


# distance matrix validation
class NotSquare(DivmaxError):
    pass


class NegativeEntry(DivmaxError):
    pass


class NonZeroDiagonal(DivmaxError):
    pass


class Asymmetric(DivmaxError):
    pass


class UnboundedAlpha(DivmaxError):
    pass


# set arguments
class InvalidElement(DivmaxError):
    pass


class OverlappingSets(DivmaxError):
    pass


class ElementAlreadyInSet(DivmaxError):
    pass


# instances and constraints
class InvalidInstance(DivmaxError):
    pass


class InvalidConstraint(DivmaxError):
    pass


class WrongConstraintKind(DivmaxError):
    pass


class PTooLarge(InvalidConstraint):
    pass


class RankTooSmall(DivmaxError):
    pass


class NotIndependent(DivmaxError):
    pass


class NoPerfectMatching(DivmaxError):
    pass


class PreconditionViolated(DivmaxError):
    pass


# exhaustive search guards
class GroundSetTooLarge(DivmaxError):
    pass


class SearchSpaceTooLarge(DivmaxError):
    pass


class IterationLimitExceeded(UserWarning):
    """Warning emitted when local search stops at its swap budget.

    The returned solution is still a feasible basis; only the local
    optimality certificate is missing.
    """
