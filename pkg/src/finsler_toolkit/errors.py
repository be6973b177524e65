"""Exception hierarchy; every error carries a module-qualified code."""


class ToolkitError(Exception):
    """Domain error raised by any toolkit module."""

    module = "toolkit"
    kind = "error"

    @property
    def code(self):
        return f"{self.module}.{self.kind}"


class RootSystemError(ToolkitError):
    module = "rootsys"
    kind = "invalid"


class IrregularFunctionalError(RootSystemError):
    kind = "irregular_functional"


class WeylError(ToolkitError):
    module = "weyl"
    kind = "invalid"


class BudgetExceededError(WeylError):
    kind = "budget_exceeded"


class ThickeningError(ToolkitError):
    module = "thickening"
    kind = "invalid"


class GenericityWarning(UserWarning):
    """Some w has d(w theta, theta0) within tolerance of the requested radius."""


class PolytopeError(ToolkitError):
    module = "polytope"
    kind = "invalid"


class FinslerError(ToolkitError):
    module = "finsler"
    kind = "invalid"


class NonRegularError(FinslerError):
    kind = "non_regular"


class SymSpaceError(ToolkitError):
    module = "symspace"
    kind = "invalid"


class SingularMatrixError(SymSpaceError):
    kind = "singular"


class RankAmbiguityError(SymSpaceError):
    """A numerical rank decision fell inside the ambiguity band."""

    kind = "rank_ambiguity"

    def __init__(self, message, i=None, j=None, value=None):
        super().__init__(message)
        self.i = i
        self.j = j
        self.value = value


class FlagConvergenceError(SymSpaceError):
    kind = "no_convergence"


class SequenceNotRegularError(SymSpaceError):
    kind = "non_regular"


class UsageError(ToolkitError):
    module = "cli"
    kind = "usage"


class SamplingWarning(UserWarning):
    """A sampled word ball is too small to exhibit the requested regularity."""
