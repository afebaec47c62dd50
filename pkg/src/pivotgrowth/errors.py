"""Exception types shared across the toolkit."""


class PivotGrowthError(Exception):
    """Base class for all toolkit errors."""


class ZeroPivot(PivotGrowthError):
    """A zero pivot was hit at step k before elimination finished."""

    def __init__(self, k):
        self.k = k
        super().__init__(f"zero pivot at elimination step {k}")


class Singular(PivotGrowthError):
    """No nonzero pivot could be found at some elimination step."""


class NotCP(PivotGrowthError):
    """Input matrix is not exactly completely pivoted."""


class NotRookPivoted(PivotGrowthError):
    """Input matrix is not exactly rook pivoted."""

    def __init__(self, which="input"):
        self.which = which
        super().__init__(f"{which} matrix is not rook pivoted")


class NotNormalized(PivotGrowthError):
    """Matrix violates a normalization precondition (corner entry, entry range)."""


class SlackTooLarge(PivotGrowthError):
    """A pivoting slack of -1 or below makes the repair algebra break down."""


class MissingEntries(PivotGrowthError):
    """A lower-bound table lacks entries needed for an extrapolation."""

    def __init__(self, missing):
        self.missing = tuple(missing)
        super().__init__(f"missing lower-bound entries for n = {list(self.missing)}")


class Divergent(PivotGrowthError):
    """An infinite product or series was requested outside its convergence region."""


class DegenerateDraw(PivotGrowthError):
    """A random start could not be built (pivot underflow during elimination)."""


class Diverged(PivotGrowthError):
    """The local optimizer diverged."""


class Stalled(PivotGrowthError):
    """The local optimizer stopped making progress before reaching feasibility."""

    def __init__(self, candidate, message):
        self.candidate = candidate
        super().__init__(message)


class AllRestartsFailed(PivotGrowthError):
    """Every restart of a multistart search failed."""


class ZeroFloatPivot(PivotGrowthError):
    """A zero pivot was hit during simulated floating-point elimination."""

    def __init__(self, k):
        self.k = k
        super().__init__(f"zero floating-point pivot at step {k}")


class ParseError(PivotGrowthError):
    """A JSON document does not match the expected schema."""


class VerificationFailed(PivotGrowthError):
    """A certificate failed re-verification; message names the first violation."""


class RejectedNotBetter(PivotGrowthError):
    """A certificate was rejected because the ledger already holds a better one."""
