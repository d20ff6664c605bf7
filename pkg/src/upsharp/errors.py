"""Exception hierarchy shared across the package."""


class UpsharpError(Exception):
    """Base class for all package-specific failures."""


class UsageError(UpsharpError, ValueError):
    """Invalid arguments or out-of-range parameters supplied by the caller."""


class DivergentIntegralError(UpsharpError, ArithmeticError):
    """The requested weighted integral diverges near the origin or infinity."""


class QuadratureConvergenceError(UpsharpError, ArithmeticError):
    """A numerical rule could not meet the requested tolerance within budget."""


class FormUnavailableError(UpsharpError, LookupError):
    """No expression exists for the requested (functional, form) pair."""


class SingularWeightError(UpsharpError, ValueError):
    """Profile fails the vanishing-order admissibility check for a singular weight."""


class DegenerateProfileError(UpsharpError, ValueError):
    """Denominator of a quotient fell below tolerance (effectively the zero profile)."""


class InconclusiveScanError(UpsharpError, RuntimeError):
    """Discrete infimum scan could not certify its tail beyond the scanned range."""


class SolverError(UpsharpError, RuntimeError):
    """Variational minimization failed (non-convergence or degenerate collapse)."""
