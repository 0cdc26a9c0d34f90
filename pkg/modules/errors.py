"""
Exception hierarchy shared by all modules
"""


class CausalPolytopeError(Exception):
    """Base class for every error raised by the toolkit"""


class PreconditionError(CausalPolytopeError, ValueError):
    """An input violates the documented precondition of an operation"""


class BudgetExceededError(CausalPolytopeError):
    """A computation was refused or cut off by a configured budget"""


class InconsistentSystemError(CausalPolytopeError, ValueError):
    """A linear system has no solution (0 = nonzero after elimination)"""


class DichotomyViolation(CausalPolytopeError):
    """An effect pair is both or neither of the normal/extra cases"""

    def __init__(self, message: str, counterexample: dict):
        super().__init__(message)
        self.counterexample = counterexample


class FineTuningViolation(CausalPolytopeError):
    """A fractional vertex admits no extra-effect witness"""


class CatalogError(CausalPolytopeError, IOError):
    """Catalog file missing, truncated, or failing its checksum"""


class CatalogInvariantError(CausalPolytopeError):
    """Catalog content contradicts a known invariant (class ceiling)"""


class MeasurementConfigError(CausalPolytopeError, ValueError):
    """Measurement bases are not orthonormal or probabilities do not sum to 1"""


class SolverError(CausalPolytopeError, RuntimeError):
    """The LP solver failed or returned a point that is not a vertex"""
