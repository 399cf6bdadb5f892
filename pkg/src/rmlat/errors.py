"""Exception hierarchy shared by all modules.

Exceptions are raised only where an operation cannot produce its declared
result.  Reportable outcomes (a non-periodic expansion, a class-count
mismatch, ...) are plain result values, not exceptions; the pipeline folds
both into level reports.
"""


class RmlatError(Exception):
    """Base class for all package errors."""


class ZeroPolynomial(RmlatError):
    """An operation that requires a nonzero polynomial got the zero polynomial."""


class CompositumTooLarge(RmlatError):
    """A common field for the operands would exceed the configured degree bound."""


class DegenerateRational(RmlatError):
    """A continued-fraction step hit an exactly rational value and terminates."""


class WrongDegree(RmlatError):
    """Operand has the wrong algebraic degree for this operation."""


class NotPeriodic(RmlatError):
    """A periodic expansion was required but the expansion is not periodic."""


class NoPerronRoot(RmlatError):
    """The period matrix has no real eigenvalue > 1; reportable anomaly."""


class EmptyModule(RmlatError):
    """All generators of a would-be pseudo-lattice are zero."""


class RationalSlope(RmlatError):
    """The ratio of the two leading periods is rational; the projected
    module is degenerate."""


class InvalidDiscriminant(RmlatError):
    """Not a valid positive non-square discriminant (D > 0, D = 0,1 mod 4)."""


class WrongOrder(RmlatError):
    """The pseudo-lattice's endomorphism ring does not match the given order."""


class NotAnosov(RmlatError):
    """The eigen-orbit does not have full degree, so the eigenvector-lattice
    construction does not apply."""


class PositivityNotAchieved(RmlatError):
    """No strictly positive basis was found within the search budget."""


class NonSeparating(RmlatError):
    """No Hecke operator (or small combination) with squarefree
    characteristic polynomial was found."""


class DiagnosticSkipped(RmlatError):
    """A field diagnostic exceeds the desk-scale degree bound; carries a reason."""


class CacheCorrupt(RmlatError):
    """A cache entry exists but cannot be decoded; carries the offending path."""

    def __init__(self, path, reason=""):
        self.path = str(path)
        self.reason = reason
        super().__init__(f"corrupt cache entry {path}: {reason}")
