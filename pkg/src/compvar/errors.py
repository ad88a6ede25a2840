"""Exception types shared across the toolkit.

The CLI maps these onto process exit codes; the library raises them with
enough context to reconstruct what failed (condition tag, indices, counts).
"""


class CompvarError(Exception):
    """Base class for all toolkit errors."""


class ShapeMismatch(CompvarError):
    """Matrix/complex data has inconsistent sizes (distinct from a failed
    defining condition on well-shaped data)."""


class FieldMismatch(CompvarError):
    """Operands live over different coefficient fields."""


class AlgebraMismatch(CompvarError):
    """Operands are defined over different algebras."""


class ValidationFailure(CompvarError):
    """Well-shaped data failed one of its exact defining conditions.

    ``witness`` names the first violated condition, e.g. ``("beta", 1, 2)``.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsupportedCharacteristic(CompvarError):
    """The requested computation is only valid over Q or over F_p with p
    large enough (trace-form radical criterion)."""


class MissingIdempotents(CompvarError):
    """The operation needs the complete set of orthogonal primitive
    idempotents, which is only recorded for quiver-constructed algebras."""


class NotProjectiveComplex(CompvarError):
    """The complex was required to have all terms projective."""


class NotAlmostProjective(CompvarError):
    """The complex was required to be almost projective (all terms
    projective except possibly the leftmost nonzero one)."""


class BudgetExceeded(CompvarError):
    """An enumeration or search would exceed its configured budget.

    ``count`` carries the exact size that was computed before bailing out.
    """

    def __init__(self, message, count=None):
        super().__init__(message)
        self.count = count


class SplitterFailure(CompvarError):
    """The acyclic-summand splitter could not find an idempotent generator;
    carries the quotient-ideal dimensions for diagnosis."""

    def __init__(self, message, ideal_dim=None, quotient_dim=None):
        super().__init__(message)
        self.ideal_dim = ideal_dim
        self.quotient_dim = quotient_dim


class SchemaError(CompvarError):
    """Input JSON does not match the documented schema."""
