"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class Degenerate(DomainError):
    """The quadratic form has zero determinant."""


class NotEffective(DomainError):
    """A divisor has a negative coefficient over the curve basis."""


class InternalInconsistency(RuntimeError):
    """A proof-backed invariant failed; the input violates a modeling assumption."""


class BudgetExceeded(RuntimeError):
    """A brute-force search would exceed its work budget."""
