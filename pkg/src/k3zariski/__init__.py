"""Exact arithmetic of quadratic forms and integral Zariski decompositions on K3 lattices."""

from k3zariski.arith import INF, Place, factorize, legendre, mod2symbol, vp
from k3zariski.errors import (
    BudgetExceeded,
    Degenerate,
    DomainError,
    InternalInconsistency,
    NotEffective,
)
from k3zariski.hilbert import hilbert_symbol, product_formula_check
from k3zariski.quadform import QuadraticForm, is_isotropic_global, is_isotropic_local

__version__ = "0.1.0"

__all__ = [
    "INF",
    "Place",
    "factorize",
    "legendre",
    "mod2symbol",
    "vp",
    "hilbert_symbol",
    "product_formula_check",
    "QuadraticForm",
    "is_isotropic_global",
    "is_isotropic_local",
    "BudgetExceeded",
    "Degenerate",
    "DomainError",
    "InternalInconsistency",
    "NotEffective",
]
