"""Exact Schur multipliers of finite p-groups.

A from-scratch toolkit: finite presentations realized through coset
enumeration, second integral homology through the normalized bar
resolution with exact sparse integer elimination, closed-form
multiplier calculus, and a verified catalog of the small p-groups the
classification machinery runs over.
"""

from .errors import (
    CatalogError,
    ConsistencyError,
    EnumerationError,
    ParseError,
    SchurError,
    SizeError,
    UndecidedError,
    ValidationError,
)
from .groups import (
    AbelianInvariants,
    FiniteGroup,
    GroupFingerprint,
    Subgroup,
    abelianization,
    center,
    central_product,
    derived_subgroup,
    direct_product,
    is_isomorphic,
    is_prime,
    prime_power,
    quotient,
    structure_predicates,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianInvariants",
    "CatalogError",
    "ConsistencyError",
    "EnumerationError",
    "FiniteGroup",
    "GroupFingerprint",
    "ParseError",
    "SchurError",
    "SizeError",
    "Subgroup",
    "UndecidedError",
    "ValidationError",
    "abelianization",
    "center",
    "central_product",
    "derived_subgroup",
    "direct_product",
    "is_isomorphic",
    "is_prime",
    "prime_power",
    "quotient",
    "structure_predicates",
]
