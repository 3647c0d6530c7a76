"""Exact arithmetic over F_q, F_q[t] and K = F_{q^m}(t): fields, places,
valuations, residues and truncated Laurent expansions."""

from .finitefield import ExtField, FFElem, FieldError, FiniteField, PrimeField, factor_int
from .poly import Poly, factor as factor_poly, find_irreducible, gcd as poly_gcd, is_irreducible, roots as poly_roots
from .ratfunc import (
    ConstantExtension,
    FieldSpec,
    FunctionField,
    Place,
    RatFunc,
    finite_places_of,
    log_abs,
    ord_at,
    place_from_string,
    residue,
    sum_of_valuations,
)
from .laurent import (
    LSeries,
    PSeries,
    PlaceData,
    PrecisionError,
    embed_elem,
    evaluate_series,
    hensel_root,
    laurent_expand,
    rational_reconstruct,
)

__all__ = [
    "ExtField", "FFElem", "FieldError", "FiniteField", "PrimeField", "factor_int",
    "Poly", "factor_poly", "find_irreducible", "poly_gcd", "is_irreducible", "poly_roots",
    "ConstantExtension", "FieldSpec", "FunctionField", "Place", "RatFunc",
    "finite_places_of", "log_abs", "ord_at", "place_from_string", "residue",
    "sum_of_valuations",
    "LSeries", "PSeries", "PlaceData", "PrecisionError", "embed_elem",
    "evaluate_series", "hensel_root", "laurent_expand", "rational_reconstruct",
]
