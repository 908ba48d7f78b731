"""Finite forcing: posets, regular open completions, names, forcing and iterations."""

__version__ = "0.1.0"

from .algebra import AlgebraElement, RegularOpenAlgebra, complete
from .corpus import exhaustive_preorders, random_preorders, standard_posets
from .errors import ForcelabError
from .forcing import ForcingContext, forces, forces_recursive, valuate
from .names import Name, check_name, generic_name, op_name
from .order import GenericFilter, Poset, enumerate_generics, is_generic
from .twostep import check_poset_name, iterate, product, star, validate_poset_name

__all__ = [
    "AlgebraElement", "ForcelabError", "ForcingContext", "GenericFilter", "Name", "Poset",
    "RegularOpenAlgebra", "check_name", "check_poset_name", "complete", "enumerate_generics",
    "exhaustive_preorders", "forces", "forces_recursive", "generic_name", "is_generic", "iterate",
    "op_name", "product", "random_preorders", "standard_posets", "star", "valuate", "validate_poset_name",
]
