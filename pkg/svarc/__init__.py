from .model.abelian import AbGroup, AbHom
from .model.category import FinCat, FunctorMap, Subcategory, make_category, validate_category, validate_functor
from .model.cochain import CochainComplex, cohomology, relative_cohomology
from .model.cup import cup_length
from .model.factorization import constant_system, multiplication_pairing, validate_natural_system, zero_pairing
from .model.fibration import classify
from .model.instances import generate_random, load_bundled
from .model.secat import INFINITE, secat, svarc_bound

__all__ = [
    "AbGroup",
    "AbHom",
    "FinCat",
    "FunctorMap",
    "Subcategory",
    "make_category",
    "validate_category",
    "validate_functor",
    "CochainComplex",
    "cohomology",
    "relative_cohomology",
    "cup_length",
    "constant_system",
    "multiplication_pairing",
    "validate_natural_system",
    "zero_pairing",
    "classify",
    "generate_random",
    "load_bundled",
    "INFINITE",
    "secat",
    "svarc_bound",
]
