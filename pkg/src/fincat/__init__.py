"""Finite category theory: presheaves, Kan extensions, profunctors, relative
monads, skew-monoidal coherence and Isbell duality, checked on finite data."""

from .errors import FinCatError
from .fincore import (
    CatNat,
    FinCat,
    FinFunctor,
    FinLattice,
    chain,
    discrete,
    op_cat,
    poset,
    product_cat,
    terminal,
    walking_arrow,
)
from .finset import FinSet, SetMap
from .presheaf import NatFamily, SetFunctor, nat_hom, yoneda
from .prof import Profunctor, companion, compose_coend, conjoint, hom_prof

__version__ = "0.1.0"

__all__ = [
    "CatNat",
    "FinCat",
    "FinCatError",
    "FinFunctor",
    "FinLattice",
    "FinSet",
    "NatFamily",
    "Profunctor",
    "SetFunctor",
    "SetMap",
    "chain",
    "companion",
    "compose_coend",
    "conjoint",
    "discrete",
    "hom_prof",
    "nat_hom",
    "op_cat",
    "poset",
    "product_cat",
    "terminal",
    "walking_arrow",
    "yoneda",
]
