"""Partial group cohomology over finite products of Z/p^k blocks."""

from .action import PartialAction, TransitivityData, global_action, restrict_global, transitivity_data, validate
from .cochain import Cochain, delta, identity_cochain, is_cocycle, random_cochain
from .cohomology import check_partial_global_iso, cohomology, cohomology_bruteforce, random_cocycle, solve_coboundary
from .globalize import build_enveloping, compare_globalizations, globalize
from .group import FiniteGroup, make_cyclic, make_from_table
from .ring import ProductRing
from .verify import verify

__all__ = [
    "Cochain",
    "FiniteGroup",
    "PartialAction",
    "ProductRing",
    "TransitivityData",
    "build_enveloping",
    "check_partial_global_iso",
    "cohomology",
    "cohomology_bruteforce",
    "compare_globalizations",
    "delta",
    "global_action",
    "globalize",
    "identity_cochain",
    "is_cocycle",
    "make_cyclic",
    "make_from_table",
    "random_cochain",
    "random_cocycle",
    "restrict_global",
    "solve_coboundary",
    "transitivity_data",
    "validate",
    "verify",
]
