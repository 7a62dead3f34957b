"""Exact computations with seminorms on groups, Z-subshifts, finite flows
and the weak types of discrete-group flows."""

from .errors import FlowtypeError, GuardExceeded, InvalidInput, PreconditionError
from .group import Group, SymmetricFiniteSet, ball
from .seminorm import Seminorm, NestedChain, WeightedPairSet
from .flowspace import ClopenSet, FiniteFlow, ZSubshift
from .weaktype import LStructure, Resolution, WeakType, enumerate_type, full_structure, realizes
from .oracle import brute_type, factor_exists

__all__ = [
    "FlowtypeError", "GuardExceeded", "InvalidInput", "PreconditionError",
    "Group", "SymmetricFiniteSet", "ball",
    "Seminorm", "NestedChain", "WeightedPairSet",
    "ClopenSet", "FiniteFlow", "ZSubshift",
    "LStructure", "Resolution", "WeakType", "enumerate_type", "full_structure", "realizes",
    "brute_type", "factor_exists",
]
