"""Legendrian rainbow closures of positive braids: Chekanov-Eliashberg DGAs,
augmentation varieties over finite fields, normal rulings, Barannikov normal
forms, the augmentations-to-sheaves map and Stokes diagrams."""

from .braidfront import BraidWord, cylindrical_closure, ng_resolution, parse_braid, rainbow_closure
from .dga import build_dga, check_d_squared
from .errors import DomainError, InvariantViolation, LabError

__all__ = [
    "BraidWord",
    "DomainError",
    "InvariantViolation",
    "LabError",
    "build_dga",
    "check_d_squared",
    "cylindrical_closure",
    "ng_resolution",
    "parse_braid",
    "rainbow_closure",
]
