"""Exact homogeneous polynomial algebra in three variables over Q(i)."""

from .gaussrat import GaussRat, I, ONE, ZERO
from .gcd import hp_gcd, hp_gcd_many
from .hpoly import (
    HPoly,
    Monomial,
    hp_compose,
    hp_divexact,
    hp_divmod,
    hp_eval,
    hp_mul,
    hp_text,
    jacobian_det,
)
from .resultant import resultant_eliminate, sylvester_matrix

__all__ = [
    "GaussRat",
    "HPoly",
    "I",
    "Monomial",
    "ONE",
    "ZERO",
    "hp_compose",
    "hp_divexact",
    "hp_divmod",
    "hp_eval",
    "hp_gcd",
    "hp_gcd_many",
    "hp_mul",
    "hp_text",
    "jacobian_det",
    "resultant_eliminate",
    "sylvester_matrix",
]
