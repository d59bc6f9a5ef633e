"""Operads and nested pre-Lie operads on species, over exact rationals."""

from .linear import LinComb
from .registry import get_product, get_structure

__all__ = ["LinComb", "get_product", "get_structure"]
__version__ = "0.1.0"
