"""Finite Coxeter systems with exact arithmetic."""
from __future__ import annotations

from .matrix import INF, CoxeterMatrix, DiagramAutomorphism, finite_type_matrix, parse_type
from .scalar import QuadScalar
from .system import (CoxeterSystem, GroupElement, build_system, format_word, mask_of,
                     members, s_interval)

__all__ = [
    "INF", "CoxeterMatrix", "DiagramAutomorphism", "finite_type_matrix", "parse_type",
    "QuadScalar", "CoxeterSystem", "GroupElement", "build_system", "format_word",
    "mask_of", "members", "s_interval",
]
