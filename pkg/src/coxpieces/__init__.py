"""Exact computations with finite Coxeter groups: stable pieces of double cosets,
minimal length elements of twisted classes, cuspidal classes, good elements in
positive braid monoids and trace functionals on Hecke algebras."""
from __future__ import annotations

from .coxcore import CoxeterSystem, DiagramAutomorphism, GroupElement, build_system

__version__ = "0.1.0"
__all__ = ["CoxeterSystem", "DiagramAutomorphism", "GroupElement", "build_system"]
