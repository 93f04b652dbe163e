"""Exception hierarchy shared by every module."""
from __future__ import annotations


class CoxeterError(ValueError):
    """Base class for library errors."""


class ParseError(CoxeterError):
    pass


class InfiniteOrTooLarge(CoxeterError):
    pass


class UnsupportedBond(CoxeterError):
    pass


class SystemMismatch(CoxeterError):
    pass


class InfiniteParabolic(CoxeterError):
    pass


class InvalidAutomorphism(CoxeterError):
    pass


# pieces
class InadmissibleTriple(CoxeterError):
    pass


class BadIsomorphism(InadmissibleTriple):
    pass


class SigmaNotInternal(CoxeterError):
    pass


class NotDistinguished(CoxeterError):
    pass


class NotInMinimalCosetForm(CoxeterError):
    pass


class InvalidSequence(CoxeterError):
    pass


class NonStabilizing(CoxeterError):
    pass


class OracleMismatch(CoxeterError):
    """An algorithm and its brute-force cross-check disagree."""


# minlen
class NotTwistedInvolution(CoxeterError):
    pass


class LengthMismatch(CoxeterError):
    pass


# cuspidal / braid
class UnsupportedType(CoxeterError):
    pass


class InvalidPartition(CoxeterError):
    pass


class IrrationalLeak(CoxeterError):
    pass


class SigmaOrderNotTwo(CoxeterError):
    pass


class RankTooLargeForSearch(CoxeterError):
    pass


class UnknownCheck(CoxeterError):
    pass


# hecke
class SupportOutsideParabolic(CoxeterError):
    pass


class WeightIncompatible(CoxeterError):
    pass
