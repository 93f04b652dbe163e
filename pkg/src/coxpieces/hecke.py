"""Iwahori-Hecke algebras with unequal parameters in the T-basis.

Scalars live in Z[v, v^-1].  Linear algebra on functionals is done over the
field Q(v) with a small exact rational-function type.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .coxcore import CoxeterSystem
from .errors import SupportOutsideParabolic, SystemMismatch, WeightIncompatible
from .verdict import Verdict


# ---------------------------------------------------------------------------
# Laurent polynomials in v


class LaurentScalar:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, int] | None = None) -> None:
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c: int) -> LaurentScalar:
        return cls({0: c})

    @classmethod
    def v(cls, k: int = 1) -> LaurentScalar:
        return cls({k: 1})

    @staticmethod
    def _lift(x) -> LaurentScalar:
        return x if isinstance(x, LaurentScalar) else LaurentScalar.const(int(x))

    def __add__(self, other) -> LaurentScalar:
        other = self._lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentScalar(out)

    __radd__ = __add__

    def __neg__(self) -> LaurentScalar:
        return LaurentScalar({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> LaurentScalar:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> LaurentScalar:
        return self._lift(other) - self

    def __mul__(self, other) -> LaurentScalar:
        other = self._lift(other)
        out: dict[int, int] = {}
        for a, c in self.terms.items():
            for b, d in other.terms.items():
                out[a + b] = out.get(a + b, 0) + c * d
        return LaurentScalar(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentScalar.const(other)
        return isinstance(other, LaurentScalar) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        return sum((c * x ** k for k, c in self.terms.items()), Fraction(0))

    def to_ratfunc(self) -> RatFunc:
        if not self.terms:
            return RatFunc.zero()
        lo = min(self.terms)
        num = [Fraction(0)] * (max(self.terms) - lo + 1)
        for k, c in self.terms.items():
            num[k - lo] = Fraction(c)
        den = [Fraction(0)] * (-lo) + [Fraction(1)] if lo < 0 else [Fraction(1)]
        num = [Fraction(0)] * max(lo, 0) + num
        return RatFunc(tuple(num), tuple(den))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            mono = "" if k == 0 else ("v" if k == 1 else f"v^{k}")
            coef = str(c) if (not mono or abs(c) != 1) else ("-" if c < 0 else "")
            parts.append(f"{coef}{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Q(v)

Poly = tuple[Fraction, ...]


def _trim(p) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def _pneg(a: Poly) -> Poly:
    return tuple(-c for c in a)


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pdivmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(r) >= len(b) and r:
        c = r[-1] / b[-1]
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] -= c * y
        r = list(_trim(r))
    return _trim(q), _trim(r)


def _pgcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return tuple(c / a[-1] for c in a) if a else ()


class RatFunc:
    """Element of Q(v) kept as num/den with coprime parts and monic den."""

    __slots__ = ("num", "den")

    def __init__(self, num: Iterable, den: Iterable = (Fraction(1),)) -> None:
        num, den = _trim(Fraction(c) for c in num), _trim(Fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = (), (Fraction(1),)
            return
        g = _pgcd(num, den)
        if len(g) > 1:
            num, den = _pdivmod(num, g)[0], _pdivmod(den, g)[0]
        lead = den[-1]
        self.num = tuple(c / lead for c in num)
        self.den = tuple(c / lead for c in den)

    @classmethod
    def zero(cls) -> RatFunc:
        return cls(())

    @classmethod
    def one(cls) -> RatFunc:
        return cls((1,))

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, o: RatFunc) -> RatFunc:
        return RatFunc(_padd(_pmul(self.num, o.den), _pmul(o.num, self.den)), _pmul(self.den, o.den))

    def __neg__(self) -> RatFunc:
        return RatFunc(_pneg(self.num), self.den)

    def __sub__(self, o: RatFunc) -> RatFunc:
        return self + (-o)

    def __mul__(self, o: RatFunc) -> RatFunc:
        return RatFunc(_pmul(self.num, o.num), _pmul(self.den, o.den))

    def __truediv__(self, o: RatFunc) -> RatFunc:
        if o.is_zero():
            raise ZeroDivisionError("division by zero in Q(v)")
        return RatFunc(_pmul(self.num, o.den), _pmul(self.den, o.num))

    def __eq__(self, o) -> bool:
        return isinstance(o, RatFunc) and self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __str__(self) -> str:
        def show(p: Poly) -> str:
            terms = [f"{c}" + ("" if k == 0 else f"*v^{k}") for k, c in enumerate(p) if c]
            return " + ".join(terms) or "0"
        return show(self.num) if self.den == (1,) else f"({show(self.num)})/({show(self.den)})"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# the algebra


def validate_weight(W: CoxeterSystem, L: Iterable[int]) -> tuple[int, ...]:
    L = tuple(int(x) for x in L)
    if len(L) != W.rank:
        raise WeightIncompatible(f"weight needs {W.rank} entries, got {len(L)}")
    for i in range(W.rank):
        for j in range(W.rank):
            m = W.matrix.m[i][j]
            if i != j and m % 2 == 1 and m > 0 and L[i] != L[j]:
                raise WeightIncompatible(f"L({i + 1}) != L({j + 1}) across an odd bond")
    return L


class HeckeAlgebra:
    def __init__(self, W: CoxeterSystem, L: Iterable[int] | None = None) -> None:
        self.W = W
        self.L = validate_weight(W, L if L is not None else [1] * W.rank)
        self._gap = [LaurentScalar({self.L[i]: 1, -self.L[i]: -1}) for i in range(W.rank)]

    def element(self, coeffs: Mapping[int, LaurentScalar | int]) -> HeckeElement:
        return HeckeElement(self, {w: LaurentScalar._lift(c) for w, c in coeffs.items()})

    def one(self) -> HeckeElement:
        return self.element({0: 1})

    def T(self, w: int) -> HeckeElement:
        return self.element({w: 1})

    def build_T(self, word: Iterable[int]) -> HeckeElement:
        """Product of generators T_s along a word (reduced or not)."""
        h = self.one()
        for i in word:
            h = self.rmul_gen(h, i)
        return h

    def lmul_gen(self, i: int, h: HeckeElement) -> HeckeElement:
        W = self.W
        out: dict[int, LaurentScalar] = {}
        for w, c in h.coeffs.items():
            sw = W.lmul(i, w)
            out[sw] = out.get(sw, LaurentScalar()) + c
            if W.is_left_descent(i, w):
                out[w] = out.get(w, LaurentScalar()) + c * self._gap[i]
        return HeckeElement(self, out)

    def rmul_gen(self, h: HeckeElement, i: int) -> HeckeElement:
        W = self.W
        out: dict[int, LaurentScalar] = {}
        for w, c in h.coeffs.items():
            ws = W.rmul(w, i)
            out[ws] = out.get(ws, LaurentScalar()) + c
            if W.is_right_descent(w, i):
                out[w] = out.get(w, LaurentScalar()) + c * self._gap[i]
        return HeckeElement(self, out)

    def mul(self, a: HeckeElement, b: HeckeElement) -> HeckeElement:
        if a.algebra is not self or b.algebra is not self:
            raise SystemMismatch("Hecke elements from different algebras")
        total = HeckeElement(self, {})
        for x, c in a.coeffs.items():
            t = b
            for i in reversed(self.W.word(x)):
                t = self.lmul_gen(i, t)
            total = total + t.scale(c)
        return total

    def check_delta(self, mapping: Mapping[int, int]) -> None:
        for j, k in mapping.items():
            if self.L[j] != self.L[k]:
                raise WeightIncompatible(f"L({j + 1}) != L({k + 1})")

    def D(self, h: HeckeElement, mapping: Mapping[int, int]) -> HeckeElement:
        """The isomorphism H_J -> H_J' sending T_{s_j} to T_{s_delta(j)}."""
        self.check_delta(mapping)
        J = frozenset(mapping)
        out: dict[int, LaurentScalar] = {}
        for w, c in h.coeffs.items():
            if not self.W.in_parabolic(w, J):
                raise SupportOutsideParabolic(f"{self.W.format(w)} is not in W_J")
            out[self.W.from_word(mapping[i] for i in self.W.word(w))] = c
        return HeckeElement(self, out)


@dataclass
class HeckeElement:
    algebra: HeckeAlgebra
    coeffs: dict[int, LaurentScalar] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.coeffs = {w: c for w, c in self.coeffs.items() if not c.is_zero()}

    def _same(self, other: HeckeElement) -> None:
        if other.algebra is not self.algebra:
            raise SystemMismatch("Hecke elements from different algebras")

    def __add__(self, other: HeckeElement) -> HeckeElement:
        self._same(other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, LaurentScalar()) + c
        return HeckeElement(self.algebra, out)

    def __neg__(self) -> HeckeElement:
        return HeckeElement(self.algebra, {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other: HeckeElement) -> HeckeElement:
        return self + (-other)

    def scale(self, c) -> HeckeElement:
        c = LaurentScalar._lift(c)
        return HeckeElement(self.algebra, {w: c * x for w, x in self.coeffs.items()})

    def __mul__(self, other: HeckeElement) -> HeckeElement:
        return self.algebra.mul(self, other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, HeckeElement) and other.algebra is self.algebra
                and self.coeffs == other.coeffs)

    def specialize(self, x=1) -> dict[int, Fraction]:
        out = {w: c.evaluate(x) for w, c in self.coeffs.items()}
        return {w: c for w, c in out.items() if c}

    def __str__(self) -> str:
        W = self.algebra.W
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})T[{W.format(w)}]" for w, c in sorted(self.coeffs.items()))


# ---------------------------------------------------------------------------
# functionals with zeta(h' h) = zeta(h D(h'))


@dataclass(frozen=True)
class ZetaFunctional:
    values: tuple[RatFunc, ...]

    def __call__(self, h: HeckeElement) -> RatFunc:
        total = RatFunc.zero()
        for w, c in h.coeffs.items():
            if not self.values[w].is_zero():
                total = total + self.values[w] * c.to_ratfunc()
        return total


def _constraint(H: HeckeAlgebra, mapping: Mapping[int, int], x: int, w: int) -> HeckeElement:
    """T_x T_w - T_w D(T_x); zeta must vanish on it."""
    Tx = H.T(x)
    return Tx * H.T(w) - H.T(w) * H.D(Tx, mapping)


def _nullspace(rows: list[dict[int, RatFunc]], ncols: int) -> list[list[RatFunc]]:
    pivots: list[tuple[int, dict[int, RatFunc]]] = []
    for row in rows:
        row = dict(row)
        for col, prow in pivots:
            c = row.get(col)
            if c is not None and not c.is_zero():
                for k, val in prow.items():
                    row[k] = row.get(k, RatFunc.zero()) - c * val
        row = {k: val for k, val in row.items() if not val.is_zero()}
        if not row:
            continue
        col = min(row)
        lead = row[col]
        row = {k: val / lead for k, val in row.items()}
        # keep the pivot rows fully reduced
        new = []
        for pc, prow in pivots:
            c = prow.get(col)
            if c is not None and not c.is_zero():
                prow = dict(prow)
                for k, val in row.items():
                    prow[k] = prow.get(k, RatFunc.zero()) - c * val
                prow = {k: val for k, val in prow.items() if not val.is_zero()}
            new.append((pc, prow))
        pivots = new + [(col, row)]
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = [RatFunc.zero() for _ in range(ncols)]
        vec[free] = RatFunc.one()
        for col, prow in pivots:
            c = prow.get(free)
            if c is not None:
                vec[col] = -c
        basis.append(vec)
    return basis


def solve_zeta_space(H: HeckeAlgebra, mapping: Mapping[int, int]) -> list[ZetaFunctional]:
    """Basis of all linear zeta with zeta(T_{s_j} h) = zeta(h T_{s_delta(j)})."""
    H.check_delta(mapping)
    W = H.W
    rows = []
    for j in sorted(mapping):
        for w in W.elements():
            h = _constraint(H, mapping, W.gen(j), w)
            if h.coeffs:
                rows.append({u: c.to_ratfunc() for u, c in h.coeffs.items()})
    basis = [ZetaFunctional(tuple(v)) for v in _nullspace(rows, W.order)]
    for z in basis:
        if residual(H, mapping, z):
            raise AssertionError("solution does not satisfy the full constraint set")
    return basis


def residual(H: HeckeAlgebra, mapping: Mapping[int, int], z: ZetaFunctional) -> list[tuple[int, int]]:
    """(x, w) with x in W_J where zeta(T_x T_w) != zeta(T_w D(T_x))."""
    W = H.W
    bad = []
    for x in W.parabolic_elements(frozenset(mapping)):
        for w in W.elements():
            if not z(_constraint(H, mapping, x, w)).is_zero():
                bad.append((x, w))
    return bad


@dataclass
class ZetaReport:
    dimension: int
    rows: list[dict]
    verdict: Verdict


def verify_zeta_constancy(H: HeckeAlgebra, mapping: Mapping[int, int], scope: str = "") -> ZetaReport:
    """Every solution is constant on the minimal-length part of each W_J-orbit."""
    from .minlen import TwistedAction, min_length_set
    W = H.W
    basis = solve_zeta_space(H, mapping)
    action = TwistedAction(W, mapping)
    Jp = frozenset(mapping.values())
    rows = []
    bad = None
    for orbit in action.orbits.values():
        eligible = True  # W_J is finite here
        omin = min_length_set(action, orbit)
        const = all(len({z.values[w] for w in omin}) == 1 for z in basis)
        rows.append({"orbit": W.format(min(orbit)), "size": len(orbit), "min": [W.format(w) for w in omin],
                     "meets_min_cosets": any(W.is_min_right(w, Jp) for w in orbit),
                     "constant": const})
        if eligible and not const and bad is None:
            bad = [W.format(w) for w in omin]
    v = Verdict("zeta-constant-on-min", scope, bad is None, bad,
                details={"dimension": len(basis), "orbits": len(rows)})
    return ZetaReport(len(basis), rows, v)


__all__ = [
    "LaurentScalar", "RatFunc", "validate_weight", "HeckeAlgebra", "HeckeElement",
    "ZetaFunctional", "solve_zeta_space", "residual", "ZetaReport", "verify_zeta_constancy",
]
