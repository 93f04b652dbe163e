"""Exact arithmetic in Q(sqrt2, sqrt3).

Elements are stored as a + b*r2 + c*r3 + d*r6 with rational a, b, c, d.
This covers -cos(pi/m) for every bond m in {2, 3, 4, 6}.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

Number = Union[int, Fraction, "QuadScalar"]


def _sign_q2(r: Fraction, s: Fraction) -> int:
    """Sign of r + s*sqrt2."""
    if s == 0:
        return (r > 0) - (r < 0)
    if r == 0:
        return (s > 0) - (s < 0)
    if (r > 0) == (s > 0):
        return 1 if r > 0 else -1
    # opposite signs: compare r^2 with 2 s^2
    diff = r * r - 2 * s * s
    big = (diff > 0) - (diff < 0)
    return big if r > 0 else -big


class QuadScalar:
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int | Fraction = 0, b: int | Fraction = 0,
                 c: int | Fraction = 0, d: int | Fraction = 0) -> None:
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.c = Fraction(c)
        self.d = Fraction(d)

    @staticmethod
    def coerce(x: Number) -> QuadScalar:
        if isinstance(x, QuadScalar):
            return x
        return QuadScalar(x)

    def _t(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuadScalar(other)
        if not isinstance(other, QuadScalar):
            return NotImplemented
        return self._t() == other._t()

    def __hash__(self) -> int:
        if self.b == 0 and self.c == 0 and self.d == 0:
            return hash(self.a)
        return hash(self._t())

    def __bool__(self) -> bool:
        return bool(self.a or self.b or self.c or self.d)

    def __add__(self, other: Number) -> QuadScalar:
        o = QuadScalar.coerce(other)
        return QuadScalar(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self) -> QuadScalar:
        return QuadScalar(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other: Number) -> QuadScalar:
        return self + (-QuadScalar.coerce(other))

    def __rsub__(self, other: Number) -> QuadScalar:
        return QuadScalar.coerce(other) - self

    def __mul__(self, other: Number) -> QuadScalar:
        if isinstance(other, (int, Fraction)):
            return QuadScalar(self.a * other, self.b * other, self.c * other, self.d * other)
        o = QuadScalar.coerce(other)
        a, b, c, d = self._t()
        e, f, g, h = o._t()
        # r2*r2=2, r3*r3=3, r6*r6=6, r2*r3=r6, r2*r6=2r3, r3*r6=3r2
        return QuadScalar(
            a * e + 2 * b * f + 3 * c * g + 6 * d * h,
            a * f + b * e + 3 * c * h + 3 * d * g,
            a * g + c * e + 2 * b * h + 2 * d * f,
            a * h + d * e + b * g + c * f,
        )

    __rmul__ = __mul__

    def _conj(self, flip2: bool, flip3: bool) -> QuadScalar:
        b = -self.b if flip2 else self.b
        c = -self.c if flip3 else self.c
        d = -self.d if flip2 != flip3 else self.d
        return QuadScalar(self.a, b, c, d)

    def inverse(self) -> QuadScalar:
        if not self:
            raise ZeroDivisionError("inverse of zero")
        other = self._conj(True, False) * self._conj(False, True) * self._conj(True, True)
        norm = (self * other).a
        return other * (1 / norm)

    def __truediv__(self, other: Number) -> QuadScalar:
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * QuadScalar.coerce(other).inverse()

    def __rtruediv__(self, other: Number) -> QuadScalar:
        return QuadScalar.coerce(other) * self.inverse()

    def is_rational(self) -> bool:
        return self.b == 0 and self.c == 0 and self.d == 0

    def sign(self) -> int:
        """Exact sign as a real number."""
        # self = p + q*sqrt3 with p = a + b r2, q = c + d r2
        sp = _sign_q2(self.a, self.b)
        sq = _sign_q2(self.c, self.d)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        # compare p^2 with 3 q^2, both in Q(sqrt2)
        p2 = (self.a * self.a + 2 * self.b * self.b, 2 * self.a * self.b)
        q2 = (self.c * self.c + 2 * self.d * self.d, 2 * self.c * self.d)
        big = _sign_q2(p2[0] - 3 * q2[0], p2[1] - 3 * q2[1])
        return big * sp

    def __repr__(self) -> str:
        parts = []
        for coef, name in ((self.a, ""), (self.b, "r2"), (self.c, "r3"), (self.d, "r6")):
            if coef:
                parts.append(f"{coef}{'*' + name if name else ''}")
        return "QuadScalar(" + (" + ".join(parts) or "0") + ")"

    def __str__(self) -> str:
        parts = []
        for coef, name in ((self.a, ""), (self.b, "sqrt2"), (self.c, "sqrt3"), (self.d, "sqrt6")):
            if coef:
                body = str(coef) if not name else (name if abs(coef) == 1 else f"{abs(coef)}*{name}")
                sign = "-" if coef < 0 else "+"
                parts.append((sign, body.lstrip("-")))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


ZERO = QuadScalar(0)
ONE = QuadScalar(1)
HALF = Fraction(1, 2)


def neg_cos_pi_over(m: int) -> QuadScalar:
    """-cos(pi/m) for supported bonds; m = 0 encodes infinity (value -1)."""
    if m == 0:
        return QuadScalar(-1)
    if m == 1:
        return QuadScalar(1)
    if m == 2:
        return QuadScalar(0)
    if m == 3:
        return QuadScalar(-HALF)
    if m == 4:
        return QuadScalar(0, -HALF)
    if m == 6:
        return QuadScalar(0, 0, -HALF)
    raise ValueError(f"bond {m} not representable")
