"""Coxeter matrices, diagram automorphisms and the type-string grammar.

Generators are indexed 0..n-1 internally.  Labels shown to users are 1-based
and follow the Bourbaki numbering of Dynkin diagrams.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from math import gcd

from ..errors import InvalidAutomorphism, ParseError, UnsupportedBond

INF = 0  # bond value encoding m = infinity
SUPPORTED_BONDS = frozenset({2, 3, 4, 6, INF})


@dataclass(frozen=True)
class CoxeterMatrix:
    rank: int
    m: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = self.rank
        if n < 1 or len(self.m) != n or any(len(row) != n for row in self.m):
            raise ParseError("Coxeter matrix must be square of size rank >= 1")
        for i in range(n):
            if self.m[i][i] != 1:
                raise ParseError("diagonal entries must be 1")
            for j in range(n):
                if i == j:
                    continue
                v = self.m[i][j]
                if v != self.m[j][i]:
                    raise ParseError("Coxeter matrix must be symmetric")
                if v == 1 or (v != INF and v < 2):
                    raise ParseError(f"invalid entry m[{i + 1}][{j + 1}] = {v}")
                if v not in SUPPORTED_BONDS:
                    raise UnsupportedBond(f"bond m = {v} is not supported")

    @staticmethod
    def from_rows(rows) -> CoxeterMatrix:
        return CoxeterMatrix(len(rows), tuple(tuple(int(x) for x in r) for r in rows))

    def block_sum(self, other: CoxeterMatrix) -> CoxeterMatrix:
        n, k = self.rank, other.rank
        rows = []
        for i in range(n + k):
            row = []
            for j in range(n + k):
                if i < n and j < n:
                    row.append(self.m[i][j])
                elif i >= n and j >= n:
                    row.append(other.m[i - n][j - n])
                else:
                    row.append(2)
            rows.append(tuple(row))
        return CoxeterMatrix(n + k, tuple(rows))


@dataclass(frozen=True)
class DiagramAutomorphism:
    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.perm) != list(range(len(self.perm))):
            raise InvalidAutomorphism(f"{self.perm} is not a permutation")

    @staticmethod
    def identity(rank: int) -> DiagramAutomorphism:
        return DiagramAutomorphism(tuple(range(rank)))

    def check(self, matrix: CoxeterMatrix) -> None:
        p = self.perm
        if len(p) != matrix.rank:
            raise InvalidAutomorphism("automorphism rank mismatch")
        for i in range(matrix.rank):
            for j in range(matrix.rank):
                if matrix.m[p[i]][p[j]] != matrix.m[i][j]:
                    raise InvalidAutomorphism(
                        f"permutation does not preserve m[{i + 1}][{j + 1}]")

    def __call__(self, i: int) -> int:
        return self.perm[i]

    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.perm))

    def compose(self, other: DiagramAutomorphism) -> DiagramAutomorphism:
        """self after other."""
        return DiagramAutomorphism(tuple(self.perm[other.perm[i]] for i in range(len(self.perm))))

    def inverse(self) -> DiagramAutomorphism:
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p] = i
        return DiagramAutomorphism(tuple(inv))

    def power(self, k: int) -> DiagramAutomorphism:
        out = DiagramAutomorphism.identity(len(self.perm))
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = base.compose(out)
        return out

    @property
    def order(self) -> int:
        seen = [False] * len(self.perm)
        o = 1
        for i in range(len(self.perm)):
            if seen[i]:
                continue
            c, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = self.perm[j]
                c += 1
            o = o * c // gcd(o, c)
        return o

    def orbit(self, i: int) -> list[int]:
        out = [i]
        j = self.perm[i]
        while j != i:
            out.append(j)
            j = self.perm[j]
        return out

    def closure(self, subset) -> frozenset[int]:
        out = set()
        for i in subset:
            out.update(self.orbit(i))
        return frozenset(out)

    def block_sum(self, other: DiagramAutomorphism) -> DiagramAutomorphism:
        n = len(self.perm)
        return DiagramAutomorphism(self.perm + tuple(n + p for p in other.perm))


# -- Dynkin diagrams, Bourbaki labelling (0-based edges) ---------------------

def _chain(n: int) -> dict[tuple[int, int], int]:
    return {(i, i + 1): 3 for i in range(n - 1)}


def _edges(family: str, n: int) -> dict[tuple[int, int], int]:
    if family == "A":
        if n < 1:
            raise ParseError("A_n needs n >= 1")
        return _chain(n)
    if family in ("B", "C"):
        if n < 2:
            raise ParseError(f"{family}_n needs n >= 2")
        e = _chain(n)
        e[(n - 2, n - 1)] = 4
        return e
    if family == "D":
        if n < 3:
            raise ParseError("D_n needs n >= 3")
        e = _chain(n - 1)
        e[(n - 3, n - 1)] = 3
        return e
    if family == "E":
        if n not in (6, 7, 8):
            raise ParseError("E_n needs n in {6, 7, 8}")
        e = {(0, 2): 3, (1, 3): 3}
        for i in range(2, n - 1):
            e[(i, i + 1)] = 3
        return e
    if family == "F":
        if n != 4:
            raise ParseError("F_n needs n = 4")
        return {(0, 1): 3, (1, 2): 4, (2, 3): 3}
    if family == "G":
        if n != 2:
            raise ParseError("G_n needs n = 2")
        return {(0, 1): 6}
    raise ParseError(f"unknown family {family!r}")


def finite_type_matrix(family: str, n: int) -> CoxeterMatrix:
    edges = _edges(family, n)
    rows = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    for (i, j), v in edges.items():
        rows[i][j] = rows[j][i] = v
    return CoxeterMatrix.from_rows(rows)


def _twist_perm(twist: int, family: str, n: int) -> tuple[int, ...]:
    ident = list(range(n))
    if twist == 2 and family == "A" and n >= 2:
        return tuple(n - 1 - i for i in ident)
    if twist == 2 and family == "D" and n >= 3:
        p = ident[:]
        p[n - 2], p[n - 1] = n - 1, n - 2
        return tuple(p)
    if twist == 3 and family == "D" and n == 4:
        # 1 -> 3 -> 4 -> 1, 2 fixed
        return (2, 1, 3, 0)
    if twist == 2 and family == "E" and n == 6:
        return (5, 1, 4, 3, 2, 0)
    if twist == 2 and family in ("B", "C", "G") and n == 2:
        return (1, 0)
    if twist == 2 and family == "F" and n == 4:
        return (3, 2, 1, 0)
    raise ParseError(f"no diagram automorphism of order {twist} for {family}{n}")


_COMPONENT = re.compile(r"^([23]?)([A-G])(\d+)$")


def parse_type(spec: str) -> tuple[CoxeterMatrix, DiagramAutomorphism, str]:
    """Parse "B3", "3D4", "A2xB2" or a JSON matrix object.

    Returns the matrix, the twist (identity when untwisted) and a display name.
    """
    text = spec.strip()
    if text.startswith("{"):
        return _parse_json(text)
    if not text:
        raise ParseError("empty type string")
    matrix = None
    twist = None
    for part in text.split("x"):
        mo = _COMPONENT.match(part.strip())
        if not mo:
            raise ParseError(f"cannot parse type component {part!r}")
        tw, fam, rk = mo.group(1), mo.group(2), int(mo.group(3))
        m = finite_type_matrix(fam, rk)
        sigma = (DiagramAutomorphism(_twist_perm(int(tw), fam, rk)) if tw
                 else DiagramAutomorphism.identity(rk))
        sigma.check(m)
        if matrix is None:
            matrix, twist = m, sigma
        else:
            matrix, twist = matrix.block_sum(m), twist.block_sum(sigma)
    return matrix, twist, text


def _bond(x) -> int:
    if x is None or (isinstance(x, str) and x.lower() in ("inf", "infinity", "oo")):
        return INF
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"bad matrix entry {x!r}")
    return x


def _parse_json(text: str) -> tuple[CoxeterMatrix, DiagramAutomorphism, str]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}") from None
    if not isinstance(obj, dict) or "m" not in obj:
        raise ParseError('explicit matrix must look like {"rank": n, "m": [[...]]}')
    rows = obj["m"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError("m must be a list of rows")
    n = obj.get("rank", len(rows))
    if n != len(rows):
        raise ParseError("rank does not match matrix size")
    matrix = CoxeterMatrix(n, tuple(tuple(_bond(x) for x in r) for r in rows))
    if "twist" in obj:
        sigma = DiagramAutomorphism(tuple(int(x) - 1 for x in obj["twist"]))
    else:
        sigma = DiagramAutomorphism.identity(n)
    sigma.check(matrix)
    return matrix, sigma, "custom"
