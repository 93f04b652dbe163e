"""Finite Coxeter systems: roots, element tables and element arithmetic.

Elements are referred to by their index in the enumeration.  The enumeration
is ordered by length and ShortLex within a length, so index 0 is the identity
and the smallest index in any set is its ShortLex-least member.

An element is identified by the images of the simple roots (a tuple of root
indices).  Left multiplication by a generator only needs those images, which
is what drives the enumeration.
"""
from __future__ import annotations

import os
from collections import deque
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from ..errors import InfiniteOrTooLarge, ParseError, SystemMismatch
from .matrix import CoxeterMatrix, DiagramAutomorphism, parse_type
from .scalar import QuadScalar, neg_cos_pi_over

DEFAULT_ROOT_CAP = 250_000
DEFAULT_ELEMENT_CAP = 1_000_000
MULT_TABLE_LIMIT = 1200


def root_cap_from_env() -> int:
    raw = os.environ.get("COX_ROOT_CAP")
    if not raw:
        return DEFAULT_ROOT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ParseError(f"COX_ROOT_CAP must be an integer, got {raw!r}") from None
    if cap <= 0:
        raise ParseError("COX_ROOT_CAP must be positive")
    return cap


def mask_of(subset: Iterable[int]) -> int:
    m = 0
    for i in subset:
        m |= 1 << i
    return m


def members(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def format_word(word: Sequence[int]) -> str:
    """1-based comma separated word, 'e' for the identity."""
    return ",".join(str(i + 1) for i in word) if word else "e"


class CoxeterSystem:
    def __init__(self, matrix: CoxeterMatrix, twist: DiagramAutomorphism | None = None,
                 name: str = "custom", root_cap: int | None = None,
                 element_cap: int = DEFAULT_ELEMENT_CAP) -> None:
        self.matrix = matrix
        self.rank = matrix.rank
        self.name = name
        self.twist = twist if twist is not None else DiagramAutomorphism.identity(self.rank)
        self.twist.check(matrix)
        self.root_cap = root_cap if root_cap is not None else root_cap_from_env()
        self.element_cap = element_cap
        self._build_roots()

    # -- roots ---------------------------------------------------------------

    def _build_roots(self) -> None:
        n = self.rank
        gram = [[neg_cos_pi_over(self.matrix.m[i][j]) if i != j else QuadScalar(1)
                 for j in range(n)] for i in range(n)]
        self.gram = gram

        def reflect(i: int, v: tuple) -> tuple:
            coef = QuadScalar(0)
            for j in range(n):
                if v[j] and gram[i][j]:
                    coef = coef + gram[i][j] * v[j]
            if not coef:
                return v
            coef = coef * 2
            out = list(v)
            out[i] = out[i] - coef
            return tuple(out)

        simple = [tuple(QuadScalar(1 if j == i else 0) for j in range(n)) for i in range(n)]
        index = {v: k for k, v in enumerate(simple)}
        found = list(simple)
        queue = deque(range(n))
        while queue:
            k = queue.popleft()
            for i in range(n):
                img = reflect(i, found[k])
                if img not in index:
                    index[img] = len(found)
                    found.append(img)
                    if len(found) > self.root_cap:
                        raise InfiniteOrTooLarge(
                            f"root closure exceeded the cap of {self.root_cap} roots")
                    queue.append(len(found) - 1)

        def positive(v: tuple) -> bool:
            for x in v:
                s = x.sign()
                if s:
                    return s > 0
            raise AssertionError("zero root")

        pos = [v for v in found if positive(v)]
        npos = len(pos)
        roots = pos + [tuple(-x for x in v) for v in pos]
        if len(roots) != len(found):
            raise AssertionError("root set is not symmetric")
        self.roots: list[tuple[QuadScalar, ...]] = roots
        self.n_pos = npos
        ridx = {v: k for k, v in enumerate(roots)}
        self.gen_perm: list[tuple[int, ...]] = [
            tuple(ridx[reflect(i, v)] for v in roots) for i in range(n)]

    def negate_root(self, r: int) -> int:
        return r + self.n_pos if r < self.n_pos else r - self.n_pos

    def is_positive_root(self, r: int) -> bool:
        return r < self.n_pos

    # -- element table -------------------------------------------------------

    @cached_property
    def _table(self):
        n = self.rank
        gp = self.gen_perm
        start = tuple(range(n))
        index = {start: 0}
        keys = [start]
        level = [0]
        frontier = [start]
        lev = 0
        while frontier:
            lev += 1
            nxt = []
            for key in frontier:
                for i in range(n):
                    g = gp[i]
                    new = tuple(g[r] for r in key)
                    if new not in index:
                        index[new] = len(keys)
                        keys.append(new)
                        level.append(lev)
                        nxt.append(new)
                        if len(keys) > self.element_cap:
                            raise InfiniteOrTooLarge(
                                f"group order exceeds the element cap of {self.element_cap}")
            frontier = nxt
        size = len(keys)
        # left multiplication tables on the raw enumeration
        lm = [[index[tuple(gp[i][r] for r in key)] for key in keys] for i in range(n)]
        # canonical words: smallest left descent first, recursively
        words: list[tuple[int, ...] | None] = [None] * size
        words[0] = ()
        order_by_level = sorted(range(size), key=lambda k: level[k])
        for k in order_by_level[1:]:
            for i in range(n):
                j = lm[i][k]
                if level[j] < level[k]:
                    words[k] = (i,) + words[j]
                    break
        perm = sorted(range(size), key=lambda k: (level[k], words[k]))
        new_of = [0] * size
        for new, old in enumerate(perm):
            new_of[old] = new
        t_keys = [keys[old] for old in perm]
        t_len = [level[old] for old in perm]
        t_words = [words[old] for old in perm]
        t_lm = [[new_of[lm[i][old]] for old in perm] for i in range(n)]
        # inverse via reversed words
        inv = [0] * size
        for k in range(size):
            x = 0
            for i in t_words[k]:
                x = t_lm[i][x]
            inv[k] = x
        t_rm = [[inv[t_lm[i][inv[k]]] for k in range(size)] for i in range(n)]
        return {"keys": t_keys, "len": t_len, "words": t_words, "L": t_lm,
                "R": t_rm, "inv": inv,
                "index": {key: k for k, key in enumerate(t_keys)}}

    @property
    def order(self) -> int:
        return len(self._table["keys"])

    def __len__(self) -> int:
        return self.order

    def elements(self) -> range:
        return range(self.order)

    @property
    def identity(self) -> int:
        return 0

    def length(self, w: int) -> int:
        return self._table["len"][w]

    def word(self, w: int) -> tuple[int, ...]:
        return self._table["words"][w]

    def key(self, w: int) -> tuple[int, ...]:
        return self._table["keys"][w]

    def lmul(self, i: int, w: int) -> int:
        return self._table["L"][i][w]

    def rmul(self, w: int, i: int) -> int:
        return self._table["R"][i][w]

    def inv(self, w: int) -> int:
        return self._table["inv"][w]

    @cached_property
    def _mult(self):
        if self.order > MULT_TABLE_LIMIT:
            return None
        R = self._table["R"]
        words = self._table["words"]
        size = self.order
        table = []
        for a in range(size):
            row = [0] * size
            for b in range(size):
                x = a
                for i in words[b]:
                    x = R[i][x]
                row[b] = x
            table.append(row)
        return table

    def mul(self, a: int, b: int) -> int:
        t = self._mult
        if t is not None:
            return t[a][b]
        if self.length(a) < self.length(b):
            L = self._table["L"]
            x = b
            for i in reversed(self._table["words"][a]):
                x = L[i][x]
            return x
        R = self._table["R"]
        x = a
        for i in self._table["words"][b]:
            x = R[i][x]
        return x

    def prod(self, *elts: int) -> int:
        x = 0
        for e in elts:
            x = self.mul(x, e)
        return x

    def from_word(self, word: Iterable[int]) -> int:
        R = self._table["R"]
        x = 0
        for i in word:
            if not 0 <= i < self.rank:
                raise ParseError(f"generator index {i + 1} out of range")
            x = R[i][x]
        return x

    def from_labels(self, labels: Iterable[int]) -> int:
        return self.from_word(i - 1 for i in labels)

    def parse_word(self, text: str) -> int:
        text = text.strip()
        if text in ("", "e"):
            return 0
        try:
            labels = [int(t) for t in text.replace(" ", "").split(",") if t]
        except ValueError:
            raise ParseError(f"bad element {text!r}") from None
        return self.from_labels(labels)

    def format(self, w: int) -> str:
        return format_word(self.word(w))

    def gen(self, i: int) -> int:
        return self._table["L"][i][0]

    # -- descents, support, roots -------------------------------------------

    def right_descents(self, w: int) -> frozenset[int]:
        key = self.key(w)
        return frozenset(i for i in range(self.rank) if key[i] >= self.n_pos)

    def left_descents(self, w: int) -> frozenset[int]:
        return self.right_descents(self.inv(w))

    def is_right_descent(self, w: int, i: int) -> bool:
        return self.key(w)[i] >= self.n_pos

    def is_left_descent(self, i: int, w: int) -> bool:
        return self.key(self.inv(w))[i] >= self.n_pos

    def length_and_descents(self, w: int) -> tuple[int, frozenset[int], frozenset[int]]:
        return self.length(w), self.left_descents(w), self.right_descents(w)

    def support(self, w: int) -> frozenset[int]:
        return frozenset(self.word(w))

    def support_sigma(self, w: int, sigma: DiagramAutomorphism | None = None) -> frozenset[int]:
        sigma = sigma or self.twist
        return sigma.closure(self.support(w))

    def in_parabolic(self, w: int, J: Iterable[int]) -> bool:
        return self.support(w) <= frozenset(J)

    def root_action(self, w: int) -> tuple[int, ...]:
        """Full permutation of root indices induced by w."""
        perm = list(range(len(self.roots)))
        for i in reversed(self.word(w)):
            g = self.gen_perm[i]
            perm = [g[r] for r in perm]
        return tuple(perm)

    def inversion_count(self, w: int) -> int:
        act = self.root_action(w)
        return sum(1 for r in range(self.n_pos) if act[r] >= self.n_pos)

    def conj_simple(self, w: int, j: int) -> int | None:
        """k with w s_j w^-1 = s_k, or None if that reflection is not simple."""
        r = self.key(w)[j]
        if r >= self.n_pos:
            r -= self.n_pos
        return r if r < self.rank else None

    def ad(self, w: int, K: Iterable[int]) -> frozenset[int]:
        """Images k of j in K for which w s_j w^-1 = s_k (others dropped)."""
        out = []
        for j in K:
            k = self.conj_simple(w, j)
            if k is not None:
                out.append(k)
        return frozenset(out)

    def ad_total(self, w: int, K: Iterable[int]) -> frozenset[int] | None:
        """Like ad, but None unless every j in K is sent to a simple reflection."""
        out = []
        for j in K:
            k = self.conj_simple(w, j)
            if k is None:
                return None
            out.append(k)
        return frozenset(out)

    def matrix_of(self, w: int, sigma: DiagramAutomorphism | None = None):
        """Matrix of w o sigma on V in the simple-root basis (list of rows)."""
        n = self.rank
        key = self.key(w)
        cols = [self.roots[key[sigma.perm[j] if sigma else j]] for j in range(n)]
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    # -- automorphisms -------------------------------------------------------

    def automorphism_table(self, sigma: DiagramAutomorphism) -> tuple[int, ...]:
        return self._aut_table(sigma.perm)

    @lru_cache(maxsize=None)
    def _aut_table(self, perm: tuple[int, ...]) -> tuple[int, ...]:
        DiagramAutomorphism(perm).check(self.matrix)
        return tuple(self.from_word(perm[i] for i in self.word(w)) for w in self.elements())

    def apply_automorphism(self, sigma: DiagramAutomorphism, w: int) -> int:
        if sigma.is_identity():
            return w
        return self._aut_table(sigma.perm)[w]

    # -- parabolic machinery ------------------------------------------------

    def coset_min_right(self, w: int, J: Iterable[int]) -> int:
        """Minimal element of w W_J."""
        J = tuple(J)
        R = self._table["R"]
        ln = self._table["len"]
        changed = True
        while changed:
            changed = False
            for j in J:
                x = R[j][w]
                if ln[x] < ln[w]:
                    w = x
                    changed = True
        return w

    def coset_min_left(self, w: int, J: Iterable[int]) -> int:
        """Minimal element of W_J w."""
        J = tuple(J)
        L = self._table["L"]
        ln = self._table["len"]
        changed = True
        while changed:
            changed = False
            for j in J:
                x = L[j][w]
                if ln[x] < ln[w]:
                    w = x
                    changed = True
        return w

    def is_min_right(self, w: int, J: Iterable[int]) -> bool:
        """w in W^J (no right descent in J)."""
        key = self.key(w)
        return all(key[j] < self.n_pos for j in J)

    def is_min_left(self, w: int, J: Iterable[int]) -> bool:
        """w in ^J W (no left descent in J)."""
        return self.is_min_right(self.inv(w), J)

    def parabolic_decompose(self, w: int, J: Iterable[int], side: str = "right") -> tuple[int, int]:
        """side='right': w = x*y with x in W^J, y in W_J.  side='left': w = y*x
        with y in W_J, x in ^J W.  Returns (x, y) in both cases."""
        if side == "right":
            x = self.coset_min_right(w, J)
            return x, self.mul(self.inv(x), w)
        if side == "left":
            x = self.coset_min_left(w, J)
            return x, self.mul(w, self.inv(x))
        raise ValueError("side must be 'left' or 'right'")

    @lru_cache(maxsize=None)
    def _parabolic(self, J: frozenset[int]) -> tuple[int, ...]:
        seen = {0}
        out = [0]
        queue = deque([0])
        while queue:
            w = queue.popleft()
            for j in J:
                x = self.rmul(w, j)
                if x not in seen:
                    seen.add(x)
                    out.append(x)
                    queue.append(x)
        return tuple(sorted(out))

    def parabolic_elements(self, J: Iterable[int]) -> tuple[int, ...]:
        return self._parabolic(frozenset(J))

    def longest_element(self, J: Iterable[int] | None = None) -> int:
        J = tuple(range(self.rank)) if J is None else tuple(J)
        w = 0
        grown = True
        while grown:
            grown = False
            for j in J:
                x = self.rmul(w, j)
                if self.length(x) > self.length(w):
                    w = x
                    grown = True
        return w

    # -- Bruhat order --------------------------------------------------------

    @lru_cache(maxsize=8192)
    def bruhat_interval(self, v: int) -> frozenset[int]:
        """{w : w <= v}, as all subword products of the canonical word of v."""
        reach = {0}
        for i in self.word(v):
            reach |= {self.rmul(x, i) for x in reach}
        return frozenset(reach)

    def bruhat_leq(self, w: int, v: int) -> bool:
        if self.length(w) > self.length(v):
            return False
        if w == v or w == 0:
            return True
        return w in self.bruhat_interval(v)

    def extremal_coset_element(self, u: int, w: int, mode: str = "min") -> int:
        """Unique minimal (or maximal) element of {v w : v <= u}.

        Peel a left descent s of u, solve for s*u, then compare y1 with s*y1.
        """
        if mode not in ("min", "max"):
            raise ValueError("mode must be 'min' or 'max'")
        if u == 0:
            return w
        s = min(self.left_descents(u))
        y1 = self.extremal_coset_element(self.lmul(s, u), w, mode)
        y2 = self.lmul(s, y1)
        if mode == "min":
            return y1 if self.length(y1) < self.length(y2) else y2
        return y1 if self.length(y1) > self.length(y2) else y2

    # -- misc ---------------------------------------------------------------

    @cached_property
    def generator_classes(self) -> tuple[frozenset[int], ...]:
        """Partition of generators into W-conjugacy classes of reflections."""
        seen: dict[int, int] = {}
        groups: dict[int, list[int]] = {}
        for i in range(self.rank):
            if self.gen(i) in seen:
                continue
            orbit = {self.gen(i)}
            queue = deque(orbit)
            while queue:
                x = queue.popleft()
                for k in range(self.rank):
                    y = self.mul(self.gen(k), self.rmul(x, k))
                    if y not in orbit:
                        orbit.add(y)
                        queue.append(y)
            groups[i] = []
            for j in range(self.rank):
                if self.gen(j) in orbit:
                    seen[self.gen(j)] = i
                    groups[i].append(j)
        return tuple(sorted((frozenset(g) for g in groups.values()), key=min))

    def element(self, w: int | Sequence[int] | str) -> GroupElement:
        if isinstance(w, str):
            return GroupElement(self, self.parse_word(w))
        if isinstance(w, int):
            return GroupElement(self, w)
        return GroupElement(self, self.from_word(w))

    def __repr__(self) -> str:
        return f"CoxeterSystem({self.name!r}, rank={self.rank})"


class GroupElement:
    """Value wrapper around an element index with operator support."""

    __slots__ = ("system", "index")

    def __init__(self, system: CoxeterSystem, index: int) -> None:
        self.system = system
        self.index = index

    def _same(self, other: GroupElement) -> None:
        if not isinstance(other, GroupElement) or other.system is not self.system:
            raise SystemMismatch("elements belong to different systems")

    def __mul__(self, other: GroupElement) -> GroupElement:
        self._same(other)
        return GroupElement(self.system, self.system.mul(self.index, other.index))

    def __pow__(self, k: int) -> GroupElement:
        base = self if k >= 0 else self.inverse()
        out = GroupElement(self.system, 0)
        for _ in range(abs(k)):
            out = out * base
        return out

    def inverse(self) -> GroupElement:
        return GroupElement(self.system, self.system.inv(self.index))

    @property
    def length(self) -> int:
        return self.system.length(self.index)

    @property
    def word(self) -> tuple[int, ...]:
        return self.system.word(self.index)

    @property
    def root_action(self) -> tuple[int, ...]:
        return self.system.root_action(self.index)

    def __le__(self, other: GroupElement) -> bool:
        """Bruhat order."""
        self._same(other)
        return self.system.bruhat_leq(self.index, other.index)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, GroupElement) and other.system is self.system
                and other.index == self.index)

    def __hash__(self) -> int:
        return hash((id(self.system), self.index))

    def __repr__(self) -> str:
        w = self.word
        return "e" if not w else "*".join(f"s{i + 1}" for i in w)


@lru_cache(maxsize=64)
def _cached_system(spec: str, root_cap: int) -> CoxeterSystem:
    matrix, twist, name = parse_type(spec)
    return CoxeterSystem(matrix, twist, name=name, root_cap=root_cap)


def build_system(spec: str | CoxeterMatrix, twist: DiagramAutomorphism | None = None,
                 root_cap: int | None = None) -> CoxeterSystem:
    """Build (and cache) the Coxeter system named by a type string or matrix."""
    cap = root_cap if root_cap is not None else root_cap_from_env()
    if isinstance(spec, CoxeterMatrix):
        return CoxeterSystem(spec, twist, root_cap=cap)
    return _cached_system(spec.strip(), cap)


def s_interval(a: int, b: int) -> tuple[int, ...]:
    """Word s_a s_(a-1) ... s_b in 1-based labels (empty when a < b), 0-based output."""
    if a < b:
        return ()
    return tuple(i - 1 for i in range(a, b - 1, -1))
