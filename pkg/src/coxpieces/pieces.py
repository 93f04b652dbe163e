"""Admissible triples, stable pieces of W1 x W2 and distinguished double cosets.

A pair (w1, w2) in W1 x W2 is encoded as the integer w1 * |W2| + w2, so the
natural order on codes is ShortLex on the first component, then the second.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .coxcore import CoxeterSystem, format_word
from .errors import (BadIsomorphism, InadmissibleTriple, InvalidSequence, NonStabilizing,
                     NotDistinguished, NotInMinimalCosetForm, OracleMismatch, SigmaNotInternal)
from .steps import ReductionChain, ReductionStep
from .verdict import Verdict

MAX_STEPS = 10_000


# ---------------------------------------------------------------------------
# admissible triples


@dataclass(frozen=True)
class AdmissibleTriple:
    """(J1, J2, delta) with delta: J1 -> J2 a bond-preserving bijection."""
    pairs: tuple[tuple[int, int], ...]

    @staticmethod
    def build(W1: CoxeterSystem, W2: CoxeterSystem,
              mapping: Mapping[int, int] | Iterable[tuple[int, int]]) -> AdmissibleTriple:
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        pairs = tuple(sorted((int(a), int(b)) for a, b in items))
        t = AdmissibleTriple(pairs)
        t.validate(W1, W2)
        return t

    @staticmethod
    def identity(J: Iterable[int]) -> AdmissibleTriple:
        return AdmissibleTriple(tuple((j, j) for j in sorted(J)))

    @cached_property
    def delta(self) -> dict[int, int]:
        return dict(self.pairs)

    @cached_property
    def delta_inv(self) -> dict[int, int]:
        return {b: a for a, b in self.pairs}

    @property
    def J1(self) -> frozenset[int]:
        return frozenset(self.delta)

    @property
    def J2(self) -> frozenset[int]:
        return frozenset(self.delta_inv)

    def validate(self, W1: CoxeterSystem, W2: CoxeterSystem) -> None:
        if len(self.delta) != len(self.pairs) or len(self.delta_inv) != len(self.pairs):
            raise BadIsomorphism("delta must be a bijection J1 -> J2")
        for a, b in self.pairs:
            if not (0 <= a < W1.rank and 0 <= b < W2.rank):
                raise InadmissibleTriple("generator index out of range")
        for (a, b), (c, d) in itertools.product(self.pairs, repeat=2):
            if W1.matrix.m[a][c] != W2.matrix.m[b][d]:
                raise BadIsomorphism(
                    f"delta does not preserve the bond between {a + 1} and {c + 1}")

    def inverse(self) -> AdmissibleTriple:
        return AdmissibleTriple(tuple(sorted((b, a) for a, b in self.pairs)))

    def image(self, K: Iterable[int]) -> frozenset[int]:
        """delta(K & J1)."""
        d = self.delta
        return frozenset(d[k] for k in K if k in d)

    def preimage(self, K: Iterable[int]) -> frozenset[int]:
        """delta^-1(K & J2)."""
        d = self.delta_inv
        return frozenset(d[k] for k in K if k in d)

    def apply(self, W_src: CoxeterSystem, W_dst: CoxeterSystem, x: int) -> int:
        """delta(x) for x in W_{J1}."""
        d = self.delta
        try:
            return W_dst.from_word(d[i] for i in W_src.word(x))
        except KeyError:
            raise InadmissibleTriple(
                f"{W_src.format(x)} is not in the parabolic subgroup of J1") from None

    def apply_inv(self, W_src: CoxeterSystem, W_dst: CoxeterSystem, x: int) -> int:
        """delta^-1(x) for x in W_{J2} (W_src is the system of J2)."""
        d = self.delta_inv
        try:
            return W_dst.from_word(d[i] for i in W_src.word(x))
        except KeyError:
            raise InadmissibleTriple(
                f"{W_src.format(x)} is not in the parabolic subgroup of J2") from None

    def to_json(self) -> dict:
        return {"J1": sorted(a + 1 for a, _ in self.pairs),
                "J2": sorted(b + 1 for _, b in self.pairs),
                "delta": {str(a + 1): b + 1 for a, b in self.pairs}}


def admissible_triples(W1: CoxeterSystem, W2: CoxeterSystem) -> list[AdmissibleTriple]:
    """Every admissible triple for W1 x W2."""
    out = []
    for k in range(min(W1.rank, W2.rank) + 1):
        for J1 in itertools.combinations(range(W1.rank), k):
            for img in itertools.permutations(range(W2.rank), k):
                t = AdmissibleTriple(tuple(zip(J1, img)))
                try:
                    t.validate(W1, W2)
                except InadmissibleTriple:
                    continue
                out.append(t)
    return out


# ---------------------------------------------------------------------------
# the setting W_{c'} \ (W1 x W2) / W_c


@dataclass
class State:
    n: int
    J1: frozenset[int]
    J2p: frozenset[int]
    w1: int
    w2: int
    u1: int | None = None
    u2: int | None = None
    v1: int | None = None
    v2: int | None = None

    def core(self) -> tuple:
        return (self.J1, self.J2p, self.w1, self.w2)

    def full(self) -> tuple:
        return (self.J1, self.J2p, self.w1, self.w2, self.u1, self.u2, self.v1, self.v2)


class PairSetting:
    """W1 x W2 with W_{c'} acting on the left and W_c on the right."""

    def __init__(self, W1: CoxeterSystem, W2: CoxeterSystem,
                 c: AdmissibleTriple, cp: AdmissibleTriple) -> None:
        c.validate(W1, W2)
        cp.validate(W1, W2)
        self.W1, self.W2, self.c, self.cp = W1, W2, c, cp
        self.n2 = W2.order

    # encoding
    def encode(self, a: int, b: int) -> int:
        return a * self.n2 + b

    def decode(self, p: int) -> tuple[int, int]:
        return divmod(p, self.n2)

    @property
    def size(self) -> int:
        return self.W1.order * self.n2

    def length(self, p: int) -> int:
        a, b = divmod(p, self.n2)
        return self.W1.length(a) + self.W2.length(b)

    def format(self, p: int) -> list[str]:
        a, b = divmod(p, self.n2)
        return [self.W1.format(a), self.W2.format(b)]

    # moves
    def left_move(self, i: int, p: int) -> int:
        a, b = divmod(p, self.n2)
        return self.encode(self.W1.lmul(i, a), self.W2.lmul(self.cp.delta[i], b))

    def right_move(self, j: int, p: int) -> int:
        a, b = divmod(p, self.n2)
        return self.encode(self.W1.rmul(a, j), self.W2.rmul(b, self.c.delta[j]))

    def moves(self) -> list[tuple[str, int]]:
        return ([("left", i) for i in sorted(self.cp.J1)]
                + [("right", j) for j in sorted(self.c.J1)])

    def apply_move(self, side: str, g: int, p: int) -> int:
        return self.left_move(g, p) if side == "left" else self.right_move(g, p)

    def product_leq(self, p: int, q: int) -> bool:
        a, b = divmod(p, self.n2)
        x, y = divmod(q, self.n2)
        return self.W1.bruhat_leq(a, x) and self.W2.bruhat_leq(b, y)

    # element-level helpers
    def is_index(self, w1: int, w2: int) -> bool:
        """(w1, w2) in ^{J'1}W1 x W2^{J2}."""
        return self.W1.is_min_left(w1, self.cp.J1) and self.W2.is_min_right(w2, self.c.J2)

    def piece_indices(self) -> list[tuple[int, int]]:
        W1, W2 = self.W1, self.W2
        left = [a for a in W1.elements() if W1.is_min_left(a, self.cp.J1)]
        right = [b for b in W2.elements() if W2.is_min_right(b, self.c.J2)]
        return [(a, b) for a in left for b in right]

    @cached_property
    def orbit_of(self) -> list[int]:
        """orbit_of[p] = ShortLex-least code in the double coset of p."""
        label = [-1] * self.size
        mv = self.moves()
        for start in range(self.size):
            if label[start] >= 0:
                continue
            label[start] = start
            queue = deque([start])
            while queue:
                p = queue.popleft()
                for side, g in mv:
                    q = self.apply_move(side, g, p)
                    if label[q] < 0:
                        label[q] = start
                        queue.append(q)
        return label

    @cached_property
    def orbits(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for p, r in enumerate(self.orbit_of):
            out.setdefault(r, []).append(p)
        return out

    def orbit_min(self, rep: int) -> list[int]:
        mem = self.orbits[self.orbit_of[rep]]
        m = min(self.length(p) for p in mem)
        return [p for p in mem if self.length(p) == m]


def product_setting(W: CoxeterSystem, mapping: Mapping[int, int]) -> PairSetting:
    """The encoding W x W with c = (J, J', delta), c' = (I, I, id).

    Pairs (w1, w2) correspond to w1^-1 w2 in W, and the double cosets to the
    orbits of x . y = x y delta(x)^-1 for x in W_J.
    """
    c = AdmissibleTriple.build(W, W, mapping)
    cp = AdmissibleTriple.identity(range(W.rank))
    return PairSetting(W, W, c, cp)


# ---------------------------------------------------------------------------
# the sequences T(c, c') and the bijection with piece indices


def psi_map(S: PairSetting, w1: int, w2: int) -> list[State]:
    """Stabilized sequence attached to (w1, w2) in ^{J'1}W1 x W2^{J2}.

    The returned list ends with the first state that the recursion repeats.
    """
    W1, W2, c, cp = S.W1, S.W2, S.c, S.cp
    if not S.is_index(w1, w2):
        raise NotInMinimalCosetForm(
            f"({W1.format(w1)}, {W2.format(w2)}) is not in ^J'1 W1 x W2^J2")
    states: list[State] = []
    J1n = c.J1
    for n in range(MAX_STEPS):
        if n > 0:
            prev = states[-1]
            J1n = c.preimage(W2.ad(W2.inv(prev.w2), prev.J2p) & c.J2)
        a = W1.coset_min_right(w1, J1n)
        J2n = cp.image(W1.ad(a, J1n) & cp.J1)
        b = W2.coset_min_left(w2, J2n)
        st = State(n, J1n, J2n, a, b)
        if states and states[-1].core() == st.core():
            return states
        states.append(st)
    raise NonStabilizing("psi recursion did not stabilize")


def check_sequence(S: PairSetting, states: list[State]) -> None:
    """Raise InvalidSequence unless the states satisfy the defining conditions
    and the last one is a fixed point of the recursion."""
    W1, W2, c, cp = S.W1, S.W2, S.c, S.cp
    if not states:
        raise InvalidSequence("empty sequence")
    for n, st in enumerate(states):
        if n == 0:
            J1n = c.J1
        else:
            pr = states[n - 1]
            J1n = c.preimage(W2.ad(W2.inv(pr.w2), pr.J2p) & c.J2)
        if st.J1 != J1n:
            raise InvalidSequence(f"J1 condition fails at step {n}")
        if st.J2p != cp.image(W1.ad(st.w1, st.J1) & cp.J1):
            raise InvalidSequence(f"J2' condition fails at step {n}")
        if not (W1.is_min_left(st.w1, cp.J1) and W1.is_min_right(st.w1, st.J1)):
            raise InvalidSequence(f"w1 is not a minimal double coset element at step {n}")
        if not (W2.is_min_left(st.w2, st.J2p) and W2.is_min_right(st.w2, c.J2)):
            raise InvalidSequence(f"w2 is not a minimal double coset element at step {n}")
        if n > 0:
            pr = states[n - 1]
            if not W1.in_parabolic(W1.mul(W1.inv(pr.w1), st.w1), pr.J1):
                raise InvalidSequence(f"w1 coset condition fails at step {n}")
            if not W2.in_parabolic(W2.mul(st.w2, W2.inv(pr.w2)), pr.J2p):
                raise InvalidSequence(f"w2 coset condition fails at step {n}")
    last = states[-1]
    J1n = c.preimage(W2.ad(W2.inv(last.w2), last.J2p) & c.J2)
    if J1n != last.J1 or cp.image(W1.ad(last.w1, J1n) & cp.J1) != last.J2p:
        raise InvalidSequence("sequence has not stabilized")


def phi_map(S: PairSetting, states: list[State]) -> tuple[int, int]:
    """(w1, w2) read off the stabilized end of a valid sequence."""
    check_sequence(S, states)
    return states[-1].w1, states[-1].w2


def all_sequences(S: PairSetting) -> list[list[State]]:
    """Every stabilized sequence satisfying the defining conditions, found by
    branching over all admissible choices at each step (no use of psi)."""
    W1, W2, c, cp = S.W1, S.W2, S.c, S.cp
    out: list[list[State]] = []

    def J2_of(a: int, J1n: frozenset[int]) -> frozenset[int]:
        return cp.image(W1.ad(a, J1n) & cp.J1)

    def extend(seq: list[State]) -> None:
        pr = seq[-1]
        J1n = c.preimage(W2.ad(W2.inv(pr.w2), pr.J2p) & c.J2)
        cands1 = [pr.w1 if not x else W1.mul(pr.w1, x) for x in W1.parabolic_elements(pr.J1)]
        for a in sorted(set(cands1)):
            if not (W1.is_min_left(a, cp.J1) and W1.is_min_right(a, J1n)):
                continue
            J2n = J2_of(a, J1n)
            cands2 = {W2.mul(x, pr.w2) for x in W2.parabolic_elements(pr.J2p)}
            for b in sorted(cands2):
                if not (W2.is_min_left(b, J2n) and W2.is_min_right(b, c.J2)):
                    continue
                st = State(len(seq), J1n, J2n, a, b)
                if st.core() == pr.core():
                    out.append(list(seq))
                elif len(seq) < MAX_STEPS:
                    extend(seq + [st])

    for a in W1.elements():
        if not (W1.is_min_left(a, cp.J1) and W1.is_min_right(a, c.J1)):
            continue
        J2n = J2_of(a, c.J1)
        for b in W2.elements():
            if W2.is_min_left(b, J2n) and W2.is_min_right(b, c.J2):
                extend([State(0, c.J1, J2n, a, b)])
    return out


# ---------------------------------------------------------------------------
# the subset I(w1, w2, c, c')


def compute_I_brute(S: PairSetting, w1: int, w2: int) -> frozenset[int]:
    """max{K in J1 : Ad(w1)K in J'1 and delta'(Ad(w1)K) = Ad(w2)(delta K)}."""
    W1, W2, c, cp = S.W1, S.W2, S.c, S.cp
    J1 = sorted(c.J1)
    good = []
    for r in range(len(J1) + 1):
        for K in itertools.combinations(J1, r):
            img1 = W1.ad_total(w1, K)
            if img1 is None or not img1 <= cp.J1:
                continue
            img2 = W2.ad_total(w2, c.image(K))
            if img2 is not None and cp.image(img1) == img2:
                good.append(frozenset(K))
    top = frozenset().union(*good)
    if top not in good:
        raise OracleMismatch("the admissible subsets have no maximum")
    return top


def compute_I(S: PairSetting, w1: int, w2: int) -> frozenset[int]:
    rec = psi_map(S, w1, w2)[-1].J1
    brute = compute_I_brute(S, w1, w2)
    if rec != brute:
        raise OracleMismatch(
            f"I({S.W1.format(w1)}, {S.W2.format(w2)}): recursion {sorted(rec)} "
            f"!= brute force {sorted(brute)}")
    return rec


def variant_sequence(S: PairSetting, w1: int, w2: int) -> list[State]:
    """The alternate recursion that starts from J2' and the W2 side."""
    W1, W2, c, cp = S.W1, S.W2, S.c, S.cp
    if not S.is_index(w1, w2):
        raise NotInMinimalCosetForm("pair is not a piece index")
    states: list[State] = []
    J2n = cp.J2
    for n in range(MAX_STEPS):
        if n > 0:
            pr = states[-1]
            J2n = cp.image(W1.ad(pr.w1, pr.J1) & cp.J1)
        b = W2.coset_min_left(w2, J2n)
        J1n = c.preimage(W2.ad(W2.inv(b), J2n) & c.J2)
        a = W1.coset_min_right(w1, J1n)
        st = State(n, J1n, J2n, a, b)
        if states and states[-1].core() == st.core():
            return states
        states.append(st)
    raise NonStabilizing("variant recursion did not stabilize")


def compute_I_variant(S: PairSetting, w1: int, w2: int) -> frozenset[int]:
    rec = variant_sequence(S, w1, w2)[-1].J1
    brute = compute_I_brute(S, w1, w2)
    if rec != brute:
        raise OracleMismatch(
            f"variant I({S.W1.format(w1)}, {S.W2.format(w2)}) = {sorted(rec)} "
            f"!= brute force {sorted(brute)}")
    return rec


# ---------------------------------------------------------------------------
# the projection pi


def pi_projection(S: PairSetting, a: int, b: int) -> tuple[tuple[int, int], ReductionChain]:
    """pi(a, b) and a non-increasing chain from (a, b) to (w1 v, w2)."""
    W1, W2, c, cp = S.W1, S.W2, S.c, S.cp
    chain = ReductionChain(S.encode(a, b))
    pos = [a, b]

    def push(side: str, g: int) -> None:
        before = S.encode(*pos)
        after = S.apply_move(side, g, before)
        chain.steps.append(ReductionStep(side, g, before, after,
                                         S.length(before), S.length(after)))
        pos[0], pos[1] = S.decode(after)

    def move_left_by(v1: int) -> None:
        # pos = (v1 u1, t) -> (u1, delta'(v1)^-1 t)
        for i in W1.word(v1):
            push("left", i)

    def move_right_by(v2: int) -> None:
        # pos = (s, u2 v2) -> (s delta^-1(v2)^-1, u2)
        for k in reversed(W2.word(v2)):
            push("right", c.delta_inv[k])

    seen: set[tuple] = set()
    prev: State | None = None
    for n in range(MAX_STEPS):
        if prev is None:
            J1n = c.J1
            base1 = a
        else:
            J1n = c.preimage(W2.ad(W2.inv(prev.w2), prev.J2p) & c.J2)
            base1 = W1.mul(prev.u1, W1.inv(c.apply_inv(W2, W1, prev.v2)))
        u1 = W1.coset_min_left(base1, cp.J1)
        w1n = W1.coset_min_right(u1, J1n)
        v1 = W1.mul(base1, W1.inv(u1))
        J2n = cp.image(W1.ad(w1n, J1n) & cp.J1)
        base2 = W2.mul(W2.inv(cp.apply(W1, W2, v1)), b if prev is None else prev.u2)
        u2 = W2.coset_min_right(base2, c.J2)
        w2n = W2.coset_min_left(u2, J2n)
        v2 = W2.mul(W2.inv(u2), base2)
        st = State(n, J1n, J2n, w1n, w2n, u1, u2, v1, v2)
        move_left_by(v1)
        move_right_by(v2)
        if (prev is not None and prev.core() == st.core()
                and u1 == w1n and u2 == w2n):
            return (w1n, w2n), chain
        key = st.full()
        if key in seen:
            raise NonStabilizing("extended recursion cycled before reaching the piece index")
        seen.add(key)
        prev = st
    raise NonStabilizing("extended recursion did not stabilize")


# ---------------------------------------------------------------------------
# decompositions


@dataclass
class Piece:
    w1: int
    w2: int
    I: frozenset[int]
    members: list[int]
    orbits: list[int] = field(default_factory=list)  # orbit representatives


def _closed_form_piece(S: PairSetting, w1: int, w2: int, I: frozenset[int]) -> set[int]:
    reps = {S.encode(S.W1.mul(w1, v), w2) for v in S.W1.parabolic_elements(I)}
    orb = S.orbit_of
    roots = {orb[p] for p in reps}
    out: set[int] = set()
    for r in roots:
        out.update(S.orbits[r])
    return out


def decompose_pieces(S: PairSetting) -> list[Piece]:
    """Pieces of W1 x W2, from the fibers of pi and from the closed form."""
    fibers: dict[tuple[int, int], list[int]] = {}
    for p in range(S.size):
        idx, _ = pi_projection(S, *S.decode(p))
        fibers.setdefault(idx, []).append(p)
    out = []
    covered = 0
    for w1, w2 in S.piece_indices():
        I = compute_I(S, w1, w2)
        closed = _closed_form_piece(S, w1, w2, I)
        fib = fibers.get((w1, w2), [])
        if set(fib) != closed:
            raise OracleMismatch(
                f"piece of ({S.W1.format(w1)}, {S.W2.format(w2)}): pi fiber has "
                f"{len(fib)} pairs, closed form {len(closed)}")
        covered += len(fib)
        orbit_reps = sorted({S.orbit_of[p] for p in fib})
        out.append(Piece(w1, w2, I, sorted(fib), orbit_reps))
    if covered != S.size or len(fibers) != len(out):
        raise OracleMismatch("pieces do not partition W1 x W2")
    return out


@dataclass
class OrbitPiece:
    w: int
    I: frozenset[int]
    members: list[int]
    orbits: list[list[int]]


def twisted_orbits(W: CoxeterSystem, mapping: Mapping[int, int]) -> list[list[int]]:
    """Orbits of x . y = x y delta(x)^-1 (x in W_J) on W, each sorted."""
    label = [-1] * W.order
    out = []
    for start in W.elements():
        if label[start] >= 0:
            continue
        label[start] = start
        orb = [start]
        queue = deque([start])
        while queue:
            y = queue.popleft()
            for j, k in mapping.items():
                z = W.rmul(W.lmul(j, y), k)
                if label[z] < 0:
                    label[z] = start
                    orb.append(z)
                    queue.append(z)
        out.append(sorted(orb))
    return out


def orbit_piece_I(W: CoxeterSystem, mapping: Mapping[int, int], w: int) -> frozenset[int]:
    """max{K in J' : Ad(w)K in J and delta(Ad(w)K) = K}."""
    Jp = sorted(set(mapping.values()))
    good = []
    for r in range(len(Jp) + 1):
        for K in itertools.combinations(Jp, r):
            img = W.ad_total(w, K)
            if img is None or not all(k in mapping for k in img):
                continue
            if frozenset(mapping[k] for k in img) == frozenset(K):
                good.append(frozenset(K))
    top = frozenset().union(*good)
    if top not in good:
        raise OracleMismatch("no maximal subset")
    return top


def wj_orbit_decomposition(W: CoxeterSystem, mapping: Mapping[int, int]) -> list[OrbitPiece]:
    """Pieces [w, delta] of W under x . y = x y delta(x)^-1, w in W^{J'}.

    Each piece is W_J . (w W_{I(w, delta)}); it is cross-checked against the
    product encoding (w1, w2) -> w1^-1 w2 and its pi fibers.
    """
    AdmissibleTriple.build(W, W, mapping)
    J = frozenset(mapping)
    Jp = frozenset(mapping.values())
    orbits = twisted_orbits(W, mapping)
    orbit_id = {}
    for k, orb in enumerate(orbits):
        for y in orb:
            orbit_id[y] = k
    S = product_setting(W, mapping)
    pieces = {(e, w): p for p in decompose_pieces(S) for e, w in [(p.w1, p.w2)]}
    out = []
    for w in W.elements():
        if not W.is_min_right(w, Jp):
            continue
        I = orbit_piece_I(W, mapping, w)
        ids = sorted({orbit_id[W.mul(w, v)] for v in W.parabolic_elements(I)})
        mem = sorted(y for k in ids for y in orbits[k])
        pp = pieces.get((0, w))
        if pp is None:
            raise OracleMismatch(f"no product piece for {W.format(w)}")
        via_pairs = sorted({W.mul(W.inv(a), b) for a, b in map(S.decode, pp.members)})
        if via_pairs != mem:
            raise OracleMismatch(f"piece [{W.format(w)}] disagrees with the product encoding")
        if pp.I != frozenset(mapping_inv(mapping)[k] for k in I):
            raise OracleMismatch(f"I-set of [{W.format(w)}] disagrees with the product encoding")
        out.append(OrbitPiece(w, I, mem, [orbits[k] for k in ids]))
    if sum(len(p.members) for p in out) != W.order:
        raise OracleMismatch("pieces do not partition W")
    del J
    return out


def mapping_inv(mapping: Mapping[int, int]) -> dict[int, int]:
    return {b: a for a, b in mapping.items()}


# ---------------------------------------------------------------------------
# twisted classes of W_I and the double cosets in a piece


def piece_class_bijection(S: PairSetting, w1: int, w2: int):
    """The automorphism sigma of W_I and the class <-> double coset matching.

    Returns (sigma as dict on I, list of (class members in W1, orbit rep)).
    """
    W1, W2, c, cp = S.W1, S.W2, S.c, S.cp
    I = compute_I(S, w1, w2)
    w1i, w2i = W1.inv(w1), W2.inv(w2)
    sigma: dict[int, int] = {}
    for i in sorted(I):
        x = W1.prod(w1, W1.gen(i), w1i)
        if not W1.in_parabolic(x, cp.J1):
            raise SigmaNotInternal(f"conjugate of s{i + 1} leaves W_J'1")
        z = W2.prod(w2i, cp.apply(W1, W2, x), w2)
        if not W2.in_parabolic(z, c.J2):
            raise SigmaNotInternal(f"image of s{i + 1} leaves W_J2")
        t = c.apply_inv(W2, W1, z)
        if W1.length(t) != 1 or W1.word(t)[0] not in I:
            raise SigmaNotInternal(f"image of s{i + 1} is not a generator of W_I")
        sigma[i] = W1.word(t)[0]
    if sorted(sigma.values()) != sorted(I):
        raise SigmaNotInternal("sigma is not a permutation of I")
    for i, j in itertools.product(I, repeat=2):
        if W1.matrix.m[i][j] != W1.matrix.m[sigma[i]][sigma[j]]:
            raise SigmaNotInternal("sigma does not preserve bonds")
    classes = twisted_orbits_sub(W1, I, sigma)
    result = []
    hit = set()
    for cl in classes:
        ids = {S.orbit_of[S.encode(W1.mul(w1, v), w2)] for v in cl}
        if len(ids) != 1:
            raise OracleMismatch("a twisted class meets several double cosets")
        (oid,) = ids
        if oid in hit:
            raise OracleMismatch("two twisted classes meet the same double coset")
        hit.add(oid)
        result.append((cl, oid))
    piece = _closed_form_piece(S, w1, w2, I)
    if hit != {S.orbit_of[p] for p in piece}:
        raise OracleMismatch("class correspondence is not onto the piece")
    return sigma, result


def twisted_orbits_sub(W: CoxeterSystem, I: Iterable[int], sigma: Mapping[int, int]) -> list[list[int]]:
    """sigma-twisted classes of the parabolic subgroup W_I."""
    elems = W.parabolic_elements(I)
    label: dict[int, int] = {}
    out = []
    for start in elems:
        if start in label:
            continue
        label[start] = start
        orb = [start]
        queue = deque([start])
        while queue:
            y = queue.popleft()
            for i, k in sigma.items():
                z = W.rmul(W.lmul(i, y), k)
                if z not in label:
                    label[z] = start
                    orb.append(z)
                    queue.append(z)
        out.append(sorted(orb))
    return out


# ---------------------------------------------------------------------------
# distinguished double cosets


def stabilizing_subgroup(S: PairSetting, w1: int, w2: int) -> frozenset[int]:
    """All v in W_{J1} whose orbit under delta^-1 Ad(w2)^-1 delta' Ad(w1) stays defined."""
    W1, W2, c, cp = S.W1, S.W2, S.c, S.cp
    w1i, w2i = W1.inv(w1), W2.inv(w2)
    out = []
    for v in W1.parabolic_elements(c.J1):
        x, seen, ok = v, set(), True
        while x not in seen:
            seen.add(x)
            y = W1.prod(w1, x, w1i)
            if not W1.in_parabolic(y, cp.J1):
                ok = False
                break
            z = W2.prod(w2i, cp.apply(W1, W2, y), w2)
            if not W2.in_parabolic(z, c.J2):
                ok = False
                break
            x = c.apply_inv(W2, W1, z)
        if ok:
            out.append(v)
    return frozenset(out)


@dataclass
class DistinguishedReport:
    orbits: list[int]
    distinguished: dict[int, bool]
    verdicts: list[Verdict]

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)


def distinguished_analysis(S: PairSetting, scope: str = "") -> DistinguishedReport:
    W1, W2, c, cp = S.W1, S.W2, S.c, S.cp
    orbit_of = S.orbit_of
    reps = sorted(S.orbits)
    canon: dict[int, list[int]] = {r: [] for r in reps}
    for a, b in S.piece_indices():
        p = S.encode(a, b)
        canon[orbit_of[p]].append(p)
    dist = {r: bool(canon[r]) for r in reps}
    verdicts = []

    # at most one piece index per double coset
    bad = [r for r in reps if len(canon[r]) > 1]
    verdicts.append(Verdict("unique-index", scope, not bad,
                            counterexample=[S.format(p) for p in canon[bad[0]]] if bad else None))

    # pairs from W1^{J1} x ^{J'2}W2 are minimal in distinguished cosets
    bad43 = None
    mins = {r: set(S.orbit_min(r)) for r in reps}
    for a in W1.elements():
        if not W1.is_min_right(a, c.J1):
            continue
        for b in W2.elements():
            if not W2.is_min_left(b, cp.J2):
                continue
            p = S.encode(a, b)
            r = orbit_of[p]
            if not dist[r] or p not in mins[r]:
                bad43 = S.format(p)
                break
        if bad43:
            break
    verdicts.append(Verdict("opposite-pairs-distinguished", scope, bad43 is None,
                            counterexample=bad43))

    # W(w1, w2) = W_I on piece indices, and the mirrored statement
    bad41 = None
    Sinv = PairSetting(W2, W1, c.inverse(), cp.inverse())
    for a, b in S.piece_indices():
        I = compute_I(S, a, b)
        if stabilizing_subgroup(S, a, b) != frozenset(W1.parabolic_elements(I)):
            bad41 = {"pair": S.format(S.encode(a, b)), "I": sorted(i + 1 for i in I)}
            break
    if bad41 is None:
        for a in W1.elements():
            if not W1.is_min_right(a, c.J1):
                continue
            for b in W2.elements():
                if not W2.is_min_left(b, cp.J2):
                    continue
                K = c.preimage(compute_I_brute(Sinv, b, a))
                if stabilizing_subgroup(S, a, b) != frozenset(W1.parabolic_elements(K)):
                    bad41 = {"mirror pair": S.format(S.encode(a, b))}
                    break
            if bad41:
                break
    verdicts.append(Verdict("stable-subgroup", scope, bad41 is None, counterexample=bad41))

    # minimal length = Bruhat-minimal in distinguished cosets
    bad45 = None
    for r in reps:
        if not dist[r]:
            continue
        mem = S.orbits[r]
        bmin = {p for p in mem if not any(q != p and S.product_leq(q, p) for q in mem)}
        if bmin != mins[r]:
            bad45 = S.format(r)
            break
    verdicts.append(Verdict("min-equals-bruhat-min", scope, bad45 is None, counterexample=bad45))

    # monotone lifting along single reduction steps
    bad44 = None
    moves = S.moves()
    for r in reps:
        for p in mins[r]:
            for q in range(S.size):
                if not S.product_leq(p, q):
                    continue
                for side, g in moves:
                    q1 = S.apply_move(side, g, q)
                    if S.length(q) > S.length(q1):
                        continue
                    if not any(S.product_leq(m, q1) for m in mins[r]):
                        bad44 = {"min": S.format(p), "upper": S.format(q), "pred": S.format(q1)}
                        break
                if bad44:
                    break
            if bad44:
                break
        if bad44:
            break
    verdicts.append(Verdict("monotone-lifting", scope, bad44 is None, counterexample=bad44))

    # the order on distinguished cosets: some <=> any, partial order axioms
    dreps = [r for r in reps if dist[r]]
    rel = {}
    bad46 = None
    for r in dreps:
        for s in dreps:
            try:
                rel[(r, s)] = coset_partial_order(S, r, s)
            except OracleMismatch as exc:
                bad46 = {"cosets": [S.format(r), S.format(s)], "error": str(exc)}
                rel[(r, s)] = False
    if bad46 is None:
        for r in dreps:
            if not rel[(r, r)]:
                bad46 = {"not reflexive": S.format(r)}
        for r, s in itertools.combinations(dreps, 2):
            if rel[(r, s)] and rel[(s, r)]:
                bad46 = {"not antisymmetric": [S.format(r), S.format(s)]}
        for r, s, t in itertools.product(dreps, repeat=3):
            if rel[(r, s)] and rel[(s, t)] and not rel[(r, t)]:
                bad46 = {"not transitive": [S.format(r), S.format(s), S.format(t)]}
                break
    verdicts.append(Verdict("coset-order", scope, bad46 is None, counterexample=bad46,
                            details={"relations": sum(rel.values())}))
    return DistinguishedReport(reps, dist, verdicts)


def coset_partial_order(S: PairSetting, O: int, Op: int) -> bool:
    """O <= O' for distinguished double cosets given by any member codes.

    Evaluates the defining condition at every minimal element of O' and
    raises OracleMismatch if the answers differ.
    """
    orbit_of = S.orbit_of
    r, rp = orbit_of[O], orbit_of[Op]
    for x in (r, rp):
        if not any(S.is_index(*S.decode(p)) for p in S.orbits[x]):
            raise NotDistinguished(f"double coset of {S.format(x)} is not distinguished")
    mins, minsp = S.orbit_min(r), S.orbit_min(rp)
    answers = {any(S.product_leq(m, q) for m in mins) for q in minsp}
    if len(answers) != 1:
        raise OracleMismatch("the order depends on the chosen minimal element")
    return answers.pop()


def piece_report(S: PairSetting, pieces: list[Piece]) -> dict:
    out = []
    for p in pieces:
        out.append({
            "w1": S.W1.format(p.w1), "w2": S.W2.format(p.w2),
            "I": sorted(i + 1 for i in p.I), "size": len(p.members),
            "orbits": [[S.format(q) for q in S.orbits[r]] for r in p.orbits],
        })
    return {"triple": {"c": S.c.to_json(), "c_prime": S.cp.to_json()}, "pieces": out}


def wj_report(W: CoxeterSystem, mapping: Mapping[int, int], pieces: list[OrbitPiece]) -> dict:
    out = []
    for p in pieces:
        out.append({"w1": "e", "w2": W.format(p.w), "I": sorted(i + 1 for i in p.I),
                    "size": len(p.members),
                    "orbits": [[W.format(y) for y in orb] for orb in p.orbits]})
    return {"triple": {"J": sorted(j + 1 for j in mapping),
                       "Jp": sorted(k + 1 for k in mapping.values()),
                       "delta": {str(j + 1): k + 1 for j, k in sorted(mapping.items())}},
            "pieces": out}


# ---------------------------------------------------------------------------
# exhaustive checks


def _verdict_from(check: str, scope: str, fn) -> Verdict:
    try:
        details = fn() or {}
        return Verdict(check, scope, True, details=details)
    except (OracleMismatch, InvalidSequence, NonStabilizing, NotInMinimalCosetForm,
            SigmaNotInternal) as exc:
        return Verdict(check, scope, False, counterexample=str(exc))


def verify_sequences(S: PairSetting, scope: str = "") -> list[Verdict]:
    """Round trips between piece indices and stabilized sequences, and the
    recursive, variant and brute-force I-sets."""
    idx = S.piece_indices()

    def phi_psi():
        for w1, w2 in idx:
            if phi_map(S, psi_map(S, w1, w2)) != (w1, w2):
                raise OracleMismatch(f"phi(psi({S.format(S.encode(w1, w2))})) differs")
        return {"indices": len(idx)}

    def psi_phi():
        seqs = all_sequences(S)
        keys = {tuple(st.core() for st in seq) for seq in seqs}
        if len(seqs) != len(idx) or len(keys) != len(seqs):
            raise OracleMismatch(f"{len(seqs)} sequences for {len(idx)} indices")
        for seq in seqs:
            w1, w2 = phi_map(S, seq)
            if [st.core() for st in psi_map(S, w1, w2)] != [st.core() for st in seq]:
                raise OracleMismatch("psi(phi(T)) differs from T")
        return {"sequences": len(seqs)}

    def i_sets():
        for w1, w2 in idx:
            compute_I(S, w1, w2)
        return {"indices": len(idx)}

    def variant():
        for w1, w2 in idx:
            compute_I_variant(S, w1, w2)
        return {"indices": len(idx)}

    return [_verdict_from("phi-psi-identity", scope, phi_psi),
            _verdict_from("psi-phi-identity", scope, psi_phi),
            _verdict_from("recursive-I-matches-brute", scope, i_sets),
            _verdict_from("variant-I-matches-brute", scope, variant)]


def verify_pieces(S: PairSetting, scope: str = "") -> list[Verdict]:
    """Projection fibers equal the closed-form pieces, and in each piece the
    twisted classes of W_I match the double cosets one to one."""
    out = [_verdict_from("fibers-equal-closed-form", scope,
                         lambda: {"pieces": len(decompose_pieces(S))})]

    def bijection():
        sizes = []
        for w1, w2 in S.piece_indices():
            _, pairs = piece_class_bijection(S, w1, w2)
            sizes.append(len(pairs))
        return {"classes_per_piece": sizes}

    out.append(_verdict_from("class-coset-bijection", scope, bijection))
    return out


def verify_orbit_pieces(W: CoxeterSystem, mapping: Mapping[int, int], scope: str = "") -> list[Verdict]:
    """Pieces of the W_J-action on W agree with the product encoding and partition W."""
    S = product_setting(W, mapping)
    out = [_verdict_from("orbit-pieces-partition", scope,
                         lambda: {"pieces": len(wj_orbit_decomposition(W, mapping))})]
    return out + verify_pieces(S, scope)


__all__ = [
    "AdmissibleTriple", "admissible_triples", "PairSetting", "State", "product_setting",
    "psi_map", "phi_map", "check_sequence", "all_sequences", "compute_I", "compute_I_brute",
    "compute_I_variant", "variant_sequence", "pi_projection", "Piece", "decompose_pieces",
    "OrbitPiece", "twisted_orbits", "orbit_piece_I", "wj_orbit_decomposition",
    "piece_class_bijection", "twisted_orbits_sub", "stabilizing_subgroup", "DistinguishedReport",
    "distinguished_analysis", "coset_partial_order", "piece_report", "wj_report",
    "format_word", "verify_sequences", "verify_pieces", "verify_orbit_pieces",
]
