"""Minimal length elements of twisted W_J-orbits and of double cosets.

Two kinds of action are supported through a small common interface:

* ``TwistedAction(W, mapping)``: W_J acting on W by x . y = x y delta(x)^-1,
  where mapping sends each j in J to delta(j).  Ordinary (sigma-)conjugation
  is the case J = I.
* ``PairAction(S)``: W_{c'} x W_c acting on W1 x W2 through a PairSetting.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .coxcore import CoxeterSystem, DiagramAutomorphism
from .errors import LengthMismatch, NotTwistedInvolution, SigmaOrderNotTwo
from .pieces import PairSetting, decompose_pieces
from .steps import ReductionChain, ReductionStep
from .verdict import Verdict


class _Action:
    """Shared orbit bookkeeping.  Points are ints in range(size)."""

    size: int

    def length(self, p: int) -> int:
        raise NotImplementedError

    def moves(self) -> list[tuple[str, int]]:
        raise NotImplementedError

    def apply(self, side: str, g: int, p: int) -> int:
        raise NotImplementedError

    def strong_neighbors(self, p: int) -> Iterable[tuple[object, int]]:
        """(witness, q) for every q elementarily strongly conjugate to p."""
        raise NotImplementedError

    def format(self, p: int):
        raise NotImplementedError

    @cached_property
    def orbit_of(self) -> list[int]:
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
                    q = self.apply(side, g, p)
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

    def orbit(self, p: int) -> list[int]:
        return self.orbits[self.orbit_of[p]]

    def step(self, side: str, g: int, p: int) -> ReductionStep:
        q = self.apply(side, g, p)
        return ReductionStep(side, g, p, q, self.length(p), self.length(q))


class TwistedAction(_Action):
    def __init__(self, W: CoxeterSystem, mapping: Mapping[int, int] | DiagramAutomorphism | None = None):
        if mapping is None:
            mapping = W.twist
        if isinstance(mapping, DiagramAutomorphism):
            mapping.check(W.matrix)
            mapping = {i: mapping(i) for i in range(W.rank)}
        from .pieces import AdmissibleTriple
        AdmissibleTriple.build(W, W, mapping)
        self.W = W
        self.delta = dict(mapping)
        self.J = frozenset(mapping)
        self.size = W.order

    def length(self, p: int) -> int:
        return self.W.length(p)

    def moves(self) -> list[tuple[str, int]]:
        return [("conj", j) for j in sorted(self.J)]

    def apply(self, side: str, g: int, p: int) -> int:
        return self.W.rmul(self.W.lmul(g, p), self.delta[g])

    def delta_of(self, x: int) -> int:
        return self.W.from_word(self.delta[i] for i in self.W.word(x))

    @cached_property
    def _group(self) -> list[tuple[int, int, int]]:
        """(x, delta(x)^-1, l(x)) over W_J."""
        W = self.W
        return [(x, W.inv(self.delta_of(x)), W.length(x)) for x in W.parabolic_elements(self.J)]

    def act(self, x: int, p: int) -> int:
        W = self.W
        return W.prod(x, p, W.inv(self.delta_of(x)))

    def strong_neighbors(self, p: int):
        W = self.W
        lp = W.length(p)
        for x, dxi, lx in self._group:
            q = W.mul(W.mul(x, p), dxi)
            if W.length(q) != lp:
                continue
            if W.length(W.mul(x, p)) == lx + lp or W.length(W.mul(p, dxi)) == lx + lp:
                yield x, q

    def format(self, p: int) -> str:
        return self.W.format(p)


class PairAction(_Action):
    def __init__(self, S: PairSetting):
        self.S = S
        self.size = S.size

    def length(self, p: int) -> int:
        return self.S.length(p)

    def moves(self) -> list[tuple[str, int]]:
        return self.S.moves()

    def apply(self, side: str, g: int, p: int) -> int:
        return self.S.apply_move(side, g, p)

    @cached_property
    def _group(self):
        S = self.S
        W1, W2 = S.W1, S.W2
        xs = [(x, S.cp.apply(W1, W2, x), W1.length(x)) for x in W1.parabolic_elements(S.cp.J1)]
        ys = [(y, S.c.apply(W1, W2, y), W1.length(y)) for y in W1.parabolic_elements(S.c.J1)]
        return xs, ys

    def strong_neighbors(self, p: int):
        # lengths of the W_{J1} part are measured with l_1, as written
        S = self.S
        W1, W2 = S.W1, S.W2
        a, b = S.decode(p)
        lp = S.length(p)
        xs, ys = self._group
        for x, dx, lx in xs:
            xa, dxb = W1.mul(x, a), W2.mul(dx, b)
            for y, dy, ly in ys:
                q1, q2 = W1.mul(xa, y), W2.mul(dxb, dy)
                if W1.length(q1) + W2.length(q2) != lp:
                    continue
                need = lx + lp + ly
                if (W1.length(xa) + W2.length(W2.mul(b, dy)) == need
                        or W1.length(W1.mul(a, y)) + W2.length(dxb) == need):
                    yield (x, y), S.encode(q1, q2)

    def format(self, p: int):
        return self.S.format(p)


# ---------------------------------------------------------------------------


def min_length_set(action: _Action, orbit: Iterable[int]) -> list[int]:
    orbit = list(orbit)
    m = min(action.length(p) for p in orbit)
    return sorted(p for p in orbit if action.length(p) == m)


def _plateau(action: _Action, p: int) -> dict[int, tuple[int, str, int] | None]:
    """Equal-length component of p with BFS parent pointers."""
    lp = action.length(p)
    parent: dict[int, tuple[int, str, int] | None] = {p: None}
    queue = deque([p])
    while queue:
        y = queue.popleft()
        for side, g in action.moves():
            z = action.apply(side, g, y)
            if z not in parent and action.length(z) == lp:
                parent[z] = (y, side, g)
                queue.append(z)
    return parent


def _path(action: _Action, parent, z: int) -> list[ReductionStep]:
    out = []
    while parent[z] is not None:
        y, side, g = parent[z]
        out.append(action.step(side, g, y))
        z = y
    return out[::-1]


def reduce_to_min(action: _Action, p: int) -> tuple[int, ReductionChain]:
    """A reachable element of least length and the non-increasing chain to it.

    Strict descents are taken greedily; when none exists the equal-length
    component is searched breadth first for an element that has one.
    """
    chain = ReductionChain(p)
    cur = p
    while True:
        lc = action.length(cur)
        nxt = None
        for side, g in action.moves():
            if action.length(action.apply(side, g, cur)) < lc:
                nxt = (side, g)
                break
        if nxt is not None:
            chain.steps.append(action.step(nxt[0], nxt[1], cur))
            cur = chain.end
            continue
        parent = _plateau(action, cur)
        exit_ = None
        for z in parent:
            for side, g in action.moves():
                if action.length(action.apply(side, g, z)) < lc:
                    exit_ = (z, side, g)
                    break
            if exit_:
                break
        if exit_ is None:
            return cur, chain
        z, side, g = exit_
        chain.steps.extend(_path(action, parent, z))
        chain.steps.append(action.step(side, g, z))
        cur = chain.end


def strongly_conjugate(action: _Action, p: int, q: int) -> list[tuple[object, int]] | None:
    """Chain [(x_1, p_1), ..., (x_k, q)] of elementary strong conjugations, or None."""
    if action.length(p) != action.length(q):
        raise LengthMismatch("strong conjugacy needs equal lengths")
    if p == q:
        return []
    parent: dict[int, tuple[int, object] | None] = {p: None}
    queue = deque([p])
    while queue:
        y = queue.popleft()
        for x, z in action.strong_neighbors(y):
            if z in parent:
                continue
            parent[z] = (y, x)
            if z == q:
                out = []
                while parent[z] is not None:
                    y2, x2 = parent[z]
                    out.append((x2, z))
                    z = y2
                return out[::-1]
            queue.append(z)
    return None


def strong_components(action: _Action, points: Iterable[int]) -> list[set[int]]:
    """Components of the elementary strong conjugacy graph containing points."""
    pts = list(points)
    done: set[int] = set()
    comps = []
    for p in pts:
        if p in done:
            continue
        comp = {p}
        queue = deque([p])
        while queue:
            y = queue.popleft()
            for _, z in action.strong_neighbors(y):
                if z not in comp:
                    comp.add(z)
                    queue.append(z)
        done |= comp
        comps.append(comp)
    return comps


@dataclass
class CyclicShiftClass:
    members: list[int]
    terminal: bool
    length: int


def cyc_class(action: _Action, p: int) -> CyclicShiftClass:
    plateau = set(_plateau(action, p))
    strong = strong_components(action, [p])[0]
    members = plateau & strong
    lp = action.length(p)
    terminal = members == plateau and not any(
        action.length(action.apply(side, g, z)) < lp
        for z in plateau for side, g in action.moves())
    return CyclicShiftClass(sorted(members), terminal, lp)


def reduce_involution(W: CoxeterSystem, w: int, sigma: DiagramAutomorphism | None = None
                      ) -> tuple[frozenset[int], ReductionChain]:
    """Reduce a sigma-twisted involution to a longest element w_J, sigma(J) = J."""
    sigma = sigma or W.twist
    if sigma.order > 2:
        # twisted conjugation only preserves twisted involutions when sigma^2 = 1
        raise SigmaOrderNotTwo("involution reduction needs an automorphism of order <= 2")
    if W.apply_automorphism(sigma, w) != W.inv(w):
        raise NotTwistedInvolution(f"{W.format(w)} is not a sigma-twisted involution")
    action = TwistedAction(W, sigma)
    chain = ReductionChain(w)
    cur = w
    while True:
        J = frozenset(i for i in range(W.rank)
                      if W.is_left_descent(i, cur) and W.lmul(i, cur) == W.rmul(cur, sigma(i)))
        rest, _ = W.parabolic_decompose(cur, J, side="left")
        if rest == 0:
            break
        i = next(i for i in range(W.rank) if W.is_right_descent(rest, sigma(i)))
        st = action.step("conj", i, cur)
        if st.len_after >= st.len_before:
            raise AssertionError("involution reduction failed to descend")
        chain.steps.append(st)
        cur = st.after
    if cur != W.longest_element(J) or sigma.closure(J) != J:
        raise AssertionError("involution reduction did not end at a longest element")
    for j in J:
        if W.rmul(cur, sigma(j)) != W.lmul(j, cur):
            raise AssertionError("w_J does not twist-commute with its generators")
    if W.length(cur) != min(W.length(q) for q in action.orbit(cur)):
        raise AssertionError("w_J is not of minimal length in its class")
    return J, chain


# ---------------------------------------------------------------------------
# exhaustive verification


def verify_minimal_length(action: _Action, scope: str = "") -> list[Verdict]:
    """Reachability of O_min and strong conjugacy inside O_min, per orbit."""
    bad1 = bad2 = None
    n_orbits = 0
    for rep, orbit in action.orbits.items():
        n_orbits += 1
        mins = set(min_length_set(action, orbit))
        m = action.length(next(iter(mins)))
        # backward search: every orbit member must reach O_min by -> steps
        reach = set(mins)
        by_len = sorted(orbit, key=action.length)
        changed = True
        while changed and bad1 is None:
            changed = False
            for y in by_len:
                if y in reach:
                    continue
                if any(action.apply(s, g, y) in reach
                       and action.length(action.apply(s, g, y)) <= action.length(y)
                       for s, g in action.moves()):
                    reach.add(y)
                    changed = True
        if len(reach) != len(orbit) and bad1 is None:
            y = next(y for y in orbit if y not in reach)
            bad1 = {"element": action.format(y), "min_length": m}
        comps = strong_components(action, sorted(mins))
        if len(comps) != 1 and bad2 is None:
            bad2 = {"orbit": action.format(rep),
                    "components": [sorted(action.format(z) for z in c) for c in comps]}
    return [Verdict("reach-min", scope, bad1 is None, bad1, {"orbits": n_orbits}),
            Verdict("min-strongly-conjugate", scope, bad2 is None, bad2, {"orbits": n_orbits})]


def verify_reduction_chains(action: _Action, scope: str = "") -> Verdict:
    """reduce_to_min from every element reaches the orbit minimum."""
    bad = None
    for p in range(action.size):
        end, chain = reduce_to_min(action, p)
        m = min(action.length(q) for q in action.orbit(p))
        if (not chain.is_nonincreasing() or chain.end != end
                or action.orbit_of[end] != action.orbit_of[p] or action.length(end) != m):
            bad = {"start": action.format(p), "end": action.format(end)}
            break
    return Verdict("reduce-to-min", scope, bad is None, bad)


def verify_canonical_cyclic(S: PairSetting, scope: str = "") -> Verdict:
    """Each minimal element of a distinguished coset is in the cyclic shift
    class of the coset's piece index."""
    action = PairAction(S)
    bad = None
    for a, b in S.piece_indices():
        p = S.encode(a, b)
        cyc = set(cyc_class(action, p).members)
        mins = S.orbit_min(p)
        for q in mins:
            if q not in cyc:
                bad = {"index": S.format(p), "min": S.format(q)}
                break
        if bad:
            break
    return Verdict("min-in-index-cyc", scope, bad is None, bad)


def verify_pair_reduction(S: PairSetting, scope: str = "") -> Verdict:
    """Every pair reduces by non-increasing steps to some (w1 v, w2), v in W_I."""
    action = PairAction(S)
    bad = None
    W1 = S.W1
    for piece in decompose_pieces(S):
        targets = {S.encode(W1.mul(piece.w1, v), piece.w2) for v in W1.parabolic_elements(piece.I)}
        for p in piece.members:
            # forward search over non-increasing steps
            seen = {p}
            queue = deque([p])
            hit = p in targets
            while queue and not hit:
                y = queue.popleft()
                for side, g in action.moves():
                    z = action.apply(side, g, y)
                    if z not in seen and action.length(z) <= action.length(y):
                        if z in targets:
                            hit = True
                            break
                        seen.add(z)
                        queue.append(z)
            if not hit:
                bad = {"pair": S.format(p)}
                break
        if bad:
            break
    return Verdict("reduce-to-piece", scope, bad is None, bad)


def verify_min_length_suite(action: _Action, scope: str = "") -> list[Verdict]:
    out = verify_minimal_length(action, scope)
    out.append(verify_reduction_chains(action, scope))
    if isinstance(action, PairAction):
        out.append(verify_pair_reduction(action.S, scope))
        out.append(verify_canonical_cyclic(action.S, scope))
    return out


def verify_support_monotone(W: CoxeterSystem, sigma: DiagramAutomorphism | None = None,
                            scope: str = "") -> Verdict:
    """A move never enlarges the sigma-support; cyclic shift classes share it."""
    sigma = sigma or W.twist
    action = TwistedAction(W, sigma)
    bad = None
    for w in W.elements():
        s = W.support_sigma(w, sigma)
        for side, g in action.moves():
            z = action.apply(side, g, w)
            if W.length(z) <= W.length(w) and not W.support_sigma(z, sigma) <= s:
                bad = {"from": W.format(w), "to": W.format(z)}
                break
        if bad:
            break
    if bad is None:
        done: set[int] = set()
        for w in W.elements():
            if w in done:
                continue
            cls = cyc_class(action, w).members
            done.update(cls)
            if len({W.support_sigma(z, sigma) for z in cls}) != 1:
                bad = {"class of": W.format(w)}
                break
    return Verdict("support-monotone", scope, bad is None, bad)


def verify_parabolic_conjugation(W: CoxeterSystem, sigma: DiagramAutomorphism | None = None,
                                 scope: str = "") -> Verdict:
    """l(x w sigma(x)^-1) >= l(w) for sigma-stable J, w in W_J, x in W^J."""
    sigma = sigma or W.twist
    bad = None
    for r in range(W.rank + 1):
        for J in itertools.combinations(range(W.rank), r):
            J = frozenset(J)
            if sigma.closure(J) != J:
                continue
            xs = [x for x in W.elements() if W.is_min_right(x, J)]
            for w in W.parabolic_elements(J):
                lw = W.length(w)
                for x in xs:
                    sx = W.apply_automorphism(sigma, x)
                    if W.length(W.prod(x, w, W.inv(sx))) < lw:
                        bad = {"J": sorted(j + 1 for j in J), "w": W.format(w), "x": W.format(x)}
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    return Verdict("parabolic-conjugation-length", scope, bad is None, bad)


def chain_json(action: _Action, chain: ReductionChain) -> list[dict]:
    out = []
    for st in chain.steps:
        f = action.format(st.after)
        out.append({"gen": st.signed_label, "word": f if isinstance(f, str) else list(f)})
    return out


__all__ = [
    "TwistedAction", "PairAction", "min_length_set", "reduce_to_min", "strongly_conjugate",
    "strong_components", "CyclicShiftClass", "cyc_class", "reduce_involution",
    "verify_minimal_length", "verify_reduction_chains", "verify_canonical_cyclic",
    "verify_pair_reduction", "verify_min_length_suite", "verify_support_monotone",
    "verify_parabolic_conjugation", "chain_json",
]
