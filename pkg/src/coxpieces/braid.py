"""Positive braid monoid of a finite Coxeter system.

Positive braids are stored as tuples of 0-based generator letters.  Equality
is decided by the left-greedy normal form whose factors are elements of W
(the simple elements of the monoid).
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import reduce
from math import lcm

from .coxcore import CoxeterSystem, DiagramAutomorphism, INF, build_system, s_interval
from .cuspidal import _check_partition, partitions, rep_2A, rep_B, rep_D, twisted_classes
from .errors import RankTooLargeForSearch
from .verdict import Verdict

DEFAULT_SEARCH_RANK = 6

Word = tuple[int, ...]


def embed(W: CoxeterSystem, w: int) -> Word:
    """The positive lift of w (any reduced word gives the same braid)."""
    return tuple(W.word(w))


def apply_sigma(sigma: DiagramAutomorphism, word: Word, k: int = 1) -> Word:
    p = sigma.power(k).perm
    return tuple(p[i] for i in word)


def _left_weight(W: CoxeterSystem, a: int, b: int) -> tuple[int, int]:
    """Make (a, b) left-weighted: move every left descent of b into a."""
    while True:
        moved = False
        for s in range(W.rank):
            if W.is_left_descent(s, b) and not W.is_right_descent(a, s):
                a, b = W.rmul(a, s), W.lmul(s, b)
                moved = True
                break
        if not moved:
            return a, b


def garside_normal_form(W: CoxeterSystem, word) -> tuple[int, ...]:
    """Left-greedy normal form as a tuple of non-identity elements of W."""
    factors: list[int] = []
    for s in word:
        factors.append(W.gen(s))
        k = len(factors) - 2
        while k >= 0:
            a, b = _left_weight(W, factors[k], factors[k + 1])
            if (a, b) == (factors[k], factors[k + 1]):
                break
            factors[k], factors[k + 1] = a, b
            k -= 1
        while factors and factors[-1] == 0:
            factors.pop()
    return tuple(factors)


def is_normal(W: CoxeterSystem, factors) -> bool:
    if any(f == 0 for f in factors):
        return False
    return all(_left_weight(W, a, b) == (a, b) for a, b in zip(factors, factors[1:]))


def braid_equal(W: CoxeterSystem, a, b) -> bool:
    return len(a) == len(b) and garside_normal_form(W, a) == garside_normal_form(W, b)


def nf_word(W: CoxeterSystem, factors) -> Word:
    return tuple(i for f in factors for i in W.word(f))


# ---------------------------------------------------------------------------
# independent oracle: closure under the braid relations


def _relations(W: CoxeterSystem) -> list[tuple[Word, Word]]:
    out = []
    for i, j in itertools.permutations(range(W.rank), 2):
        m = W.matrix.m[i][j]
        if m == INF:
            continue
        out.append((tuple((i, j)[k % 2] for k in range(m)), tuple((j, i)[k % 2] for k in range(m))))
    return out


def rewrite_class(W: CoxeterSystem, word, limit: int = 200_000) -> set[Word]:
    """All positive words equal to word, by exhaustive application of braid relations."""
    rels = _relations(W)
    start = tuple(word)
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for lhs, rhs in rels:
            m = len(lhs)
            for p in range(len(w) - m + 1):
                if w[p:p + m] == lhs:
                    z = w[:p] + rhs + w[p + m:]
                    if z not in seen:
                        seen.add(z)
                        if len(seen) > limit:
                            raise RuntimeError("rewriting class too large")
                        queue.append(z)
    return seen


# ---------------------------------------------------------------------------
# good elements


def sigma_order(W: CoxeterSystem, w: int, sigma: DiagramAutomorphism | None = None) -> int:
    sigma = sigma or W.twist
    o = sigma.order
    prod = 0
    d = 0
    while True:
        prod = W.mul(prod, W.apply_automorphism(sigma.power(d), w))
        d += 1
        if prod == 0 and d % o == 0:
            return d
        if d > 10 * W.order:
            raise AssertionError("sigma-order search did not terminate")


def twisted_power(W: CoxeterSystem, w: int, sigma: DiagramAutomorphism, k: int) -> Word:
    """w sigma(w) ... sigma^(k-1)(w) as a positive word."""
    base = embed(W, w)
    return tuple(x for j in range(k) for x in apply_sigma(sigma, base, j))


def longest_word(W: CoxeterSystem, J) -> Word:
    return tuple(W.word(W.longest_element(sorted(J))))


def chain_word(W: CoxeterSystem, chain) -> Word:
    """Product of w_{I}^{e} over (I, e) pairs."""
    return tuple(x for J, e in chain for _ in range(e) for x in longest_word(W, J))


@dataclass
class GoodnessCertificate:
    d: int
    chain: list[frozenset[int]] = field(default_factory=list)  # each w_I appears squared

    def to_json(self) -> dict:
        return {"d": self.d, "chain": [sorted(i + 1 for i in J) for J in self.chain]}


def _strip_prefix(W: CoxeterSystem, nf: tuple[int, ...], J: frozenset[int]) -> tuple[int, ...] | None:
    """Normal form of w_J^-1 beta if w_J left-divides beta, else None."""
    if not nf:
        return None if J else nf
    first = nf[0]
    if not J <= W.left_descents(first):
        return None
    rest = W.mul(W.longest_element(sorted(J)), first)  # w_J is an involution
    return garside_normal_form(W, tuple(W.word(rest)) + nf_word(W, nf[1:]))


def good_element_check(W: CoxeterSystem, w: int, sigma: DiagramAutomorphism | None = None,
                       max_rank: int = DEFAULT_SEARCH_RANK) -> GoodnessCertificate | None:
    """Search a weakly decreasing chain I_1 >= I_2 >= ... with
    w sigma(w) ... sigma^(d-1)(w) = w_{I_1}^2 w_{I_2}^2 ... in the braid monoid."""
    sigma = sigma or W.twist
    if W.rank > max_rank:
        raise RankTooLargeForSearch(f"rank {W.rank} exceeds the search cap {max_rank}")
    d = sigma_order(W, w, sigma)
    beta = garside_normal_form(W, twisted_power(W, w, sigma, d))
    memo: dict[tuple, list[frozenset[int]] | None] = {}

    def search(nf: tuple[int, ...], parent: frozenset[int]) -> list[frozenset[int]] | None:
        if not nf:
            return []
        key = (nf, parent)
        if key in memo:
            return memo[key]
        memo[key] = None
        desc = W.left_descents(nf[0]) & parent
        for r in range(len(desc), 0, -1):
            for K in itertools.combinations(sorted(desc), r):
                K = frozenset(K)
                once = _strip_prefix(W, nf, K)
                twice = _strip_prefix(W, once, K) if once is not None else None
                if twice is None:
                    continue
                tail = search(twice, K)
                if tail is not None:
                    memo[key] = [K] + tail
                    return memo[key]
        return None

    chain = search(beta, frozenset(range(W.rank)))
    if chain is None:
        return None
    cert = GoodnessCertificate(d, chain)
    # replay the certificate
    rhs = chain_word(W, [(J, 2) for J in chain])
    if not braid_equal(W, twisted_power(W, w, sigma, d), rhs):
        raise AssertionError("goodness certificate does not replay")
    return cert


def verify_good_elements(W: CoxeterSystem, sigma: DiagramAutomorphism | None = None,
                         scope: str = "") -> tuple[Verdict, list[dict]]:
    """Every sigma-class has a good element of minimal length."""
    sigma = sigma or W.twist
    rows = []
    bad = None
    for cl in twisted_classes(W, sigma):
        found = None
        for w in cl.mins:
            cert = good_element_check(W, w, sigma)
            if cert is not None:
                found = (w, cert)
                break
        if found is None:
            rows.append({"rep": W.format(cl.rep), "good": False})
            bad = bad or W.format(cl.rep)
        else:
            rows.append({"rep": W.format(found[0]), **found[1].to_json()})
    return Verdict("good-element-exists", scope, bad is None, bad, {"classes": len(rows)}), rows


# ---------------------------------------------------------------------------
# explicit identities


def _inv(word) -> Word:
    return tuple(reversed(word))


def _interval(a: int, b: int) -> frozenset[int]:
    """{a, ..., b} as 0-based generators (1-based input)."""
    return frozenset(range(a - 1, b))


def longest_element_identities(type_spec: str) -> list[tuple[str, Word, Word]]:
    """(label, lhs, rhs) for the longest-element identities of the given type."""
    W = build_system(type_spec)
    sigma = W.twist
    n = W.rank
    wI = longest_word(W, range(n))
    out = []
    fam = type_spec.lstrip("23")[0]
    tw = type_spec[0] if type_spec[0] in "23" else ""
    if fam == "A" and tw == "2":
        for a in range(1, n + 1):
            if 2 * a > n + 1:
                continue
            base = s_interval(n + 1 - a, 1)
            lhs = tuple(x for j in range(2 * a - 1) for x in apply_sigma(sigma, base, j))
            lhs += longest_word(W, _interval(a + 1, n + 1 - a))
            out.append((f"a={a}", lhs, wI))
    elif fam == "B" and not tw:
        for a in range(1, n + 1):
            base = _inv(s_interval(n - 1, a)) + s_interval(n, 1)
            out.append((f"a={a}", base * a + longest_word(W, _interval(a + 1, n)), wI))
    elif fam == "D" and not tw:
        for a in range(1, n - 1):
            base = _inv(s_interval(n - 2, a)) + s_interval(n, 1)
            out.append((f"a={a}", base * a + longest_word(W, _interval(a + 1, n)), wI))
    elif fam == "D" and tw == "2":
        out.append(("coxeter-power", s_interval(n, 1) * (n - 1), wI))
        base = s_interval(n - 1, 1)
        out.append(("twisted-product", tuple(x for j in range(n) for x in apply_sigma(sigma, base, j)), wI))
    else:
        raise ValueError(f"no identities for {type_spec}")
    return out


def verify_longest_element_identities(type_spec: str) -> list[Verdict]:
    W = build_system(type_spec)
    out = []
    for label, lhs, rhs in longest_element_identities(type_spec):
        ok = len(lhs) == len(rhs) and braid_equal(W, lhs, rhs)
        out.append(Verdict("longest-element-identity", f"{type_spec} {label}", ok,
                           None if ok else {"lhs_letters": len(lhs), "rhs_letters": len(rhs)}))
    return out


def power_identity(type_spec: str, alpha) -> tuple[Word, Word, dict]:
    """Both sides of the twisted power identity for the representative of alpha."""
    W = build_system(type_spec)
    sigma = W.twist
    n = W.rank
    fam = type_spec.lstrip("23")[0]
    tw = type_spec[0] if type_spec[0] in "23" else ""
    alpha = tuple(alpha)
    partial = [sum(alpha[:i]) for i in range(len(alpha))]
    if fam == "A" and tw == "2":
        alpha = _check_partition(alpha, n + 1, lambda a: 2 * a - 1)
        d = reduce(lcm, (2 * a - 1 for a in alpha))
        e = [2 * d // (2 * a - 1) for a in alpha]
        subsets = [_interval(partial[i] - (i + 1) + 2, n - partial[i]) for i in range(len(alpha))]
        lhs = twisted_power(W, W.from_word(rep_2A(n, alpha)), sigma, 2 * d)
    elif fam in "BC" and not tw:
        alpha = _check_partition(alpha, n)
        d = reduce(lcm, alpha)
        e = [d // a for a in alpha]
        subsets = [_interval(partial[i] + 1, n) for i in range(len(alpha))]
        lhs = rep_B(n, alpha) * d
    elif fam == "D" and tw in ("", "2"):
        alpha = _check_partition(alpha, n)
        if len(alpha) % 2 != (1 if tw else 0):
            from .errors import InvalidPartition
            raise InvalidPartition(f"{alpha} has the wrong parity of parts for {type_spec}")
        d = reduce(lcm, alpha)
        e = [2 * d // a for a in alpha]
        subsets = [_interval(partial[i] + 1, n) if partial[i] <= n - 2 else frozenset()
                   for i in range(len(alpha))]
        lhs = twisted_power(W, W.from_word(rep_D(n, alpha)), sigma, 2 * d)
    else:
        raise ValueError(f"no power identity for {type_spec}")
    exps = [e[0]] + [e[i] - e[i - 1] for i in range(1, len(e))]
    rhs = chain_word(W, list(zip(subsets, exps)))
    info = {"d": d, "e": e, "subsets": [sorted(i + 1 for i in J) for J in subsets]}
    return lhs, rhs, info


def verify_power_identity(type_spec: str, alpha) -> Verdict:
    W = build_system(type_spec)
    lhs, rhs, info = power_identity(type_spec, alpha)
    ok = len(lhs) == len(rhs) and braid_equal(W, lhs, rhs)
    info.update({"lhs_letters": len(lhs), "rhs_letters": len(rhs)})
    return Verdict("power-identity", f"{type_spec} {tuple(alpha)}", ok,
                   None if ok else info, info)


def power_identity_partitions(type_spec: str) -> list[tuple[int, ...]]:
    W = build_system(type_spec)
    n = W.rank
    fam = type_spec.lstrip("23")[0]
    tw = type_spec[0] if type_spec[0] in "23" else ""
    if fam == "A" and tw == "2":
        return [tuple((p + 1) // 2 for p in lam) for lam in partitions(n + 1) if all(p % 2 for p in lam)]
    if fam in "BC" and not tw:
        return list(partitions(n))
    if fam == "D":
        par = 1 if tw == "2" else 0
        return [a for a in partitions(n) if len(a) % 2 == par]
    raise ValueError(f"no power identity for {type_spec}")


__all__ = [
    "embed", "apply_sigma", "garside_normal_form", "is_normal", "braid_equal", "nf_word",
    "rewrite_class", "sigma_order", "twisted_power", "longest_word", "chain_word",
    "GoodnessCertificate", "good_element_check", "verify_good_elements",
    "longest_element_identities", "verify_longest_element_identities", "power_identity", "verify_power_identity",
    "power_identity_partitions",
]
