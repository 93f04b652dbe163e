"""Exhaustive property checks shared by the unit tests and the acceptance suite.

Each function returns None on success or a counterexample description.
"""
from __future__ import annotations

import itertools
from math import factorial

from coxpieces.braid import garside_normal_form, rewrite_class
from coxpieces.coxcore import build_system
from coxpieces.cuspidal import char_poly, twisted_classes
from coxpieces.minlen import reduce_involution

# (order, positive roots) from the standard formulas
CLASSICAL = {
    "A": lambda n: (factorial(n + 1), n * (n + 1) // 2),
    "B": lambda n: (2 ** n * factorial(n), n * n),
    "D": lambda n: (2 ** (n - 1) * factorial(n), n * (n - 1)),
}
EXCEPTIONAL = {"G2": (12, 6), "F4": (1152, 24), "E6": (51840, 36)}


def subsets(n: int):
    for r in range(n + 1):
        yield from (frozenset(c) for c in itertools.combinations(range(n), r))


def check_order_and_roots(specs) -> str | None:
    for spec in specs:
        W = build_system(spec)
        fam, n = spec[0], int(spec[1:])
        order, npos = CLASSICAL[fam](n) if fam in CLASSICAL else EXCEPTIONAL[spec]
        if (W.order, W.n_pos) != (order, npos):
            return f"{spec}: got order {W.order}, {W.n_pos} positive roots"
        for w in W.elements():
            if W.length(w) != W.inversion_count(w) or len(W.word(w)) != W.length(w):
                return f"{spec}: length of {W.format(w)} disagrees with its inversions"
        if W.length(W.longest_element()) != npos:
            return f"{spec}: longest element length"
    return None


def check_exchange(spec: str) -> str | None:
    """If l(w s) < l(w), deleting some letter of a reduced word of w gives w s."""
    W = build_system(spec)
    for w in W.elements():
        word = W.word(w)
        for s in range(W.rank):
            if not W.is_right_descent(w, s):
                continue
            target = W.rmul(w, s)
            if not any(W.from_word(word[:i] + word[i + 1:]) == target for i in range(len(word))):
                return f"{spec}: w={W.format(w)}, s={s + 1}"
    return None


def check_coset_factor_property(spec: str) -> str | None:
    """w in ^K W with w^-1 K w in J, w = x y (x in ^K W^J, y in W_J) gives x^-1 K x in J."""
    W = build_system(spec)
    n = W.rank
    for K in subsets(n):
        for J in subsets(n):
            for w in W.elements():
                if not W.is_min_left(w, K):
                    continue
                img = W.ad_total(W.inv(w), K)
                if img is None or not img <= J:
                    continue
                x, y = W.parabolic_decompose(w, J, side="right")
                if W.mul(x, y) != w or not W.is_min_right(x, J) or not W.in_parabolic(y, J):
                    return f"{spec}: bad decomposition of {W.format(w)}"
                ix = W.ad_total(W.inv(x), K)
                if ix is None or not ix <= J:
                    return f"{spec}: K={sorted(K)}, J={sorted(J)}, w={W.format(w)}"
    return None


def check_extremal_elements(spec: str) -> str | None:
    """{v w : v <= u} has a unique Bruhat-minimal and maximal element with the
    stated lengths, and the recursive construction finds them."""
    W = build_system(spec)
    below = {u: [v for v in W.elements() if W.bruhat_leq(v, u)] for u in W.elements()}
    for u in W.elements():
        for w in W.elements():
            S = {W.mul(v, w) for v in below[u]}
            mins = [y for y in S if all(W.bruhat_leq(y, z) for z in S)]
            maxs = [y for y in S if all(W.bruhat_leq(z, y) for z in S)]
            if len(mins) != 1 or len(maxs) != 1:
                return f"{spec}: u={W.format(u)}, w={W.format(w)} not unique"
            y, yp = mins[0], maxs[0]
            if W.length(y) != W.length(w) - W.length(W.mul(y, W.inv(w))):
                return f"{spec}: min length formula at u={W.format(u)}, w={W.format(w)}"
            if W.length(yp) != W.length(w) + W.length(W.mul(yp, W.inv(w))):
                return f"{spec}: max length formula at u={W.format(u)}, w={W.format(w)}"
            if W.extremal_coset_element(u, w, "min") != y or W.extremal_coset_element(u, w, "max") != yp:
                return f"{spec}: recursion disagrees at u={W.format(u)}, w={W.format(w)}"
    return None


def check_involution_reduction(spec: str) -> str | None:
    W = build_system(spec)
    sigma = W.twist
    for w in W.elements():
        if W.apply_automorphism(sigma, w) != W.inv(w):
            continue
        J, chain = reduce_involution(W, w, sigma)
        if chain.end != W.longest_element(J) or not chain.is_nonincreasing():
            return f"{spec}: {W.format(w)}"
    return None


def check_charpoly_rational(spec: str) -> str | None:
    """Integer coefficients, constant on classes, for crystallographic twists."""
    W = build_system(spec)
    for cl in twisted_classes(W, W.twist):
        polys = {char_poly(W, w, W.twist).coeffs for w in cl.members}
        if len(polys) != 1:
            return f"{spec}: char poly varies on the class of {W.format(cl.rep)}"
        if not all(isinstance(c, int) for c in polys.pop()):
            return f"{spec}: non-integer coefficients for {W.format(cl.rep)}"
    return None


def check_garside_oracle(spec: str, max_len: int) -> str | None:
    """Words with equal normal forms are exactly the braid-relation classes."""
    W = build_system(spec)
    for L in range(max_len + 1):
        groups: dict[tuple, set] = {}
        for word in itertools.product(range(W.rank), repeat=L):
            groups.setdefault(garside_normal_form(W, word), set()).add(word)
        for nf, words in groups.items():
            if rewrite_class(W, next(iter(words))) != words:
                return f"{spec}: length {L}, normal form {nf}"
    return None
