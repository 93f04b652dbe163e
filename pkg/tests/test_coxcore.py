from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxpieces.coxcore import build_system, s_interval
from coxpieces.errors import CoxeterError, ParseError

import property_checks as pc


@pytest.mark.parametrize("spec,order,npos", [
    ("A1", 2, 1), ("A3", 24, 6), ("B4", 384, 16), ("D4", 192, 12), ("G2", 12, 6), ("F4", 1152, 24),
    ("A1xA1", 4, 2), ("A2xB2", 48, 7),
])
def test_order_and_roots(spec, order, npos):
    W = build_system(spec)
    assert (W.order, W.n_pos) == (order, npos)
    assert W.length(W.longest_element()) == npos


def test_order_roots_and_lengths_exhaustive():
    assert pc.check_order_and_roots(["A1", "A2", "A3", "A4", "B2", "B3", "D4", "G2"]) is None


@pytest.mark.parametrize("spec", ["A3", "B3", "D4", "G2"])
def test_exchange_property(spec):
    assert pc.check_exchange(spec) is None


@pytest.mark.parametrize("spec", ["A3", "B3"])
def test_coset_factor_property(spec):
    assert pc.check_coset_factor_property(spec) is None


@pytest.mark.parametrize("spec", ["A2", "A3", "B3"])
def test_extremal_elements(spec):
    assert pc.check_extremal_elements(spec) is None


def test_words_and_parsing():
    W = build_system("A2")
    assert W.parse_word("e") == 0
    assert W.parse_word("1,2,1") == W.parse_word("2,1,2")
    assert W.format(W.parse_word("2,1,2")) == "1,2,1"
    assert W.length(W.parse_word("1,1")) == 0
    with pytest.raises(CoxeterError):
        W.parse_word("1,4")
    with pytest.raises(ParseError):
        build_system("Q7")


def test_s_interval():
    assert s_interval(3, 1) == (2, 1, 0)
    assert s_interval(2, 2) == (1,)
    assert s_interval(1, 3) == ()


def test_twists():
    assert build_system("3D4").twist.order == 3
    assert build_system("2A3").twist.perm == (2, 1, 0)
    assert build_system("2D4").twist.perm == (0, 1, 3, 2)
    with pytest.raises(ParseError):
        build_system("2B3")


def test_parabolic_decomposition():
    W = build_system("B3")
    J = [0, 1]
    for w in W.elements():
        x, y = W.parabolic_decompose(w, J, side="right")
        assert W.mul(x, y) == w and W.is_min_right(x, J) and W.in_parabolic(y, J)
        assert W.length(w) == W.length(x) + W.length(y)
        x, y = W.parabolic_decompose(w, J, side="left")
        assert W.mul(y, x) == w and W.is_min_left(x, J)


def test_bruhat_is_subword_order_on_a3():
    W = build_system("A3")
    import itertools
    for w in W.elements():
        word = W.word(w)
        sub = {W.from_word(c) for r in range(len(word) + 1) for c in itertools.combinations(word, r)}
        assert {v for v in W.elements() if W.bruhat_leq(v, w)} == sub


WORDS = st.lists(st.integers(0, 2), max_size=12)


@settings(max_examples=200, deadline=None)
@given(WORDS, WORDS, WORDS)
def test_multiplication_is_associative(a, b, c):
    W = build_system("B3")
    x, y, z = W.from_word(a), W.from_word(b), W.from_word(c)
    assert W.mul(W.mul(x, y), z) == W.mul(x, W.mul(y, z))
    assert W.mul(x, W.inv(x)) == 0
    assert W.from_word(a + b) == W.mul(x, y)


@settings(max_examples=200, deadline=None)
@given(WORDS)
def test_matrix_is_a_homomorphism(a):
    W = build_system("A3")
    x = W.from_word(a)
    assert W.matrix_of(x) is not None
    prod = W.matrix_of(0)
    for i in a:
        m = W.matrix_of(W.gen(i))
        prod = [[sum(prod[r][k] * m[k][c] for k in range(3)) for c in range(3)] for r in range(3)]
    assert prod == W.matrix_of(x)
