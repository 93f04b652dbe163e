from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxpieces.braid import (GoodnessCertificate, apply_sigma, braid_equal, embed,
                             garside_normal_form, good_element_check, is_normal, longest_word,
                             power_identity, power_identity_partitions, rewrite_class,
                             sigma_order, twisted_power, verify_good_elements,
                             verify_longest_element_identities, verify_power_identity)
from coxpieces.coxcore import build_system
from coxpieces.cuspidal import rep_B
from coxpieces.errors import InvalidPartition, RankTooLargeForSearch

import property_checks as pc


def test_normal_form_examples():
    W = build_system("A1")
    assert garside_normal_form(W, (0, 0, 0, 0)) == (W.gen(0),) * 4
    W = build_system("A2")
    assert braid_equal(W, (0, 1) * 3, (0, 1, 0) * 2)
    assert braid_equal(W, (), ())
    assert not braid_equal(W, (0, 1), (1, 0))
    assert garside_normal_form(W, (0, 1, 0, 1, 0, 1)) == (W.longest_element(),) * 2


def test_embed_is_well_defined_and_multiplicative_a3():
    W = build_system("A3")
    for w in W.elements():
        for x in W.elements():
            y = W.mul(x, w)
            if W.length(y) == W.length(x) + W.length(w):
                assert braid_equal(W, embed(W, x) + embed(W, w), embed(W, y))


@pytest.mark.parametrize("spec,n", [("A2", 8), ("B2", 8), ("A3", 7), ("G2", 8)])
def test_normal_form_matches_rewriting(spec, n):
    assert pc.check_garside_oracle(spec, n) is None


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=14))
def test_normal_form_is_left_weighted(word):
    W = build_system("B3")
    nf = garside_normal_form(W, tuple(word))
    assert is_normal(W, nf)
    assert sum(W.length(f) for f in nf) == len(word)
    assert garside_normal_form(W, tuple(i for f in nf for i in W.word(f))) == nf


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=9), st.data())
def test_normal_form_respects_braid_relations(word, data):
    W = build_system("A3")
    word = tuple(word)
    other = data.draw(st.sampled_from(sorted(rewrite_class(W, word))))
    assert garside_normal_form(W, word) == garside_normal_form(W, other)


def test_sigma_order_examples():
    W = build_system("A1")
    assert sigma_order(W, 0) == 1
    assert sigma_order(W, W.gen(0)) == 2
    W = build_system("B2")
    assert sigma_order(W, W.from_word(rep_B(2, (2,)))) == 4
    W = build_system("2A3")
    assert sigma_order(W, 0) == 2


def test_goodness_examples():
    W = build_system("A2")
    cert = good_element_check(W, 0)
    assert cert == GoodnessCertificate(1, [])
    cert = good_element_check(W, W.parse_word("1,2"))
    assert cert.d == 3 and cert.chain == [frozenset({0, 1})]
    W = build_system("2A3")
    cert = good_element_check(W, W.parse_word("1,2"))
    assert cert is not None
    total = sum(2 * len(longest_word(W, J)) for J in cert.chain)
    assert total == cert.d * W.length(W.parse_word("1,2"))


def test_search_cap():
    W = build_system("A3")
    with pytest.raises(RankTooLargeForSearch):
        good_element_check(W, 0, max_rank=2)


@pytest.mark.parametrize("spec", ["A2", "A3", "B2", "B3", "2A3", "G2", "D4", "2D4", "A4"])
def test_good_elements_exist(spec):
    v, rows = verify_good_elements(build_system(spec), scope=spec)
    assert v.passed
    assert all("chain" in r for r in rows)


@pytest.mark.parametrize("spec", ["2A3", "2A4", "2A5", "B3", "B5", "D4", "D5", "2D4", "2D5"])
def test_longest_element_identities(spec):
    vs = verify_longest_element_identities(spec)
    assert vs and all(v.passed for v in vs)


def test_longest_element_identity_2a3_first_case():
    W = build_system("2A3")
    lhs = (2, 1, 0) + longest_word(W, {1, 2})
    assert braid_equal(W, lhs, longest_word(W, range(3)))


@pytest.mark.parametrize("spec", ["2A2", "2A3", "2A5", "B2", "B3", "B4", "D4", "2D4"])
def test_power_identities(spec):
    for alpha in power_identity_partitions(spec):
        v = verify_power_identity(spec, alpha)
        assert v.passed, v.to_json()


def test_power_identity_b3_exponents():
    lhs, rhs, info = power_identity("B3", (2, 1))
    assert info["d"] == 2 and info["e"] == [1, 2]
    assert len(lhs) == len(rhs)
    with pytest.raises(InvalidPartition):
        power_identity("D4", (2, 1, 1))


def test_sigma_acts_letterwise():
    W = build_system("3D4")
    word = (0, 1, 2, 3)
    assert apply_sigma(W.twist, word, 3) == word
    assert twisted_power(W, 0, W.twist, 3) == ()
    assert all(len(apply_sigma(W.twist, w, k)) == len(w)
               for w in itertools.product(range(4), repeat=2) for k in range(3))
