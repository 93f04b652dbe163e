from __future__ import annotations

import pytest

from coxpieces.coxcore import build_system
from coxpieces.errors import CoxeterError, InvalidSequence, NotInMinimalCosetForm
from coxpieces.pieces import (AdmissibleTriple, PairSetting, State, admissible_triples,
                              all_sequences, check_sequence, compute_I, compute_I_brute,
                              decompose_pieces, distinguished_analysis, phi_map, pi_projection,
                              piece_class_bijection, product_setting, psi_map, verify_orbit_pieces,
                              verify_pieces, verify_sequences, wj_orbit_decomposition)


def settings_of(a: str, b: str):
    W1, W2 = build_system(a), build_system(b)
    triples = admissible_triples(W1, W2)
    for c in triples:
        for cp in triples:
            yield PairSetting(W1, W2, c, cp)


def test_admissible_triples_a2():
    W = build_system("A2")
    triples = admissible_triples(W, W)
    # empty, four single-node maps, identity and swap on the full diagram
    assert len(triples) == 7
    with pytest.raises(CoxeterError):
        AdmissibleTriple.build(W, build_system("B2"), {0: 0, 1: 1})


@pytest.mark.parametrize("a,b", [("A2", "A2"), ("A1", "B2"), ("A1", "A1xA1")])
def test_sequences_exhaustive(a, b):
    for S in settings_of(a, b):
        for v in verify_sequences(S):
            assert v.passed, v.to_json()


@pytest.mark.parametrize("a,b", [("A2", "A2"), ("A1", "B2")])
def test_pieces_exhaustive(a, b):
    for S in settings_of(a, b):
        for v in verify_pieces(S):
            assert v.passed, v.to_json()


def test_psi_rejects_non_index():
    W = build_system("A2")
    S = product_setting(W, {0: 0})
    with pytest.raises(NotInMinimalCosetForm):
        psi_map(S, W.gen(0), 0)


def test_check_sequence_rejects_tampering():
    W = build_system("A2")
    S = product_setting(W, {0: 0})
    w1, w2 = S.piece_indices()[-1]
    seq = psi_map(S, w1, w2)
    assert phi_map(S, seq) == (w1, w2)
    bad = [State(st.n, st.J1, st.J2p, st.w1, W.longest_element()) for st in seq]
    with pytest.raises(InvalidSequence):
        check_sequence(S, bad)


def test_a2_orbit_pieces_oracle():
    W = build_system("A2")
    pieces = wj_orbit_decomposition(W, {0: 0})
    got = {(W.format(p.w), tuple(sorted(p.I))): sorted(W.format(x) for x in p.members) for p in pieces}
    assert got == {
        ("e", (0,)): ["1", "e"],
        ("2", ()): ["1,2,1", "2"],
        ("1,2", ()): ["1,2", "2,1"],
    }


@pytest.mark.parametrize("spec,mapping", [("A2", {0: 0}), ("A3", {0: 1, 1: 2}), ("B3", {0: 0, 1: 1}),
                                          ("A2", {0: 1, 1: 0}), ("B2", {})])
def test_orbit_pieces(spec, mapping):
    for v in verify_orbit_pieces(build_system(spec), mapping, spec):
        assert v.passed, v.to_json()


def test_pieces_partition_and_projection_is_nonincreasing():
    W = build_system("A3")
    S = product_setting(W, {0: 1, 1: 2})
    pieces = decompose_pieces(S)
    assert sum(len(p.members) for p in pieces) == S.size
    for p in range(0, S.size, 7):
        idx, chain = pi_projection(S, *S.decode(p))
        assert chain.is_nonincreasing()
        assert S.is_index(*idx)


def test_recursive_I_matches_brute_force_b2():
    for S in settings_of("B2", "B2"):
        for w1, w2 in S.piece_indices():
            assert compute_I(S, w1, w2) == compute_I_brute(S, w1, w2)


def test_class_bijection_counts():
    W = build_system("A2")
    S = product_setting(W, {0: 0, 1: 1})
    total = 0
    for w1, w2 in S.piece_indices():
        _, pairs = piece_class_bijection(S, w1, w2)
        total += len(pairs)
    assert total == len(S.orbits)


def test_all_sequences_match_indices_count():
    W = build_system("B2")
    S = product_setting(W, {0: 0})
    assert len(all_sequences(S)) == len(S.piece_indices())


@pytest.mark.parametrize("a,b", [("A2", "A2"), ("A1", "B2")])
def test_distinguished_exhaustive(a, b):
    for S in settings_of(a, b):
        rep = distinguished_analysis(S)
        assert rep.passed, [v.to_json() for v in rep.verdicts if not v.passed]
