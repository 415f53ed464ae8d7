import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multiperm.blurred import Partition
from multiperm.dsm import dsm_closure, dsm_inverse, group_closure
from multiperm.errors import CapExceeded, DimensionError
from multiperm.galois import (FiniteRelation, FiniteStructure, automorphisms, classify,
                              coding_tuples, complement_structure, group_witness,
                              invariant_relations, is_full_coding, is_she_complementative,
                              preserves, she_set, she_set_of_array, witness_array,
                              witness_relation, witness_shes)
from multiperm.monoid import monoid_table
from multiperm.relcore import Permutation, identity, inverse, parse

from conftest import random_multiperm

P = parse
SWAP = FiniteStructure.of(2, E=[(1, 2), (2, 1)])
DIRECTED = FiniteStructure.of(2, E=[(1, 1), (1, 2)])


def all_binary(n=2):
    pairs = list(product(range(1, n + 1), repeat=2))
    for mask in range(1 << len(pairs)):
        ts = [p for k, p in enumerate(pairs) if mask >> k & 1]
        yield FiniteStructure(n, (FiniteRelation("E", 2, frozenset(ts)),))


def test_preserves_examples():
    R = SWAP.relations[0]
    assert preserves(identity(2), R)
    assert not preserves(P("12|12"), R)
    assert preserves(P("2|1"), R)


@given(st.integers(0, 2 ** 9 - 1))
def test_identity_preserves_anything(mask):
    R = np.array([mask >> k & 1 for k in range(9)], dtype=bool).reshape(3, 3)
    assert preserves(identity(3), R)


def test_preserves_dimension_mismatch():
    with pytest.raises(DimensionError):
        preserves(identity(3), np.ones((2, 2), dtype=bool))


def test_structure_validation():
    with pytest.raises(ValueError):
        FiniteStructure(2, (FiniteRelation("E", 2, frozenset({(1, 3)})),))
    with pytest.raises(ValueError):
        FiniteStructure(2, (FiniteRelation("E", 1, frozenset()),) * 2)
    with pytest.raises(ValueError):
        FiniteStructure(2, (FiniteRelation("E", 0, frozenset()),))


def test_structure_json_round_trip():
    assert FiniteStructure.from_json(DIRECTED.to_json()) == DIRECTED


def test_she_set_examples():
    assert set(she_set(FiniteStructure(3))) == set(monoid_table(3))
    assert set(she_set(SWAP)) == {P("1|2"), P("2|1")}
    assert set(she_set(DIRECTED)) == {P("1|2"), P("1|12")}


def test_she_set_cap():
    with pytest.raises(CapExceeded):
        she_set(FiniteStructure(5), cap=4)


def test_complement_examples():
    empty = FiniteStructure(2, (FiniteRelation("E", 2, frozenset()),))
    assert complement_structure(empty).relations[0].tuples == set(product((1, 2), repeat=2))
    assert complement_structure(SWAP).relations[0].tuples == {(1, 1), (2, 2)}


def test_complement_swaps_to_inverse_everywhere_on_2():
    for B in all_binary():
        got = {inverse(f) for f in she_set(complement_structure(B))}
        assert set(she_set(B)) == got


def test_complementative_examples():
    assert is_she_complementative(FiniteStructure(2))
    assert is_she_complementative(SWAP)
    assert not is_she_complementative(DIRECTED)


def test_coding_tuples_of_f0():
    f0 = P("12|2|3")
    ts = coding_tuples(f0)
    assert len(ts) == 8
    assert [is_full_coding(t, f0) for t in ts] == [False] + [True] * 6 + [False]
    assert ts[0] == (1, 1, 1, 2, 2, 2, 3, 3, 3)
    assert ts[-1] == (2, 2, 2, 2, 2, 2, 3, 3, 3)


def test_witness_of_identity():
    W = witness_relation([identity(3)])
    assert W.tuples == {(1, 1, 1, 2, 2, 2, 3, 3, 3)}
    assert W.arity == 9


def test_witness_cap():
    with pytest.raises(CapExceeded):
        witness_relation([identity(4)])


def test_witness_shortcut_matches_generic():
    rng = random.Random(3)
    els = monoid_table(3).elements
    for _ in range(4):
        N = dsm_closure(rng.sample(els, 2), 3)
        W = witness_array(N.elements, 3)
        assert set(witness_shes(N.elements, 3)) == set(she_set_of_array(W, 3))


def test_witness_recovers_dsm_on_2():
    for gens in product(monoid_table(2).elements, repeat=2):
        N = dsm_closure(gens, 2)
        B = FiniteStructure(2, (witness_relation(N.elements, 2),))
        assert set(she_set(B)) == set(N)


def test_invariant_relations_examples():
    assert invariant_relations(monoid_table(2).elements, 1) == {frozenset(), frozenset({(1,), (2,)})}
    assert invariant_relations(monoid_table(3).elements, 1) == {
        frozenset(), frozenset({(1,), (2,), (3,)})}
    assert len(invariant_relations([identity(2)], 2)) == 16
    assert len(invariant_relations([identity(3)], 1)) == 8
    with pytest.raises(CapExceeded):
        invariant_relations([identity(3)], 3)


def test_inv_of_generators_equals_inv_of_dsm():
    rng = random.Random(5)
    els = monoid_table(2).elements
    for _ in range(20):
        F = rng.sample(els, rng.randint(1, 3))
        assert invariant_relations(F, 2) == invariant_relations(dsm_closure(F, 2).elements, 2)


def test_galois_monotone():
    rng = random.Random(6)
    els = monoid_table(2).elements
    for _ in range(30):
        F2 = rng.sample(els, rng.randint(1, 4))
        F1 = F2[:rng.randint(1, len(F2))]
        assert invariant_relations(F2, 2) <= invariant_relations(F1, 2)
    # a structure with more relations has fewer shes
    for _ in range(30):
        rels = []
        for name in "EFG":
            ts = {t for t in product((1, 2, 3), repeat=2) if rng.random() < 0.5}
            rels.append(FiniteRelation(name, 2, frozenset(ts)))
        k = rng.randint(0, 2)
        small, big = FiniteStructure(3, tuple(rels[:k])), FiniteStructure(3, tuple(rels))
        assert set(she_set(big)) <= set(she_set(small))


def test_growing_a_relation_is_not_monotone():
    # {} and [2]^2 are both preserved by everything, the single loop is not
    loops = [frozenset(), frozenset({(1, 1)}), frozenset(product((1, 2), repeat=2))]
    sizes = [len(she_set(FiniteStructure(2, (FiniteRelation("E", 2, t),)))) for t in loops]
    assert sizes == [7, 2, 7]


def test_group_closure_and_witness():
    s2 = group_closure([Permutation.parse("(1 2)")])
    assert len(s2) == 2
    R = group_witness(s2)
    assert R.tuples == {(1, 2), (2, 1)}
    assert automorphisms(FiniteStructure(2, (R,))) == set(s2)


def test_group_witness_recovers_group_on_4():
    rng = random.Random(8)
    perms = Permutation.all(4)
    for _ in range(40):
        G = group_closure(rng.sample(perms, rng.randint(1, 3)))
        assert automorphisms(FiniteStructure(4, (group_witness(G),))) == set(G)


def test_classify_examples():
    assert classify(FiniteStructure(2)).verdict == "Logspace"
    v = classify(SWAP)
    assert v.verdict == "PspaceComplete"
    assert v.witness["full_symmetric"] is True
    v = classify(DIRECTED)
    assert v.verdict == "NotSheComplementative"
    assert v.witness == {"she": "1|12", "inverse_missing": "12|2"}


def test_classify_verdict_justified():
    for B in all_binary():
        v = classify(B)
        S = she_set(B)
        if v.verdict == "NotSheComplementative":
            assert dsm_inverse(S) != S
        else:
            assert dsm_inverse(S) == S
            assert (v.verdict == "Logspace") == (Partition.parse(v.witness["partition"]).m == 1)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_she_set_is_dsm(rng):
    ts = {t for t in product((1, 2, 3), repeat=2) if rng.random() < 0.4}
    B = FiniteStructure(3, (FiniteRelation("E", 2, frozenset(ts)),))
    she_set(B, check=True)
