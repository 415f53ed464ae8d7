import json
import random

import numpy as np
import pytest

from multiperm import _bits
from multiperm.monoid import monoid_table
from multiperm.relcore import (BoolVec, Permutation, Relation, identity, inverse, is_sub,
                               parse, then)
from multiperm.regular import (_guard, brute_inverses, brute_inverses_bn, greatest_inverse,
                               has_inverse_in_Mn, identification_vectors, is_inverse,
                               kim_roush_inverse, kim_roush_inverses, p_value, row_basis,
                               schein_regular)

P = parse
V = BoolVec.parse


def test_schein_examples():
    assert schein_regular(identity(3))
    assert schein_regular(P("12|3|123"))
    assert schein_regular(P("2|23|1"))


def test_greatest_inverse_examples():
    p = Permutation.parse("(1 2 3)").to_relation()
    assert greatest_inverse(p) == inverse(p).as_relation()
    g = greatest_inverse(P("2|23|1"))
    assert is_sub(P("3|1|12"), g) and is_sub(P("3|1|2"), g)


def test_no_multipermutation_below_greatest_inverse():
    a = P("123|23|1")
    g = greatest_inverse(a)
    below = [Relation.from_code(3, c) for c in range(512)
             if Relation.from_code(3, c) <= g]
    inverses = [x for x in below if is_inverse(a, x)]
    assert inverses and not any(x.is_multipermutation() for x in inverses)


def test_row_basis_examples():
    rb = row_basis(P("2|23|1"))
    assert rb.basis == {V("010"), V("011"), V("100")} and rb.equals_row_set
    rb = row_basis(P("123|23|1"))
    assert rb.basis == {V("011"), V("100")} and not rb.equals_row_set
    assert row_basis(identity(4)).basis == {BoolVec.unit(4, j) for j in range(4)}


def test_identification_examples():
    a = P("2|23|1")
    assert identification_vectors(a, V("010")) == {V("010")}
    assert identification_vectors(a, V("011")) == {V("001")}
    assert identification_vectors(a, V("100")) == {V("100")}
    with pytest.raises(ValueError):
        identification_vectors(a, V("111"))


def test_p_value():
    assert p_value(P("1|1|23"), V("001")) == V("011")
    with pytest.raises(ValueError):
        p_value(P("1|1|23"), V("011"))


def test_no_t_left_in_worked_example():
    _, trace = kim_roush_inverses(P("2|23|1"), trace=True)
    assert trace.t_values == {}


def test_kim_roush_worked_example():
    found = kim_roush_inverses(P("2|23|1"))
    assert found == {P("001 100 110"), P("001 100 010")}
    assert found == brute_inverses(P("2|23|1"))


def test_kim_roush_no_mn_inverse():
    a = P("123|23|1")
    assert kim_roush_inverses(a) == set()
    bn = kim_roush_inverses(a, within="B")
    assert {str(x) for x in bn} == {"3|2|", "3|2|2", "3||2"}
    assert bn == brute_inverses_bn(a)


def test_kim_roush_identity():
    assert kim_roush_inverses(identity(3)) == {identity(3)}


def test_deterministic_variant():
    assert kim_roush_inverse(P("2|23|1")) == P("001 100 110")
    assert kim_roush_inverse(P("123|23|1")) is None


def test_trace_json():
    _, trace = kim_roush_inverses(P("2|23|1"), trace=True)
    data = json.loads(trace.to_json())
    assert sorted(data["basis"]) == ["010", "011", "100"]
    assert data["identification"]["011"] == ["001"]
    assert sorted(data["emitted"]) == ["3|1|12", "3|1|2"]


def test_inverse_test_examples():
    assert has_inverse_in_Mn(P("2|23|1"))
    v = has_inverse_in_Mn(P("12|3|123"))
    assert not v and "basis" in v.reason
    v = has_inverse_in_Mn(P("123|23|1"))
    assert not v and "basis" in v.reason


def test_brute_examples():
    assert brute_inverses(P("12|3|123")) == set()
    for p in Permutation.all(3):
        r = p.to_relation()
        assert inverse(r) in brute_inverses(r)


def test_m3_exhaustive():
    t = monoid_table(3)
    regular = 0
    for a in t:
        brute = brute_inverses(a, t)
        kr = kim_roush_inverses(a)
        assert kr <= brute
        assert all(x.is_multipermutation() and is_inverse(a, x) for x in kr)
        assert kr == brute  # measured equality at n = 3
        assert bool(has_inverse_in_Mn(a)) == bool(brute)
        if not row_basis(a).equals_row_set:
            assert not brute
        regular += bool(brute)
    assert regular == 169


def test_greatest_inverse_is_greatest_b3():
    codes = np.arange(512, dtype=_bits.DTYPE)
    for c in range(512):
        rho = Relation.from_code(3, c)
        if not schein_regular(rho):
            continue
        g, guard = greatest_inverse(rho), _guard(rho)
        assert is_inverse(rho, g) and then(then(g, rho), g) == g
        xr = _bits.left_mul(rho.rows, codes, 3)
        for x in codes[_bits.right_mul(xr, rho.rows, 3) == rho.code]:
            x = Relation.from_code(3, int(x))
            # every solution of rho x rho = rho sits below the guard ...
            assert x <= guard
            # ... and every two-sided inverse below the displayed relation
            if then(then(x, rho), x) == x:
                assert x <= g


def test_schein_matches_brute_b3():
    codes = np.arange(512, dtype=_bits.DTYPE)
    for c in range(0, 512, 3):
        rho = Relation.from_code(3, c)
        xr = _bits.left_mul(rho.rows, codes, 3)
        regular = bool(np.any(_bits.right_mul(xr, rho.rows, 3) == rho.code))
        assert schein_regular(rho) == regular


def test_criterion_breaks_at_n4():
    """Row basis smaller than the row set, yet an M_4 inverse exists."""
    a, x = P("14|1234|4|1"), P("4|1234|1234|3")
    assert not row_basis(a).equals_row_set
    assert not has_inverse_in_Mn(a)
    assert is_inverse(a, x) and x.is_multipermutation()
