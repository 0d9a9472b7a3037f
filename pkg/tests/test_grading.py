import random

import pytest
from hypothesis import given

from lieexp.brackets import bracket
from lieexp.errors import EmptyElement, SignatureMismatch
from lieexp.grading import (compare_h, compare_o, decompose, grade_key, has_zero_component, max_grade,
                            stat_hp, stat_hh, stat_lp, stat_T, stat_wh, stats)
from lieexp.parsing import parse_signature
from lieexp.window import random_element

from conftest import elements, setup

HOMOGENEOUS_EXAMPLE = ("e^{3*x1}*e^{4*x2}*x1^5*x2^7 + 5*e^{3*x1}*e^{4*x2}*x1^6*x2^-7 + 9*e^{4*x1}*x2^7", "H(2,2)")


def test_grade_key_examples(P):
    assert grade_key(P("e^{2*x1}*x1^3 D1", "W(1,{1})")) == (2,)
    assert grade_key(P("x1^5 D2", "W(2)")) == ()
    assert grade_key(P("e^{3*x1}*e^{-1*y1}*x1*y1^2", "H(1,1)")) == (3, -1)


def test_grade_key_needs_homogeneous(P):
    with pytest.raises(SignatureMismatch):
        grade_key(P("e^{x1} D1 + x1 D1", "W(1,{1})"))


def test_decompose_examples(P):
    comps = decompose(P("e^{x1} D1 + x1 D1", "W(1,{1})"))
    assert list(comps) == [(1,), (0,)]
    assert decompose(P("0", "W(1)")) == {}
    comps = decompose(P(*HOMOGENEOUS_EXAMPLE))
    assert [len(c) for c in comps.values()] == [1, 2]
    assert set(comps) == {(3, 4, 0, 0), (4, 0, 0, 0)}


def test_hh_and_lp_fixtures(P):
    assert stat_hh(P(*HOMOGENEOUS_EXAMPLE)) == 2
    assert stat_lp(P("e^{x1}*x2^7 + x1*x3^-1*x7^9", "H(7,7)")) == 9


def test_other_statistics(P):
    l = P("e^{x1}*x1^2 D1 + x1^3 D1 + 4*e^{x1} D1", "W(1,{1})")
    assert stat_wh(l) == 2
    assert stat_T(l, (1,)) == 2 and stat_T(l, (0,)) == 1
    assert stat_hp(l) == 3
    assert has_zero_component(l)
    assert max_grade(l) == (1,)
    assert stats(l) == {"terms": 3, "components": 2, "w_h": 2, "hp": 3, "max_grade": [1]}
    with pytest.raises(EmptyElement):
        stat_hp(P("0", "W(1)"))


def test_power_statistic_uses_occurring_powers(P):
    # negative powers only: the maximum over occurring powers is negative
    assert stat_lp(P("x1^-3*y1^-2", "H(1,1)")) == -2
    assert stat_lp(P("e^{x1}", "H(1,1)")) == 0


def test_order_examples(P):
    a = P("e^{x1} D1", "W(1,{1})").leading()
    b = P("x1^9 D1", "W(1,{1})").leading()
    assert compare_o(a, b) == 1 and compare_o(b, a) == -1 and compare_o(a, a) == 0
    c = P("x1 D1", "W(2)").leading()
    d = P("x1 D2", "W(2)").leading()
    assert compare_o(d, c) == 1
    f = P("e^{x1}*y1", "H(1,1)").leading()
    g = P("e^{x1}*x1", "H(1,1)").leading()
    assert compare_h(g, f) == 1
    with pytest.raises(SignatureMismatch):
        compare_h(a, b)
    with pytest.raises(SignatureMismatch):
        compare_o(f, g)


def _triples(name, count, seed):
    sig, caps = setup(name)
    rng = random.Random(seed)
    for _ in range(count):
        yield [random_element(sig, caps, rng, max_terms=1).leading() for _ in range(3)]


@pytest.mark.parametrize("name, cmp", [("W(2,{1,2})", compare_o), ("H(1,1)", compare_h)])
def test_order_laws(name, cmp):
    for a, b, c in _triples(name, 2000, 5):
        assert cmp(a, b) == -cmp(b, a)
        if cmp(a, b) == 0:
            assert a.key == b.key
        if cmp(a, b) >= 0 and cmp(b, c) >= 0:
            assert cmp(a, c) >= 0


@pytest.mark.parametrize("name", ["W(1,{1,2})", "H(1,1)", "H(1,1; x1:[1,2])"])
def test_grading_is_additive(name):
    sig, caps = setup(name)

    @given(elements(name, 2, homogeneous=True))
    def check(pair):
        a, b = pair
        out = bracket(a, b)
        if out:
            assert grade_key(out) == tuple(x + y for x, y in zip(grade_key(a), grade_key(b)))

    check()


@given(elements("H(1,1)"))
def test_decompose_sums_back(l):
    total = sum(decompose(l).values(), l - l)
    assert total == l
