import random
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from lieexp.linalg import EchelonSpace, ModularEchelonSpace, nullspace, to_residue


def test_echelon_basics():
    s = EchelonSpace()
    assert s.add({0: 2, 1: 4}) == 0
    assert s.rows[0] == {0: 1, 1: 2}
    assert s.add({0: 1, 1: 2}) is None
    assert s.add({1: 3}) == 1
    assert s.contains({0: 5})
    assert not s.contains({2: 1})


def test_rank_controls_pivot():
    s = EchelonSpace(rank=lambda c: -c)
    assert s.add({0: 1, 5: 1}) == 5


def test_nullspace_small():
    # x + y + z = 0, y - z = 0  ->  one-dimensional: (-2, 1, 1)
    basis = nullspace([{"x": 1, "y": 1, "z": 1}, {"y": 1, "z": -1}], ["x", "y", "z"])
    assert len(basis) == 1
    v = basis[0]
    assert v["x"] * 1 == -2 * v["z"] and v["y"] == v["z"]


vectors = st.lists(
    st.dictionaries(st.integers(0, 6), st.fractions(min_value=-5, max_value=5, max_denominator=4), max_size=5),
    max_size=9,
)


@given(vectors)
def test_nullspace_vectors_solve_system(rows):
    cols = list(range(7))
    basis = nullspace(rows, cols)
    for v in basis:
        for r in rows:
            assert sum(c * v.get(k, 0) for k, c in r.items()) == 0
    # rank-nullity
    s = EchelonSpace()
    for r in rows:
        if r:
            s.add(r)
    assert len(basis) + len(s) == len(cols)


@given(vectors, st.randoms(use_true_random=False))
def test_span_independent_of_insertion_order(rows, rnd):
    a, b = EchelonSpace(), EchelonSpace()
    for r in rows:
        a.add(r)
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    for r in shuffled:
        b.add(r)
    assert len(a) == len(b)
    assert all(b.contains(r) for r in rows) and all(a.contains(r) for r in shuffled)


@given(vectors)
def test_modular_screen_agrees_with_exact_rank(rows):
    exact, mod = EchelonSpace(), ModularEchelonSpace()
    for r in rows:
        e = exact.add(r) is not None
        m = mod.add(r) is not None
        # independence modulo p implies independence over Q
        assert e or not m
    assert len(mod) == len(exact)


def test_to_residue():
    p = 101
    assert to_residue(Fraction(1, 2), p) * 2 % p == 1
    assert to_residue(-3, p) == 98
