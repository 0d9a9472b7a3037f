import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lieexp.parsing import parse_element, parse_signature
from lieexp.window import TruncationCaps, random_element

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# algebra string, poly cap, exp cap
ALGEBRAS = [
    ("W(1)", 3, 0),
    ("W(2)", 2, 0),
    ("W(1,{1})", 2, 2),
    ("W(2,{1,2})", 2, 1),
    ("W+(1)", 3, 0),
    ("S(3)", 2, 0),
    ("H(1)", 3, 0),
    ("H(2)", 2, 0),
    ("H(1,1)", 2, 2),
    ("Hbar(1,1)", 2, 1),
    ("H(1,0)", 0, 2),
    ("Hbar(2,0)", 0, 1),
    ("H(1,1; x1:[1,2])", 2, 1),
]


def setup(name, P=None, A=None):
    sig = parse_signature(name)
    for n, p, a in ALGEBRAS:
        if n == name:
            P = p if P is None else P
            A = a if A is None else A
    return sig, TruncationCaps.for_signature(sig, P or 0, A or 0)


def elements(name, n=1, max_terms=4, **kw):
    """Strategy producing ``n`` random elements of the named algebra."""
    sig, caps = setup(name)

    def build(seed):
        rng = random.Random(seed)
        out = [random_element(sig, caps, rng, max_terms=max_terms, fractions=True, **kw) for _ in range(n)]
        return out[0] if n == 1 else tuple(out)

    return st.integers(0, 2**32).map(build)


@pytest.fixture
def P():
    """Parse helper: P("x1 D1", "W(1)")."""
    return lambda text, alg: parse_element(text, parse_signature(alg))
