"""Finite cap windows of the infinite bases, plus seeded random sampling.

A window keeps every basis monomial whose polynomial powers lie in
``[min_poly, max_poly]`` and whose exponential coefficients satisfy
``|a| <= max_exp``.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass
from fractions import Fraction

from .core import AlgebraSignature, Element, Family, PolyDomain
from .errors import CapTooLarge

DEFAULT_MAX_WINDOW = 20000


def max_window() -> int:
    return int(os.environ.get("LIEEXP_MAX_WINDOW", DEFAULT_MAX_WINDOW))


@dataclass(frozen=True)
class TruncationCaps:
    max_poly: int
    min_poly: int = 0
    max_exp: int = 0

    def __post_init__(self):
        if self.max_poly < 0 or self.max_exp < 0:
            raise ValueError("caps must be non-negative")
        if self.min_poly > self.max_poly:
            raise ValueError("min_poly exceeds max_poly")

    @classmethod
    def for_signature(cls, sig: AlgebraSignature, poly_cap: int = 0, exp_cap: int = 0):
        low = -poly_cap if sig.poly_domain is PolyDomain.INTEGERS else 0
        if sig.poly_free:
            poly_cap = low = 0
        return cls(poly_cap, low, exp_cap if sig.M else 0)

    def as_dict(self):
        return {"max_poly": self.max_poly, "min_poly": self.min_poly, "max_exp": self.max_exp}


class Window:
    """The cap-window basis of ``sig`` as an ordered list of monomial keys."""

    def __init__(self, sig: AlgebraSignature, caps: TruncationCaps, limit: int = None):
        self.sig = sig
        self.caps = caps
        size = self.predicted_size(sig, caps)
        limit = max_window() if limit is None else limit
        if size > limit:
            raise CapTooLarge(f"window of {size} monomials exceeds limit {limit} (LIEEXP_MAX_WINDOW)")
        self.keys = list(self._enumerate())
        self.index = {k: i for i, k in enumerate(self.keys)}

    @staticmethod
    def _ranges(sig, caps):
        exp_r = range(-caps.max_exp, caps.max_exp + 1)
        poly_r = range(0, 1) if sig.poly_free else range(caps.min_poly, caps.max_poly + 1)
        derivs = list(range(sig.n)) if sig.is_witt else [None]
        return exp_r, poly_r, derivs

    @classmethod
    def predicted_size(cls, sig, caps) -> int:
        exp_r, poly_r, derivs = cls._ranges(sig, caps)
        size = len(exp_r) ** sig.M * len(poly_r) ** sig.nvars * len(derivs)
        if sig.quotient:
            size -= 1
        return size

    def _enumerate(self):
        sig = self.sig
        exp_r, poly_r, derivs = self._ranges(sig, self.caps)
        const = sig.constant_key
        for exp in itertools.product(exp_r, repeat=sig.M):
            for poly in itertools.product(poly_r, repeat=sig.nvars):
                for d in derivs:
                    key = (exp, poly, d)
                    if sig.quotient and key == const:
                        continue
                    yield key

    def __len__(self):
        return len(self.keys)

    def __contains__(self, key):
        return key in self.index

    def __iter__(self):
        return iter(self.keys)

    def elements(self):
        return [Element(self.sig, {k: 1}, _trusted=True) for k in self.keys]

    def contains_element(self, el: Element) -> bool:
        return all(k in self.index for k in el.data)

    def describe(self) -> str:
        return f"all {len(self)} basis monomials of {self.sig} within {self.caps.as_dict()}"


# -- sampling -------------------------------------------------------------------


def random_key(sig, caps: TruncationCaps, rng: random.Random, exp=None):
    if exp is None:
        exp = tuple(rng.randint(-caps.max_exp, caps.max_exp) for _ in range(sig.M))
    if sig.poly_free:
        poly = sig.zero_poly
    else:
        poly = tuple(rng.randint(caps.min_poly, caps.max_poly) for _ in range(sig.nvars))
    d = rng.randrange(sig.n) if sig.is_witt else None
    return (exp, poly, d)


def random_coeff(rng: random.Random, max_coeff: int = 3, fractions: bool = False):
    c = 0
    while c == 0:
        c = rng.randint(-max_coeff, max_coeff)
    if fractions and rng.random() < 0.3:
        return Fraction(c, rng.randint(1, max_coeff))
    return c


def random_element(sig, caps, rng, max_terms=4, max_coeff=3, homogeneous=False,
                   exp=None, nonzero=True, fractions=False) -> Element:
    """Random element with at most ``max_terms`` terms and ``|coeff| <= max_coeff``.

    Divergence-free signatures get elements built from Hamiltonian-style
    pairs so that they actually lie in the algebra.
    """
    if sig.family is Family.S_DIVFREE:
        return _random_divfree(sig, caps, rng, max_terms, max_coeff)
    while True:
        if homogeneous and exp is None:
            exp = tuple(rng.randint(-caps.max_exp, caps.max_exp) for _ in range(sig.M))
        data: dict = {}
        for _ in range(rng.randint(1, max_terms)):
            key = random_key(sig, caps, rng, exp)
            data[key] = data.get(key, 0) + random_coeff(rng, max_coeff, fractions)
        el = Element(sig, data)
        if el or not nonzero:
            return el


def _random_divfree(sig, caps, rng, max_terms, max_coeff):
    """Sum of fields c*(d_s(m) D_t - d_t(m) D_s) for random monomials m; each is divergence-free."""
    from .core import dfunc, merge

    n = sig.n
    while True:
        acc: dict = {}
        for _ in range(rng.randint(1, max_terms)):
            if n == 1:
                # only constant multiples of D1 are divergence-free in one variable
                merge(acc, {((), (0,), 0): random_coeff(rng, max_coeff)})
                continue
            s, t = rng.sample(range(n), 2)
            poly = tuple(rng.randint(0, caps.max_poly + 1) for _ in range(n))
            c = random_coeff(rng, max_coeff)
            for c2, p2 in dfunc(sig, c, (), poly, s):
                merge(acc, {((), p2, t): c2})
            for c2, p2 in dfunc(sig, c, (), poly, t):
                merge(acc, {((), p2, s): -c2})
        el = Element(sig, acc)
        if el:
            return el
