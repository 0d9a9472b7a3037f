"""Exponential-polynomial monomials and elements over the rationals.

A basis monomial is stored as a key ``(exp, poly, deriv)``:

* ``exp`` -- tuple of integer exponential coefficients, one slot per
  ``(variable, allowed power)`` pair, in the signature's slot order.  This
  tuple *is* the grade key.
* ``poly`` -- tuple of polynomial powers, one per variable (x-variables
  first, then y-variables for Poisson families).
* ``deriv`` -- 0-based index ``t`` of the derivation slot, or ``None`` for
  Poisson families.

An :class:`Element` is an immutable map ``key -> coefficient``; coefficients
are ``int`` or :class:`fractions.Fraction` and never zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Optional, Union

from .errors import DomainUnderflow, SignatureMismatch, SignatureViolation

Rational = Union[int, Fraction]
Key = tuple  # (exp, poly, deriv)


class Family(enum.Enum):
    W = "W"
    W_EXP = "W_EXP"
    W_PLUS1 = "W_PLUS1"
    H_POLY = "H_POLY"
    H_EXP_FULL = "H_EXP_FULL"
    H_EXP_ONLY = "H_EXP_ONLY"
    H_EXP_POWERS = "H_EXP_POWERS"
    S_DIVFREE = "S_DIVFREE"


class PolyDomain(enum.Enum):
    NATURALS = "NATURALS"
    INTEGERS = "INTEGERS"


WITT_FAMILIES = frozenset({Family.W, Family.W_EXP, Family.W_PLUS1, Family.S_DIVFREE})


def q(value) -> Rational:
    """Coerce to an exact rational, collapsing integral fractions to ``int``."""
    if isinstance(value, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        raise TypeError("floating-point coefficients are not supported")
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else value


@dataclass(frozen=True)
class AlgebraSignature:
    """Which algebra an element lives in.

    ``exp_powers`` holds one strictly increasing tuple of allowed powers per
    variable (x-variables then y-variables for Poisson families).  ``quotient``
    marks the centerless algebras (``Hbar``), whose elements never carry a
    constant term.
    """

    family: Family
    n: int
    exp_powers: tuple = ()
    poly_domain: PolyDomain = PolyDomain.NATURALS
    quotient: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise SignatureViolation("n must be a positive integer")
        if self.family is Family.W_PLUS1 and self.n != 1:
            raise SignatureViolation("W+(1) has exactly one variable")
        powers = tuple(tuple(int(p) for p in lst) for lst in self.exp_powers)
        if powers and len(powers) != self.nvars:
            raise SignatureViolation(
                f"expected {self.nvars} exponential power lists, got {len(powers)}")
        for lst in powers:
            if any(p < 1 for p in lst) or any(a >= b for a, b in zip(lst, lst[1:])):
                raise SignatureViolation(f"exponential powers {list(lst)} must be strictly increasing and >= 1")
        if self.quotient and self.is_witt:
            raise SignatureViolation("quotient applies to Poisson families only")
        object.__setattr__(self, "exp_powers", powers)

    # -- constructors -------------------------------------------------------

    @classmethod
    def witt(cls, n: int) -> "AlgebraSignature":
        return cls(Family.W, n)

    @classmethod
    def witt_exp(cls, powers) -> "AlgebraSignature":
        powers = tuple(tuple(p) for p in powers)
        return cls(Family.W_EXP, len(powers), powers)

    @classmethod
    def wplus1(cls) -> "AlgebraSignature":
        return cls(Family.W_PLUS1, 1)

    @classmethod
    def special(cls, n: int) -> "AlgebraSignature":
        return cls(Family.S_DIVFREE, n)

    @classmethod
    def poisson(cls, n: int, quotient: bool = False) -> "AlgebraSignature":
        return cls(Family.H_POLY, n, quotient=quotient)

    @classmethod
    def poisson_exp(cls, n: int, quotient: bool = False) -> "AlgebraSignature":
        return cls(Family.H_EXP_FULL, n, ((1,),) * (2 * n), PolyDomain.INTEGERS, quotient)

    @classmethod
    def poisson_exp_only(cls, n: int, quotient: bool = False) -> "AlgebraSignature":
        return cls(Family.H_EXP_ONLY, n, ((1,),) * (2 * n), PolyDomain.NATURALS, quotient)

    @classmethod
    def poisson_exp_powers(cls, powers, quotient: bool = False) -> "AlgebraSignature":
        """``powers`` lists x1..xn then y1..yn; a list of length n is reused for the y side."""
        powers = tuple(tuple(p) for p in powers)
        if len(powers) % 2:
            powers = powers + powers
        return cls(Family.H_EXP_POWERS, len(powers) // 2, powers, PolyDomain.INTEGERS, quotient)

    # -- derived data -------------------------------------------------------

    @property
    def is_witt(self) -> bool:
        return self.family in WITT_FAMILIES

    @property
    def is_poisson(self) -> bool:
        return not self.is_witt

    @property
    def nvars(self) -> int:
        return self.n if self.is_witt else 2 * self.n

    @property
    def poly_free(self) -> bool:
        """H(n,0) has purely exponential basis elements."""
        return self.family is Family.H_EXP_ONLY

    @cached_property
    def slots(self) -> tuple:
        """``(variable, power)`` for every grade-key component, in order."""
        return tuple((v, p) for v, lst in enumerate(self.exp_powers) for p in lst)

    @property
    def M(self) -> int:
        return len(self.slots)

    @cached_property
    def var_slots(self) -> tuple:
        out = [[] for _ in range(self.nvars)]
        for s, (v, p) in enumerate(self.slots):
            out[v].append((s, p))
        return tuple(tuple(x) for x in out)

    @cached_property
    def zero_exp(self) -> tuple:
        return (0,) * self.M

    @cached_property
    def zero_poly(self) -> tuple:
        return (0,) * self.nvars

    @cached_property
    def constant_key(self) -> Key:
        return (self.zero_exp, self.zero_poly, None)

    def var_name(self, v: int) -> str:
        if self.is_witt or v < self.n:
            return f"x{v + 1}"
        return f"y{v - self.n + 1}"

    def __str__(self):
        from .parsing import format_signature

        return format_signature(self)

    # -- validation ---------------------------------------------------------

    def check_key(self, key: Key) -> None:
        exp, poly, d = key
        if len(exp) != self.M or len(poly) != self.nvars:
            raise SignatureViolation(f"monomial shape does not match {self}")
        if self.poly_domain is PolyDomain.NATURALS and any(j < 0 for j in poly):
            raise SignatureViolation(f"negative polynomial power not allowed in {self}")
        if self.poly_free and any(poly):
            raise SignatureViolation(f"{self} has no polynomial parts")
        if self.is_witt:
            if d is None:
                from .errors import MissingDerivationSlot

                raise MissingDerivationSlot(f"{self} terms need a derivation slot")
            if not 0 <= d < self.n:
                raise SignatureViolation(f"derivation index {d + 1} out of range for {self}")
        elif d is not None:
            raise SignatureViolation(f"{self} terms carry no derivation slot")


@dataclass(frozen=True)
class Monomial:
    """One basis term ``coeff * prod e^{a x^i} * prod x^j [* D_t]``."""

    coeff: Rational
    exp: tuple
    poly: tuple
    deriv: Optional[int] = None

    @property
    def key(self) -> Key:
        return (self.exp, self.poly, self.deriv)


def order_key(key: Key):
    """Sort key realising both lexicographic orders (Witt and Poisson).

    Grade vector first, then polynomial powers, then the derivation index.
    For Poisson keys the derivation slot is ``None`` and never compared.
    """
    exp, poly, d = key
    return (exp, poly, -1 if d is None else d)


class Element:
    """Canonical finite sum of monomials; immutable after construction."""

    __slots__ = ("sig", "_data", "_hash", "_sorted")

    def __init__(self, sig: AlgebraSignature, data: dict, _trusted: bool = False):
        self.sig = sig
        if not _trusted:
            clean = {}
            for key, c in data.items():
                c = q(c)
                if c:
                    sig.check_key(key)
                    clean[key] = c
            data = clean
        if sig.quotient:
            data.pop(sig.constant_key, None)
        self._data = data
        self._hash = None
        self._sorted = None

    # -- construction helpers ------------------------------------------------

    @classmethod
    def zero(cls, sig: AlgebraSignature) -> "Element":
        return cls(sig, {}, _trusted=True)

    @classmethod
    def monomial(cls, sig, exp=None, poly=None, deriv=None, coeff=1) -> "Element":
        exp = sig.zero_exp if exp is None else tuple(exp)
        poly = sig.zero_poly if poly is None else tuple(poly)
        return cls(sig, {(exp, poly, deriv): coeff})

    @classmethod
    def from_key(cls, sig, key: Key, coeff=1) -> "Element":
        return cls(sig, {key: coeff})

    @classmethod
    def constant(cls, sig, c=1) -> "Element":
        return cls(sig, {sig.constant_key: c})

    # -- views ----------------------------------------------------------------

    @property
    def data(self) -> dict:
        """Read-only view is not enforced; treat as immutable."""
        return self._data

    def keys_sorted(self) -> list:
        if self._sorted is None:
            self._sorted = sorted(self._data, key=order_key, reverse=True)
        return self._sorted

    @property
    def terms(self) -> tuple:
        return tuple(Monomial(self._data[k], *k) for k in self.keys_sorted())

    def leading(self) -> Monomial:
        return self.terms[0]

    def coeff(self, key: Key) -> Rational:
        return self._data.get(key, 0)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.terms)

    def __len__(self):
        return len(self._data)

    def __bool__(self):
        return bool(self._data)

    def is_zero(self) -> bool:
        return not self._data

    # -- arithmetic -------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        if other.sig != self.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Element(self.sig, merge(dict(self._data), other._data), _trusted=True)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Element(self.sig, merge(dict(self._data), other._data, -1), _trusted=True)

    def __neg__(self):
        return Element(self.sig, {k: -c for k, c in self._data.items()}, _trusted=True)

    def __rmul__(self, c):
        if isinstance(c, Element):
            return NotImplemented
        return scale(c, self)

    def __mul__(self, c):
        if isinstance(c, Element):
            return NotImplemented
        return scale(c, self)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.sig == other.sig and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.sig, frozenset(self._data.items())))
        return self._hash

    def __repr__(self):
        from .parsing import print_element

        return f"Element({print_element(self)!r}, {self.sig})"

    def __str__(self):
        from .parsing import print_element

        return print_element(self)


def merge(acc: dict, other: dict, factor: Rational = 1) -> dict:
    """``acc += factor * other`` in place, dropping cancelled terms."""
    for k, c in other.items():
        v = acc.get(k, 0) + factor * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc


def normalize(raw: Iterable[Monomial], sig: AlgebraSignature) -> Element:
    """Merge like terms, drop zeros and validate every monomial against ``sig``."""
    acc: dict = {}
    for m in raw:
        key = m.key
        sig.check_key(key)
        c = acc.get(key, 0) + q(m.coeff)
        if c:
            acc[key] = c
        else:
            acc.pop(key, None)
    return Element(sig, {k: q(c) for k, c in acc.items()}, _trusted=True)


def add(a: Element, b: Element) -> Element:
    return a + b


def scale(c, a: Element) -> Element:
    c = q(c)
    if not c:
        return Element.zero(a.sig)
    return Element(a.sig, {k: q(v * c) for k, v in a._data.items()}, _trusted=True)


def equal(a: Element, b: Element) -> bool:
    if a.sig != b.sig:
        raise SignatureMismatch(f"{a.sig} vs {b.sig}")
    return a._data == b._data


def _bump(t: tuple, i: int, delta: int) -> tuple:
    if not delta:
        return t
    lst = list(t)
    lst[i] += delta
    return tuple(lst)


def dfunc(sig: AlgebraSignature, c, exp: tuple, poly: tuple, v: int) -> list:
    """Derivative of ``c * e^{...} x^{poly}`` in variable ``v``.

    Returns ``[(coeff, poly')]``; the exponential part is unchanged.
    Product rule: every ``e^{a x_v^i}`` contributes ``a*i*x_v^{i-1}``
    and the power ``x_v^j`` contributes ``j*x_v^{-1}``.
    """
    out = []
    for s, p in sig.var_slots[v]:
        a = exp[s]
        if a:
            out.append((c * a * p, _bump(poly, v, p - 1)))
    j = poly[v]
    if j:
        if sig.poly_domain is PolyDomain.NATURALS and j < 0:
            raise DomainUnderflow(f"negative power {j} under NATURALS")
        out.append((c * j, _bump(poly, v, -1)))
    return out


def partial(v: int, m, sig: Optional[AlgebraSignature] = None) -> Element:
    """Partial derivative in variable ``v`` (0-based) of a monomial or element.

    The derivation slot, if any, is carried through untouched.
    """
    if isinstance(m, Monomial):
        if sig is None:
            raise SignatureMismatch("a bare Monomial needs its signature")
        items = [(m.key, m.coeff)]
    else:
        sig = m.sig
        items = m.data.items()
    if not 0 <= v < sig.nvars:
        raise SignatureViolation(f"variable index {v} out of range for {sig}")
    acc: dict = {}
    for (exp, poly, d), c in items:
        for c2, poly2 in dfunc(sig, c, exp, poly, v):
            k = (exp, poly2, d)
            s = acc.get(k, 0) + c2
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
    return Element(sig, acc, _trusted=True)
