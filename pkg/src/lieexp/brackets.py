"""Lie brackets: vector-field (Witt) bracket, Poisson bracket, Hamiltonian
fields and divergence."""

from __future__ import annotations

import enum
import operator

from .core import AlgebraSignature, Element, Family, dfunc, merge
from .errors import MissingDerivationSlot, SignatureMismatch


class BracketKind(enum.Enum):
    WITT = "WITT"
    POISSON = "POISSON"


def bracket_kind(sig: AlgebraSignature) -> BracketKind:
    return BracketKind.WITT if sig.is_witt else BracketKind.POISSON


def _same(a: Element, b: Element) -> AlgebraSignature:
    if a.sig != b.sig:
        raise SignatureMismatch(f"{a.sig} vs {b.sig}")
    return a.sig


def _addto(acc, key, c):
    s = acc.get(key, 0) + c
    if s:
        acc[key] = s
    else:
        del acc[key]


def witt_bracket_raw(sig, a: dict, b: dict) -> dict:
    """[f D_p, g D_q] = f D_p(g) D_q - g D_q(f) D_p, extended bilinearly."""
    acc: dict = {}
    for (fe, fp, p), fc in a.items():
        for (ge, gp, qq), gc in b.items():
            exp = tuple(x + y for x, y in zip(fe, ge)) if fe else fe
            # f * D_p(g) D_q
            for c, gp2 in dfunc(sig, gc, ge, gp, p):
                _addto(acc, (exp, tuple(x + y for x, y in zip(fp, gp2)), qq), fc * c)
            # - g * D_q(f) D_p
            for c, fp2 in dfunc(sig, fc, fe, fp, qq):
                _addto(acc, (exp, tuple(x + y for x, y in zip(gp, fp2)), p), -gc * c)
    return acc


def poisson_bracket_raw(sig, a: dict, b: dict) -> dict:
    """{f,g} = sum_i (df/dx_i dg/dy_i - df/dy_i dg/dx_i), extended bilinearly."""
    n = sig.n
    acc: dict = {}
    for (fe, fp, _), fc in a.items():
        fder = [dfunc(sig, fc, fe, fp, v) for v in range(2 * n)]
        for (ge, gp, _), gc in b.items():
            exp = tuple(x + y for x, y in zip(fe, ge)) if fe else fe
            for i in range(n):
                fx, fy = fder[i], fder[n + i]
                if fx:
                    gy = dfunc(sig, gc, ge, gp, n + i)
                    for c1, p1 in fx:
                        for c2, p2 in gy:
                            _addto(acc, (exp, tuple(x + y for x, y in zip(p1, p2)), None), c1 * c2)
                if fy:
                    gx = dfunc(sig, gc, ge, gp, i)
                    for c1, p1 in fy:
                        for c2, p2 in gx:
                            _addto(acc, (exp, tuple(x + y for x, y in zip(p1, p2)), None), -c1 * c2)
    return acc


def witt_bracket(a: Element, b: Element) -> Element:
    sig = _same(a, b)
    if not sig.is_witt:
        raise MissingDerivationSlot(f"{sig} is not a Witt-type algebra")
    return Element(sig, witt_bracket_raw(sig, a.data, b.data), _trusted=True)


def poisson_bracket(f: Element, g: Element) -> Element:
    sig = _same(f, g)
    if sig.is_witt:
        raise SignatureMismatch(f"{sig} is not a Poisson-type algebra")
    return Element(sig, poisson_bracket_raw(sig, f.data, g.data), _trusted=True)


def bracket_raw(sig, a: dict, b: dict) -> dict:
    if sig.is_witt:
        return witt_bracket_raw(sig, a, b)
    out = poisson_bracket_raw(sig, a, b)
    if sig.quotient:
        out.pop(sig.constant_key, None)
    return out


def bracket(a: Element, b: Element) -> Element:
    """Dispatch on the bracket kind of the common signature.

    For quotient signatures the constant part is dropped (Element does this).
    """
    sig = _same(a, b)
    return Element(sig, bracket_raw(sig, a.data, b.data), _trusted=True)


def ad(z: Element):
    return lambda x: bracket(z, x)


def jacobi_residual(a: Element, b: Element, c: Element) -> Element:
    _same(a, b)
    _same(b, c)
    return bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))


def hamiltonian_target(sig: AlgebraSignature) -> AlgebraSignature:
    if sig.family is not Family.H_POLY:
        raise SignatureMismatch(f"Hamiltonian fields are built from H(n) elements, not {sig}")
    return AlgebraSignature.witt(2 * sig.n)


def hamiltonian_field(u: Element) -> Element:
    """-sum_i (du/dy_i) D_{x_i} + sum_i (du/dx_i) D_{y_i} in W(2n), with y_i = x_{n+i}."""
    sig = u.sig
    target = hamiltonian_target(sig)
    n = sig.n
    acc: dict = {}
    for (e, p, _), c in u.data.items():
        for i in range(n):
            for c2, p2 in dfunc(sig, c, e, p, n + i):
                _addto(acc, ((), p2, i), -c2)
            for c2, p2 in dfunc(sig, c, e, p, i):
                _addto(acc, ((), p2, n + i), c2)
    return Element(target, acc, _trusted=True)


def divergence(a: Element) -> Element:
    """sum_t d(f_t)/dx_t for a = sum_t f_t D_t, as a slot-free :class:`Function`."""
    sig = a.sig
    if not sig.is_witt:
        raise SignatureMismatch(f"divergence needs a Witt-type element, got {sig}")
    acc: dict = {}
    for (e, p, t), c in a.data.items():
        for c2, p2 in dfunc(sig, c, e, p, t):
            _addto(acc, (e, p2, None), c2)
    return Function(sig, acc)


def is_divergence_free(a: Element) -> bool:
    return divergence(a).is_zero()


class Function:
    """A coefficient function (no derivation slot) attached to a Witt signature.

    Only produced by :func:`divergence`; supports equality and printing.
    """

    __slots__ = ("sig", "data")

    def __init__(self, sig, data):
        self.sig = sig
        self.data = data

    def is_zero(self):
        return not self.data

    def __bool__(self):
        return bool(self.data)

    def __eq__(self, other):
        if isinstance(other, Function):
            return self.sig == other.sig and self.data == other.data
        if isinstance(other, int) and other == 0:
            return not self.data
        return NotImplemented

    def __hash__(self):
        return hash((self.sig, frozenset(self.data.items())))

    def __str__(self):
        from .parsing import print_terms

        return print_terms(self.sig, self.data)

    __repr__ = __str__


def scaled_sum(sig, parts) -> Element:
    acc: dict = {}
    for coef, el in parts:
        merge(acc, el.data, coef)
    return Element(sig, acc, _trusted=True)


# -- fast path: many monomials against one fixed vector -------------------------------


def _vadd(a, b):
    return tuple(map(operator.add, a, b))


class PreparedVector:
    """A sparse vector with its derivatives cached, for repeated brackets
    ``[m, v]`` with single monomials ``m``.

    ``bracket_monomial(key)`` returns the same dict as
    ``bracket_raw(sig, {key: 1}, v)`` but avoids re-differentiating ``v``.
    """

    def __init__(self, sig: AlgebraSignature, vec: dict):
        self.sig = sig
        self.vec = vec
        if sig.is_witt:
            self.dv = {}
            self.slot = {}
            for (e, p, q), c in vec.items():
                self.slot.setdefault(q, []).append((e, p, c))
            for v in range(sig.n):
                self.dv[v] = [(e, p2, q, c2) for (e, p, q), c in vec.items()
                              for c2, p2 in dfunc(sig, c, e, p, v)]
        else:
            self.dv = [[(e, p2, c2) for (e, p, _), c in vec.items()
                        for c2, p2 in dfunc(sig, c, e, p, v)] for v in range(sig.nvars)]

    def bracket_monomial(self, key) -> dict:
        sig = self.sig
        me, mp, p = key
        acc: dict = {}
        if sig.is_witt:
            for e, p2, q, c in self.dv[p]:
                _addto(acc, (_vadd(me, e) if me else me, _vadd(mp, p2), q), c)
            for q, items in self.slot.items():
                for c1, p1 in dfunc(sig, 1, me, mp, q):
                    for e, pp, c in items:
                        _addto(acc, (_vadd(me, e) if me else me, _vadd(p1, pp), p), -c1 * c)
            return acc
        n = sig.n
        for i in range(n):
            for mv, vv, sign in ((i, n + i, 1), (n + i, i, -1)):
                mder = dfunc(sig, sign, me, mp, mv)
                if not mder:
                    continue
                for e, p2, c in self.dv[vv]:
                    ek = _vadd(me, e) if me else me
                    for c1, p1 in mder:
                        _addto(acc, (ek, _vadd(p1, p2), None), c1 * c)
        if sig.quotient:
            acc.pop(sig.constant_key, None)
        return acc
