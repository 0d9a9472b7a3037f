"""Grade keys, homogeneous decomposition, the two lexicographic orders and
the element statistics (w_h, T, hp, h_h, lp)."""

from __future__ import annotations

from typing import Dict

from .core import AlgebraSignature, Element, Monomial, order_key
from .errors import EmptyElement, SignatureMismatch

GradeKey = tuple


def grade_key(m, sig: AlgebraSignature = None) -> GradeKey:
    """Exponential-coefficient vector of a monomial (or of a homogeneous element)."""
    if isinstance(m, Element):
        keys = {k[0] for k in m.data}
        if len(keys) != 1:
            raise SignatureMismatch("grade_key needs a nonzero homogeneous element")
        return next(iter(keys))
    if sig is not None:
        sig.check_key(m.key)
    return m.exp


def decompose(l: Element) -> Dict[GradeKey, Element]:
    """Split ``l`` into homogeneous components, ordered by descending grade key."""
    parts: dict = {}
    for key, c in l.data.items():
        parts.setdefault(key[0], {})[key] = c
    return {g: Element(l.sig, parts[g], _trusted=True) for g in sorted(parts, reverse=True)}


def _cmp(x, y) -> int:
    return (x > y) - (x < y)


def compare_o(m1: Monomial, m2: Monomial, sig: AlgebraSignature = None) -> int:
    """Witt-side order: (exponential coefficients, powers, derivation index)."""
    if m1.deriv is None or m2.deriv is None:
        raise SignatureMismatch("compare_o needs Witt-type monomials")
    if len(m1.exp) != len(m2.exp) or len(m1.poly) != len(m2.poly):
        raise SignatureMismatch("monomials from different signatures")
    if sig is not None and not sig.is_witt:
        raise SignatureMismatch(f"{sig} is not Witt-type")
    return _cmp(order_key(m1.key), order_key(m2.key))


def compare_h(m1: Monomial, m2: Monomial, sig: AlgebraSignature = None) -> int:
    """Poisson-side order: (a-vector, b-vector, x-powers, y-powers)."""
    if m1.deriv is not None or m2.deriv is not None:
        raise SignatureMismatch("compare_h needs Poisson-type monomials")
    if len(m1.exp) != len(m2.exp) or len(m1.poly) != len(m2.poly):
        raise SignatureMismatch("monomials from different signatures")
    if sig is not None and sig.is_witt:
        raise SignatureMismatch(f"{sig} is not Poisson-type")
    return _cmp((m1.exp, m1.poly), (m2.exp, m2.poly))


def compare(m1: Monomial, m2: Monomial) -> int:
    return compare_h(m1, m2) if m1.deriv is None else compare_o(m1, m2)


def stat_wh(l: Element) -> int:
    return len({k[0] for k in l.data})


stat_hh = stat_wh


def stat_T(l: Element, g: GradeKey) -> int:
    g = tuple(g)
    return sum(1 for k in l.data if k[0] == g)


def max_power(l: Element) -> int:
    """Largest polynomial power occurring in ``l``.

    Only nonzero powers occur in a term; a term without polynomial factors
    contributes 0.
    """
    if l.is_zero():
        raise EmptyElement("statistic undefined on the zero element")
    best = None
    for _, poly, _ in l.data:
        occurring = [j for j in poly if j]
        top = max(occurring) if occurring else 0
        if best is None or top > best:
            best = top
    return best


def stat_hp(l: Element) -> int:
    return max_power(l)


def stat_lp(l: Element) -> int:
    return max_power(l)


def has_zero_component(l: Element) -> bool:
    z = l.sig.zero_exp
    return any(k[0] == z for k in l.data)


def max_grade(l: Element) -> GradeKey:
    if l.is_zero():
        raise EmptyElement("zero element has no grade")
    return max(k[0] for k in l.data)


def stats(l: Element) -> dict:
    """Summary used by tactic traces and the ``stats`` command."""
    count = stat_wh(l)
    out = {"terms": len(l), "components": count}
    if l.sig.is_witt:
        out["w_h"] = count
        out["hp"] = stat_hp(l) if l else None
    else:
        out["h_h"] = count
        out["lp"] = stat_lp(l) if l else None
    out["max_grade"] = list(max_grade(l)) if l else None
    return out
