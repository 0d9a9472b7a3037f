"""Lossless JSON interchange for elements and reports.

An element is written as::

    {"terms": [{"coeff": "p/q", "exp": {"x1^1": 2}, "poly": {"x1": 3}, "d": 1}, ...],
     "algebra": "W(1; x1:[1])", "meta": {...}}

Only nonzero exponential coefficients and powers are listed; ``d`` is the
1-based derivation index, or null for Poisson elements.  Terms appear in
descending monomial order, so equal elements serialize identically.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .core import Element, order_key
from .errors import ParseError


def format_rational(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def term_to_json(sig, key, coeff) -> dict:
    exp, poly, d = key
    return {
        "coeff": format_rational(coeff),
        "exp": {f"{sig.var_name(v)}^{p}": exp[s] for s, (v, p) in enumerate(sig.slots) if exp[s]},
        "poly": {sig.var_name(v): j for v, j in enumerate(poly) if j},
        "d": None if d is None else d + 1,
    }


def terms_to_json(sig, data: dict) -> list:
    return [term_to_json(sig, k, data[k]) for k in sorted(data, key=order_key, reverse=True)]


def element_to_json(el, meta: dict = None) -> dict:
    """``el`` is an :class:`Element` or any object with ``sig`` and ``data`` (e.g. a divergence)."""
    from .parsing import format_signature, print_terms

    return {
        "terms": terms_to_json(el.sig, el.data),
        "algebra": format_signature(el.sig),
        "meta": {"text": print_terms(el.sig, el.data), **(meta or {})},
    }


def element_from_json(doc: dict, sig=None) -> Element:
    """Inverse of :func:`element_to_json`; the signature defaults to ``doc["algebra"]``."""
    from .parsing import parse_signature

    if sig is None:
        sig = parse_signature(doc["algebra"])
    names = {sig.var_name(v): v for v in range(sig.nvars)}
    slots = {f"{sig.var_name(v)}^{p}": s for s, (v, p) in enumerate(sig.slots)}
    data: dict = {}
    for t in doc["terms"]:
        exp = [0] * sig.M
        poly = [0] * sig.nvars
        try:
            for name, a in t.get("exp", {}).items():
                exp[slots[name]] = int(a)
            for name, j in t.get("poly", {}).items():
                poly[names[name]] = int(j)
        except KeyError as exc:
            raise ParseError(f"unknown factor {exc.args[0]!r} for {sig}") from None
        d = t.get("d")
        key = (tuple(exp), tuple(poly), None if d is None else int(d) - 1)
        data[key] = data.get(key, 0) + Fraction(t["coeff"])
    return Element(sig, data)


def dumps(doc) -> str:
    """Deterministic JSON text (insertion order kept, two-space indent, trailing newline)."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
