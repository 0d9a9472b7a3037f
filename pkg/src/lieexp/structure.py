"""Structural probes on cap windows: center, quotient projection,
ad-diagonal elements, derivation residuals and the W+(1) automorphism
shape check."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .brackets import bracket, bracket_raw
from .core import AlgebraSignature, Element, Family, merge
from .errors import OutOfWindow, SignatureMismatch, SignatureViolation
from .linalg import nullspace
from .window import TruncationCaps, Window


def quotient_project(l: Element) -> Element:
    """Drop the constant term (projection onto the centerless quotient)."""
    sig = l.sig
    if sig.is_witt:
        raise SignatureMismatch(f"quotient projection applies to Poisson algebras, not {sig}")
    data = dict(l.data)
    data.pop(sig.constant_key, None)
    return Element(sig, data, _trusted=True)


def quotient_signature(sig: AlgebraSignature) -> AlgebraSignature:
    from dataclasses import replace

    return replace(sig, quotient=True)


def center_probe(sig: AlgebraSignature, caps: TruncationCaps) -> List[Element]:
    """Basis of the cap-window elements that bracket to zero with every window monomial."""
    win = Window(sig, caps)
    cols = win.keys
    # equation per (multiplier b, result monomial r): sum_m c_m [m, b]_r = 0
    eqs: dict = {}
    for bi, b in enumerate(cols):
        bd = {b: 1}
        for m in cols:
            for r, c in bracket_raw(sig, {m: 1}, bd).items():
                eqs.setdefault((bi, r), {})[m] = c
    basis = nullspace(eqs.values(), cols)
    return [Element(sig, vec) for vec in basis]


def ad_eigenvalues(candidate: Element, sig: AlgebraSignature, caps: TruncationCaps,
                   window: Window = None) -> Optional[Dict[tuple, object]]:
    """Eigenvalue of ad(candidate) on every window monomial, or None if some
    window monomial is not mapped to a multiple of itself."""
    if candidate.sig != sig:
        raise SignatureMismatch(f"{candidate.sig} vs {sig}")
    win = window or Window(sig, caps)
    cd = candidate.data
    out = {}
    for b in win.keys:
        r = bracket_raw(sig, cd, {b: 1})
        if not r:
            out[b] = 0
        elif len(r) == 1 and b in r:
            out[b] = r[b]
        else:
            return None
    return out


def is_ad_diagonal(candidate: Element, sig: AlgebraSignature, caps: TruncationCaps) -> bool:
    return ad_eigenvalues(candidate, sig, caps) is not None


def find_ad_diagonal(sig: AlgebraSignature, caps: TruncationCaps) -> List[Element]:
    """All non-constant window monomials whose adjoint action is diagonal on the window."""
    win = Window(sig, caps)
    found = []
    for key in win.keys:
        if key == sig.constant_key:
            continue
        cand = Element(sig, {key: 1}, _trusted=True)
        if ad_eigenvalues(cand, sig, caps, window=win) is not None:
            found.append(cand)
    return found


def _exp_series_coeff(exps, k: int) -> Fraction:
    """Coefficient of t^k in prod_s exp(a_s t^{p_s}) for pairs (a_s, p_s)."""
    series = [Fraction(0)] * (k + 1)
    series[0] = Fraction(1)
    for a, p in exps:
        if not a:
            continue
        nxt = [Fraction(0)] * (k + 1)
        for i, c in enumerate(series):
            if not c:
                continue
            m = 0
            while i + p * m <= k:
                nxt[i + p * m] += c * Fraction(a) ** m / math.factorial(m)
                m += 1
        series = nxt
    return series[k]


def residue(l: Element) -> Fraction:
    """Coefficient of prod_v x_v^{-1} in the Laurent expansion of ``l`` at the origin.

    Each exponential factor is expanded as its power series.  The functional
    vanishes on every Poisson bracket and on constants, because a bracket is a
    sum of total derivatives and no derivative has a nonzero coefficient at
    exponent -1.  On Poisson algebras with negative powers its kernel is
    therefore a proper ideal of codimension one, containing the derived algebra.
    """
    sig = l.sig
    if sig.is_witt:
        raise SignatureMismatch(f"the residue functional is defined on Poisson algebras, not {sig}")
    total = Fraction(0)
    for (exp, poly, _), c in l.data.items():
        term = Fraction(c)
        for v in range(sig.nvars):
            k = -1 - poly[v]
            if k < 0:
                term = Fraction(0)
                break
            term *= _exp_series_coeff([(exp[s], p) for s, p in sig.var_slots[v]], k)
            if not term:
                break
        total += term
    return total


# -- derivations ------------------------------------------------------------------


@dataclass
class LinearMapTable:
    """A linear map given by its values on window monomials."""

    sig: AlgebraSignature
    images: Dict[tuple, Element]

    @classmethod
    def from_function(cls, sig, caps, fn: Callable[[Element], Element], window: Window = None):
        win = window or Window(sig, caps)
        return cls(sig, {k: fn(Element(sig, {k: 1}, _trusted=True)) for k in win.keys})

    def __call__(self, el: Element) -> Element:
        acc: dict = {}
        for k, c in el.data.items():
            img = self.images.get(k)
            if img is None:
                raise OutOfWindow(f"map undefined on {Element(el.sig, {k: 1}, _trusted=True)}")
            merge(acc, img.data, c)
        return Element(self.sig, acc, _trusted=True)

    def __add__(self, other: "LinearMapTable") -> "LinearMapTable":
        keys = self.images.keys() & other.images.keys()
        return LinearMapTable(self.sig, {k: self.images[k] + other.images[k] for k in keys})

    def scaled(self, c) -> "LinearMapTable":
        return LinearMapTable(self.sig, {k: c * v for k, v in self.images.items()})


@dataclass
class DerivationReport:
    residuals: list = field(default_factory=list)  # (a, b, residual) with residual != 0
    checked: int = 0
    skipped: int = 0

    @property
    def is_derivation(self) -> bool:
        return not self.residuals

    @property
    def coverage(self):
        total = self.checked + self.skipped
        return self.checked / total if total else 0.0


def check_derivation(D: LinearMapTable, sig: AlgebraSignature, caps: TruncationCaps,
                     max_pairs: int = None, rng: random.Random = None) -> DerivationReport:
    """Residuals D([a,b]) - [D(a),b] - [a,D(b)] over window pairs whose bracket stays in-window.

    Pairs leaving the window are skipped and counted.  With ``max_pairs``
    a seeded random sample of pairs is used instead of all of them.
    """
    win = Window(sig, caps)
    keys = win.keys
    pairs = [(a, b) for a in keys for b in keys]
    if max_pairs is not None and max_pairs < len(pairs):
        pairs = (rng or random.Random(0)).sample(pairs, max_pairs)
    report = DerivationReport()
    for ka, kb in pairs:
        a = Element(sig, {ka: 1}, _trusted=True)
        b = Element(sig, {kb: 1}, _trusted=True)
        ab = bracket(a, b)
        if not win.contains_element(ab):
            report.skipped += 1
            continue
        report.checked += 1
        res = D(ab) - bracket(D(a), b) - bracket(a, D(b))
        if res:
            report.residuals.append((a, b, res))
    return report


def scalar_derivation_apply(m) -> Element:
    """S(x^a y^b) = (2 - sum a - sum b) x^a y^b on polynomial Poisson monomials."""
    el = m if isinstance(m, Element) else None
    if el is None:
        raise TypeError("pass a single-term Element")
    sig = el.sig
    if sig.family is not Family.H_POLY:
        raise SignatureViolation(f"the scalar derivation is defined on H(n), not {sig}")
    acc = {}
    for (e, p, d), c in el.data.items():
        if any(e):
            raise SignatureViolation("scalar derivation is undefined on exponential terms")
        f = 2 - sum(p)
        if f:
            acc[(e, p, d)] = c * f
    return Element(sig, acc, _trusted=True)


def scalar_derivation_table(sig, caps) -> LinearMapTable:
    return LinearMapTable.from_function(sig, caps, scalar_derivation_apply)


def inner_derivation_table(z: Element, caps) -> LinearMapTable:
    return LinearMapTable.from_function(z.sig, caps, lambda x: bracket(z, x))


def identity_table(sig, caps) -> LinearMapTable:
    return LinearMapTable.from_function(sig, caps, lambda x: x)


# -- W+(1) automorphisms ------------------------------------------------------------


@dataclass(frozen=True)
class AutomorphismVerdict:
    relation_holds: bool
    shape_ok: bool
    alpha: object = None
    beta: object = None

    @property
    def accepted(self) -> bool:
        return self.relation_holds and self.shape_ok


def wplus_automorphism_check(theta_d: Element, theta_xd: Element) -> AutomorphismVerdict:
    """Check [theta(D), theta(xD)] = theta(D) and theta(xD) = alpha*x D + beta*D, alpha != 0."""
    sig = theta_d.sig
    if sig != theta_xd.sig or sig.family not in (Family.W_PLUS1, Family.W) or sig.n != 1:
        raise SignatureMismatch("automorphism check needs two W+(1) elements")
    relation = bracket(theta_d, theta_xd) == theta_d
    d_key = ((), (0,), 0)
    xd_key = ((), (1,), 0)
    alpha = theta_xd.coeff(xd_key)
    beta = theta_xd.coeff(d_key)
    shape = set(theta_xd.data) <= {d_key, xd_key} and alpha != 0
    return AutomorphismVerdict(relation, shape, alpha, beta)
