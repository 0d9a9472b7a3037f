"""Constructive ideal generation.

The tactics reproduce the moves used to show that a nonzero ideal is the
whole algebra: make polynomial powers positive, strip exponential factors
off the leading homogeneous component, and kill the exponential-free
component with repeated brackets.  Each tactic records the exact bracket
sequence it used so the result can be replayed.

:func:`closure_saturate` is the empirical side: starting from a seed it
brackets against every basis monomial of a cap window and measures how
much of the window the generated ideal reaches.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional

from .brackets import PreparedVector, bracket, bracket_raw
from .core import AlgebraSignature, Element, order_key
from .errors import (PreconditionError, SearchExhausted, SignatureMismatch, TacticFailed,
                     TraceInvalid)
from .grading import decompose, has_zero_component, max_power, stat_wh, stats
from .linalg import EchelonSpace, ModularEchelonSpace
from .window import TruncationCaps, Window, max_window, random_element

# -- traces -------------------------------------------------------------------------

LEFT = "left"    # result = [multiplier, current]
RIGHT = "right"  # result = [current, multiplier]


@dataclass
class TacticResult:
    tactic: str
    input: Element
    output: Element
    steps: list = field(default_factory=list)  # [(multiplier, side)]

    def replay(self) -> Element:
        return replay(self.input, self.steps)

    def summary(self) -> dict:
        from .parsing import print_element

        return {
            "tactic": self.tactic,
            "before": stats(self.input),
            "after": stats(self.output),
            "multipliers": [[print_element(m), side] for m, side in self.steps],
        }


def replay(start: Element, steps) -> Element:
    cur = start
    for mult, side in steps:
        cur = bracket(mult, cur) if side == LEFT else bracket(cur, mult)
    return cur


def _apply(cur, steps, mult, side):
    steps.append((mult, side))
    return bracket(mult, cur) if side == LEFT else bracket(cur, mult)


def _mono(sig, exp=None, poly=None, deriv=None):
    return Element.monomial(sig, exp, poly, deriv)


def _is_positive(l: Element, threshold: int) -> bool:
    return all(j >= threshold for _, poly, _ in l.data for j in poly)


# -- positivize ------------------------------------------------------------------------


def _exponent_vectors(nvars: int, bound: int):
    """All vectors in [0, bound]^nvars by increasing total degree, then lexicographically."""
    vecs = list(itertools.product(range(bound + 1), repeat=nvars))
    vecs.sort(key=lambda v: (sum(v), v))
    return vecs


def tactic_positivize(l: Element, search_bound: int = 6, threshold: int = 1) -> TacticResult:
    """Bracket ``l`` with one monomial so that every polynomial power is >= ``threshold``.

    Witt side: ``[l, x^j D_i]``.  Poisson side: ``{x^k y^h, l}``.
    Multipliers are tried in a fixed order up to exponent ``search_bound``.
    """
    sig = l.sig
    if l.is_zero():
        raise PreconditionError("positivize needs a nonzero element")
    if sig.poly_free or _is_positive(l, threshold):
        return TacticResult("positivize", l, l)
    for vec in _exponent_vectors(sig.nvars, search_bound):
        derivs = range(sig.n) if sig.is_witt else [None]
        for d in derivs:
            mult = _mono(sig, poly=vec, deriv=d)
            side = RIGHT if sig.is_witt else LEFT
            out = bracket(l, mult) if side == RIGHT else bracket(mult, l)
            if out and _is_positive(out, threshold):
                return TacticResult("positivize", l, out, [(mult, side)])
    raise SearchExhausted(f"no multiplier with exponents <= {search_bound} makes {l} positive")


# -- strip exponentials ------------------------------------------------------------------


def _first_nonzero(g):
    for s, a in enumerate(g):
        if a:
            return s
    return None


def tactic_strip_exponentials(l: Element) -> TacticResult:
    """Move the leading homogeneous component towards grade zero.

    Witt side: ``[e^{-g} D_u, l]`` with ``g`` the maximal grade key and
    ``u`` the first variable carrying a nonzero exponential coefficient;
    the leading component lands in grade zero.

    Poisson side: ``{e^{-a x_s^p}, l}`` removes the first nonzero
    coordinate ``a`` of the maximal grade key.  When the leading component
    does not depend on the conjugate variable (or the bracket would only
    leave a constant in a quotient algebra) ``l`` is first bracketed with a
    power of the conjugate variable.
    """
    sig = l.sig
    if l.is_zero():
        raise PreconditionError("strip needs a nonzero element")
    comps = decompose(l)
    if all(not any(g) for g in comps):
        return TacticResult("strip", l, l)
    g = next(iter(comps))  # maximal grade key
    s = _first_nonzero(g)
    if s is None:
        raise PreconditionError("leading component is exponential-free; reduce components first")
    v, p = sig.slots[s]
    if sig.is_witt:
        steps: list = []
        mult = _mono(sig, exp=tuple(-a for a in g), deriv=v)
        out = _apply(l, steps, mult, LEFT)
        if not out:
            raise TacticFailed("strip", f"[{mult}, {l}] vanished", l)
        return TacticResult("strip", l, out, steps)

    n = sig.n
    conj = v + n if v < n else v - n
    exp = [0] * sig.M
    exp[s] = -g[s]
    mult = _mono(sig, exp=tuple(exp))
    for r in (0, 2, 3):
        steps = []
        cur = l
        shift = [0] * sig.M
        if r:
            if sig.poly_free:
                cs = sig.var_slots[conj][0][0]
                shift[cs] = 1
                pre = _mono(sig, exp=tuple(shift))
            else:
                poly = [0] * sig.nvars
                poly[conj] = r
                pre = _mono(sig, poly=tuple(poly))
            cur = _apply(cur, steps, pre, LEFT)
        out = _apply(cur, steps, mult, LEFT)
        target = tuple(0 if i == s else a + d for i, (a, d) in enumerate(zip(g, shift)))
        if any(k[0] == target for k in out.data):
            return TacticResult("strip", l, out, steps)
    raise TacticFailed("strip", f"no conjugate pre-bracket keeps the leading component of {l} alive", l)


# -- reduce components -------------------------------------------------------------------


def tactic_reduce_components(l: Element) -> TacticResult:
    """Kill the exponential-free component by repeated brackets with one coordinate.

    The coordinate is chosen from the maximal nonzero grade key so that this
    component survives.  Witt side applies ``ad(D_u)``; Poisson side applies
    ``ad(y_r)`` (or ``ad(x_r)`` when the key's first nonzero entry is on the
    y side), ``max_power(l) + 1`` times.
    """
    sig = l.sig
    if sig.poly_free:
        raise PreconditionError(f"{sig} has no polynomial parts to differentiate away")
    if l.is_zero() or not has_zero_component(l) or stat_wh(l) < 2:
        raise PreconditionError("reduce needs a zero-grade component and at least two components")
    comps = decompose(l)
    g = next(k for k in comps if any(k))
    v, _ = sig.slots[_first_nonzero(g)]
    zero = comps[sig.zero_exp]
    if sig.is_witt:
        mult = _mono(sig, deriv=v)
        var = v
        side = LEFT
    else:
        n = sig.n
        var = v
        conj = v + n if v < n else v - n
        poly = [0] * sig.nvars
        poly[conj] = 1
        mult = _mono(sig, poly=tuple(poly))
        side = LEFT
    if any(poly[var] < 0 for _, poly, _ in zero.data):
        raise PreconditionError("zero-grade component has negative powers in the bracketing variable")
    times = max(max_power(l), 0) + 1
    steps: list = []
    cur = l
    for _ in range(times):
        cur = _apply(cur, steps, mult, side)
    if not cur:
        raise TacticFailed("reduce", f"{times} brackets with {mult} annihilated {l}", l)
    if has_zero_component(cur):
        raise TacticFailed("reduce", "zero-grade component survived", l)
    return TacticResult("reduce", l, cur, steps)


# -- basis-monomial combinations ---------------------------------------------------------------


@dataclass
class Lemma2Trace:
    """``sum coeff * [left, right] == multiple * target``, or ``given`` when the
    target is a coordinate derivation assumed to lie in the ideal."""

    target: Element
    case: str
    terms: list = field(default_factory=list)  # [(coeff, left, right)]
    multiple: object = 1
    given: bool = False

    def evaluate(self) -> Element:
        if self.given:
            return self.target
        acc = Element.zero(self.target.sig)
        for c, left, right in self.terms:
            acc = acc + c * bracket(left, right)
        return acc

    def is_valid(self) -> bool:
        return self.multiple != 0 and self.evaluate() == self.multiple * self.target


def lemma2_generate(target: Element, verify: bool = True) -> Lemma2Trace:
    """Express a Witt basis monomial through brackets with W(n) elements.

    * ``j_t = 0`` with an exponential in ``x_t``:
      ``[D_t, x_t T] - [x_t D_t, T] = 2 T``
    * ``j_t = 0`` and no exponential in ``x_t``: ``[D_t, x_t T] = T``
    * ``j_t >= 1``, with ``U = x_t T``:
      ``[D_t, U] - [x_t^{j_t+1} D_t, x_t^{-(j_t+1)} U] = 2 (j_t+1) T``
    """
    sig = target.sig
    if not sig.is_witt:
        raise SignatureMismatch("lemma2_generate works in Witt-type algebras")
    if len(target) != 1:
        raise PreconditionError("target must be a single basis monomial")
    (exp, poly, t), c = next(iter(target.data.items()))
    if c != 1:
        raise PreconditionError("target must have coefficient 1")

    def mono(e, p, d):
        return Element(sig, {(e, p, d): 1}, _trusted=True)

    def bump(p, k):
        lst = list(p)
        lst[t] += k
        return tuple(lst)

    d_t = mono(sig.zero_exp, sig.zero_poly, t)
    if not any(exp) and not any(poly):
        return Lemma2Trace(target, "given", given=True)
    j = poly[t]
    has_exp_t = any(exp[s] for s, _ in sig.var_slots[t])
    xt_target = mono(exp, bump(poly, 1), t)
    if j == 0 and has_exp_t:
        x_dt = mono(sig.zero_exp, bump(sig.zero_poly, 1), t)
        trace = Lemma2Trace(target, "exp", [(1, d_t, xt_target), (-1, x_dt, target)], 2)
    elif j == 0:
        trace = Lemma2Trace(target, "plain", [(1, d_t, xt_target)], 1)
    else:
        big = mono(sig.zero_exp, bump(sig.zero_poly, j + 1), t)
        stripped = mono(exp, bump(poly, -j), t)
        trace = Lemma2Trace(target, "power", [(1, d_t, xt_target), (-1, big, stripped)], 2 * (j + 1))
    if verify and not trace.is_valid():
        raise TraceInvalid(f"combination for {target} evaluates to {trace.evaluate()}")
    return trace


# -- tactic pipeline --------------------------------------------------------------------------


def run_tactics(l: Element, max_steps: int = 24, search_bound: int = 6):
    """Drive ``l`` to an exponential-free element of its ideal.

    Returns ``(final, results, findings)``; tactic failures become findings
    instead of exceptions.
    """
    results: List[TacticResult] = []
    findings: list = []
    cur = l
    if l.sig.poly_free:
        return cur, results, [{"tactic": "pipeline", "note": "not applicable without polynomial parts"}]
    try:
        res = tactic_positivize(cur, search_bound)
        if res.steps:
            results.append(res)
        cur = res.output
        for _ in range(max_steps):
            comps = decompose(cur)
            if all(not any(g) for g in comps):
                return cur, results, findings
            if has_zero_component(cur) and len(comps) >= 2:
                res = tactic_reduce_components(cur)
            else:
                res = tactic_strip_exponentials(cur)
            results.append(res)
            cur = res.output
        findings.append({"tactic": "pipeline", "finding": f"not exponential-free after {max_steps} steps"})
    except (TacticFailed, SearchExhausted, PreconditionError) as exc:
        findings.append({"tactic": getattr(exc, "tactic", type(exc).__name__), "finding": str(exc)})
    return cur, results, findings


# -- saturation ---------------------------------------------------------------------------------


@dataclass
class ClosureReport:
    seed: Element
    caps: TruncationCaps
    multiplier_budget: str
    reached_count: int
    window_size: int
    coverage: Fraction
    rounds: int
    span_dim: int = 0
    evaluated: int = 0
    discarded: int = 0
    fixed_point: bool = False
    round_limit_hit: bool = False
    coverage_by_round: list = field(default_factory=list)
    tactic_trace: list = field(default_factory=list)
    working_caps: Optional[TruncationCaps] = None

    @property
    def discard_rate(self) -> Fraction:
        return Fraction(self.discarded, self.evaluated) if self.evaluated else Fraction(0)

    def to_dict(self) -> dict:
        from .parsing import print_element

        return {
            "seed": print_element(self.seed),
            "caps": self.caps.as_dict(),
            "workingCaps": (self.working_caps or self.caps).as_dict(),
            "multiplierBudget": self.multiplier_budget,
            "reachedCount": self.reached_count,
            "windowSize": self.window_size,
            "coverage": str(self.coverage),
            "rounds": self.rounds,
            "spanDim": self.span_dim,
            "evaluated": self.evaluated,
            "discarded": self.discarded,
            "discardRate": str(self.discard_rate),
            "fixedPoint": self.fixed_point,
            "roundLimitHit": self.round_limit_hit,
            "coverageByRound": [str(c) for c in self.coverage_by_round],
            "tacticTrace": self.tactic_trace,
        }


def _integral(vec: dict) -> dict:
    """Scale a rational vector to a primitive integer vector (same span)."""
    den = 1
    for c in vec.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    out = {k: int(c * den) for k, c in vec.items()}
    g = 0
    for c in out.values():
        g = math.gcd(g, c)
    return {k: c // g for k, c in out.items()} if g > 1 else out


def zero_bracket(sig, a, b):
    return {}


def closure_saturate(seed: Element, caps: TruncationCaps, max_rounds: int = 8,
                     bracket_fn: Callable = None, recombine: bool = False,
                     trace_tactics: bool = True, margin: int = 1,
                     poly_margin: int = 0, multiplier_rng: random.Random = None) -> ClosureReport:
    """Saturate the ideal generated by ``seed`` inside the cap window.

    Every round brackets the vectors added in the previous round against all
    cap-window monomials and keeps the results by exact linear algebra.
    Coverage is the fraction of cap-window monomials lying in the reached
    span.

    Results are kept when they lie in a working window: the cap window with
    the exponential cap widened by ``margin`` and the polynomial caps by
    ``poly_margin``.  This lets the ideal step outside the cap window and come
    back.  Every kept vector is a genuine ideal member, so nothing is
    fabricated.  Other results are discarded and counted.  With
    ``recombine=True`` they are instead inserted into the span, which
    eliminates monomials outside the working window first, so combinations
    that cancel there are kept as well.

    ``multiplier_rng`` shuffles the multiplier enumeration order (the
    reached span does not depend on it).
    """
    sig = seed.sig
    if seed.is_zero():
        raise PreconditionError("closure needs a nonzero seed")
    win = Window(sig, caps)
    if sig.poly_free:
        poly_margin = 0
    if not sig.M:
        margin = 0
    if margin or poly_margin:
        wide_caps = TruncationCaps(caps.max_poly + poly_margin,
                                   caps.min_poly - poly_margin if caps.min_poly < 0 else 0,
                                   caps.max_exp + margin)
        work = Window(sig, wide_caps, limit=max_window() * 4)
    else:
        wide_caps, work = caps, win
    br = bracket_fn or bracket_raw
    index = win.index
    windex = work.index

    def rank(col):
        i = index.get(col)
        if i is not None:
            return (2, i)
        j = windex.get(col)
        return (0, order_key(col)) if j is None else (1, j)

    space = EchelonSpace(rank)
    screen = ModularEchelonSpace(rank)
    inside = 0
    report = ClosureReport(seed, caps, win.describe(), 0, len(win), Fraction(0), 0)
    report.working_caps = wide_caps
    if trace_tactics:
        _, results, findings = run_tactics(seed)
        report.tactic_trace = [r.summary() for r in results] + findings

    def insert(vec):
        """Add ``vec``; return the new row if it lies in the working window.

        Vectors dependent modulo a large prime are skipped before any exact
        work; this can only under-report the span, never over-report it.
        """
        nonlocal inside
        if screen.add(vec) is None:
            return None
        pivot = space.add(vec)
        if pivot is None:
            return None
        if pivot in index:
            inside += 1
        if pivot not in windex:
            return None
        # prefer the sparse original over the reduced row when both qualify
        return vec if all(k in windex for k in vec) else _integral(space.rows[pivot])

    frontier = []
    in_work = all(k in windex for k in seed.data)
    if in_work or recombine:
        row = insert(seed.data)
        if row is not None:
            frontier.append(row)
    keys = list(win.keys)
    if multiplier_rng is not None:
        multiplier_rng.shuffle(keys)
    mults = [{k: 1} for k in keys]

    def coverage_now():
        if inside == len(win):
            return len(win)
        return sum(1 for k in win.keys if space.contains({k: 1}))

    report.coverage_by_round.append(Fraction(coverage_now(), len(win)))
    rounds = 0
    while frontier and inside < len(win):
        if rounds >= max_rounds:
            report.round_limit_hit = True
            break
        rounds += 1
        new = []
        for v in frontier:
            if bracket_fn is None:
                pv = PreparedVector(sig, v)
                results = (pv.bracket_monomial(k) for k in keys)
            else:
                results = (br(sig, v, m) for m in mults)
            for r in results:
                report.evaluated += 1
                if not r:
                    continue
                if not all(k in windex for k in r):
                    report.discarded += 1
                    if not recombine:
                        continue
                row = insert(r)
                if row is not None:
                    new.append(row)
                if inside == len(win):
                    break
            if inside == len(win):
                break
        frontier = new
        report.coverage_by_round.append(Fraction(coverage_now(), len(win)))
    else:
        report.fixed_point = not frontier
    report.rounds = rounds
    report.span_dim = inside
    report.reached_count = coverage_now()
    report.coverage = Fraction(report.reached_count, len(win))
    return report


@dataclass
class SimplicitySummary:
    algebra: str
    caps: TruncationCaps
    rng_seed: int
    reports: list
    control: bool = False

    @property
    def coverages(self):
        return [r.coverage for r in self.reports]

    @property
    def min_coverage(self):
        return min(self.coverages)

    @property
    def corroborated(self) -> bool:
        return all(c == 1 for c in self.coverages)

    def to_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "caps": self.caps.as_dict(),
            "rngSeed": self.rng_seed,
            "control": self.control,
            "numSeeds": len(self.reports),
            "coverages": [str(c) for c in self.coverages],
            "minCoverage": str(self.min_coverage),
            "corroborated": self.corroborated,
            "reports": [r.to_dict() for r in self.reports],
        }


def random_seed_element(sig, caps, rng) -> Element:
    return random_element(sig, caps, rng, max_terms=4, max_coeff=3)


def simplicity_experiment(sig: AlgebraSignature, caps: TruncationCaps, num_seeds: int = 20,
                          rng_seed: int = 0, max_rounds: int = 8, control: bool = False,
                          trace_tactics: bool = True, margin: int = 1,
                          recombine: bool = False) -> SimplicitySummary:
    """Saturate from ``num_seeds`` random seeds; corroborated when all coverages are 1.

    ``control=True`` replaces the bracket by zero (an abelian algebra on the
    same window, seeded with x1), which must fail to cover the window.
    """
    from .parsing import format_signature

    if num_seeds < 1:
        raise PreconditionError("need at least one seed")
    rng = random.Random(rng_seed)
    reports = []
    for _ in range(num_seeds):
        if control:
            seed = _control_seed(sig, caps, rng)
            rep = closure_saturate(seed, caps, max_rounds, bracket_fn=zero_bracket,
                                   trace_tactics=False, margin=margin, recombine=recombine)
        else:
            seed = random_seed_element(sig, caps, rng)
            rep = closure_saturate(seed, caps, max_rounds, trace_tactics=trace_tactics,
                                   margin=margin, recombine=recombine)
        reports.append(rep)
    return SimplicitySummary(format_signature(sig), caps, rng_seed, reports, control)


def _control_seed(sig, caps, rng):
    if sig.poly_free:
        exp = [0] * sig.M
        exp[0] = 1
        return Element.monomial(sig, exp=exp)
    poly = [0] * sig.nvars
    poly[0] = 1
    return Element.monomial(sig, poly=poly, deriv=0 if sig.is_witt else None)
