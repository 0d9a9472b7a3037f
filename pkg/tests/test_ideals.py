import random
from fractions import Fraction

import pytest

from lieexp.brackets import bracket
from lieexp.core import Element
from lieexp.errors import PreconditionError, SignatureMismatch, TacticFailed
from lieexp.grading import decompose, has_zero_component, max_grade, stat_wh
from lieexp.ideals import (LEFT, closure_saturate, lemma2_generate, replay, run_tactics,
                           simplicity_experiment, tactic_positivize, tactic_reduce_components,
                           tactic_strip_exponentials, zero_bracket)
from lieexp.parsing import parse_signature
from lieexp.window import TruncationCaps, random_element

from conftest import setup


# -- positivize ----------------------------------------------------------------------------


def test_positivize_witt_bracket_oracle(P):
    l = P("e^{x1} D1", "W(1,{1})")
    assert bracket(l, P("x1^3 D1", "W(1,{1})")) == P("3*e^{x1}*x1^2 D1 - e^{x1}*x1^3 D1", "W(1,{1})")
    res = tactic_positivize(l)
    assert res.output and res.replay() == res.output
    assert all(j >= 1 for _, poly, _ in res.output.data for j in poly)


def test_positivize_already_positive(P):
    l = P("x1*y1^2 + e^{x1}*x1*y1", "H(1,1)")
    res = tactic_positivize(l)
    assert res.output == l and res.steps == []


def test_positivize_poisson_negative_power(P):
    l = P("y1^-1", "H(1,1)")
    res = tactic_positivize(l)
    assert res.output and res.replay() == res.output
    assert all(j >= 1 for _, poly, _ in res.output.data for j in poly)


def test_positivize_zero_rejected():
    sig = parse_signature("W(1)")
    with pytest.raises(PreconditionError):
        tactic_positivize(Element.zero(sig))


# -- strip exponentials ----------------------------------------------------------------------


def test_strip_witt_example(P):
    res = tactic_strip_exponentials(P("e^{x1}*x1 D1", "W(1,{1})"))
    assert res.steps[0][0] == P("e^{-x1} D1", "W(1,{1})")
    assert res.output == P("2*x1 D1 + D1", "W(1,{1})")
    assert res.replay() == res.output


def test_strip_exponential_free_unchanged(P):
    l = P("x1^2 D1", "W(1,{1})")
    assert tactic_strip_exponentials(l).output == l


def test_strip_poisson_example(P):
    l = P("e^{x1}*y1", "H(1,1)")
    assert bracket(P("e^{-x1}", "H(1,1)"), l) == P("-1", "H(1,1)")
    res = tactic_strip_exponentials(l)
    assert res.output and max_grade(res.output) < max_grade(l)
    assert res.replay() == res.output


def test_strip_in_quotient_uses_conjugate_prebracket(P):
    # in the quotient the plain bracket leaves only a constant, which is zero there
    l = P("e^{x1}*y1", "Hbar(1,1)")
    res = tactic_strip_exponentials(l)
    assert len(res.steps) == 2
    assert res.output and max_grade(res.output) < max_grade(l)


def test_strip_positive_keys_strictly_decrease():
    sig, caps = setup("W(1,{1})")
    rng = random.Random(3)
    done = 0
    while done < 40:
        l = random_element(sig, caps, rng)
        g = max_grade(l)
        if not any(g) or g < tuple(0 for _ in g):
            continue
        res = tactic_strip_exponentials(l)
        assert max_grade(res.output) < g
        done += 1


# -- reduce components -------------------------------------------------------------------------


def test_reduce_witt_example(P):
    l = P("e^{x1}*x1^2 D1 + x1^3 D1", "W(1,{1})")
    res = tactic_reduce_components(l)
    assert len(res.steps) == 4
    assert all(m == P("D1", "W(1,{1})") and side == LEFT for m, side in res.steps)
    assert res.output and not has_zero_component(res.output)
    assert stat_wh(res.output) == stat_wh(l) - 1
    assert res.replay() == res.output


def test_reduce_poisson_example(P):
    l = P("e^{y1} + x1^2", "H(1,1)")
    res = tactic_reduce_components(l)
    assert res.output and not has_zero_component(res.output)
    assert res.replay() == res.output


def test_reduce_precondition(P):
    with pytest.raises(PreconditionError):
        tactic_reduce_components(P("e^{x1}*x1 D1", "W(1,{1})"))


# -- basis-monomial combinations -------------------------------------------------------------------


def test_basis_combination_examples(P):
    t = lemma2_generate(P("e^{x1} D1", "W(1,{1})"))
    assert t.case == "exp" and t.multiple == 2 and t.is_valid()
    t = lemma2_generate(P("x1^3 D1", "W(1)"))
    assert t.case == "power" and t.multiple == 8 and t.is_valid()
    t = lemma2_generate(P("D1", "W(1)"))
    assert t.given and t.terms == []
    t = lemma2_generate(P("x2^2 D1", "W(2)"))
    assert t.case == "plain" and t.multiple == 1 and t.is_valid()


def test_basis_combination_random_targets():
    sig, caps = setup("W(2,{1,2})")
    rng = random.Random(5)
    for _ in range(40):
        key = rng.choice(list(random_element(sig, caps, rng, max_terms=1).data))
        t = lemma2_generate(Element(sig, {key: 1}))
        assert t.is_valid()


def test_basis_combination_rejects_poisson(P):
    with pytest.raises(SignatureMismatch):
        lemma2_generate(P("x1", "H(1)"))


# -- pipeline ------------------------------------------------------------------------------------


def test_run_tactics_reaches_exponential_free():
    sig, caps = setup("W(1,{1})")
    rng = random.Random(11)
    for _ in range(20):
        l = random_element(sig, caps, rng)
        final, results, findings = run_tactics(l)
        if not findings:
            assert all(not any(g) for g in decompose(final))
        assert replay(l, [s for r in results for s in r.steps]) == final


def test_run_tactics_failures_become_findings(P):
    final, results, findings = run_tactics(P("e^{x1}", "Hbar(1,0)"))
    assert findings and results == []


# -- saturation -----------------------------------------------------------------------------------


def test_closure_witt_regenerates_window(P):
    sig = parse_signature("W(1)")
    rep = closure_saturate(P("D1", "W(1)"), TruncationCaps.for_signature(sig, 4, 0))
    assert rep.coverage == 1 and rep.reached_count == rep.window_size


def test_closure_zero_seed_rejected():
    sig = parse_signature("W(1)")
    with pytest.raises(PreconditionError):
        closure_saturate(Element.zero(sig), TruncationCaps.for_signature(sig, 2, 0))


def test_closure_coverage_monotone_and_bounded():
    sig, caps = setup("W(1,{1})", 3, 1)
    rng = random.Random(2)
    for _ in range(5):
        rep = closure_saturate(random_element(sig, caps, rng), caps)
        cov = rep.coverage_by_round
        assert all(0 <= c <= 1 for c in cov)
        assert all(a <= b for a, b in zip(cov, cov[1:]))
        assert rep.coverage == cov[-1]
        assert 0 <= rep.discard_rate <= 1


@pytest.mark.parametrize("name,P_,A", [("W(1,{1})", 3, 1), ("Hbar(1,0)", 0, 2), ("W(2)", 2, 0)])
def test_closure_independent_of_multiplier_order(name, P_, A):
    sig, caps = setup(name, P_, A)
    rng = random.Random(8)
    for _ in range(3):
        seed = random_element(sig, caps, rng)
        base = closure_saturate(seed, caps, trace_tactics=False).coverage
        for s in range(2):
            shuffled = closure_saturate(seed, caps, trace_tactics=False, multiplier_rng=random.Random(s))
            assert shuffled.coverage == base


def test_closure_slow_path_matches_fast_path():
    from lieexp.brackets import bracket_raw

    sig, caps = setup("Hbar(1,0)", 0, 2)
    rng = random.Random(4)
    seed = random_element(sig, caps, rng)
    fast = closure_saturate(seed, caps, trace_tactics=False)
    slow = closure_saturate(seed, caps, trace_tactics=False, bracket_fn=bracket_raw)
    assert fast.coverage == slow.coverage


def test_closure_working_window_and_recombine(P):
    sig, caps = setup("W(1,{1})", 3, 1)
    seed = P("e^{x1}*x1 D1 + x1^2 D1", "W(1,{1})")
    rep = closure_saturate(seed, caps)
    assert rep.working_caps.max_exp == caps.max_exp + 1
    literal = closure_saturate(seed, caps, margin=0)
    assert literal.working_caps == caps
    rec = closure_saturate(seed, caps, margin=0, recombine=True)
    assert rec.coverage >= literal.coverage


def test_closure_report_dict_fields(P):
    sig, caps = setup("W(1)", 3)
    d = closure_saturate(P("D1", "W(1)"), caps).to_dict()
    for key in ("seed", "caps", "multiplierBudget", "reachedCount", "windowSize", "coverage",
                "rounds", "tacticTrace", "discardRate", "coverageByRound"):
        assert key in d


def test_control_fails_to_cover():
    sig, caps = setup("W(1,{1})", 3, 1)
    summ = simplicity_experiment(sig, caps, 1, 0, control=True)
    assert summ.min_coverage < 1 and not summ.corroborated


def test_simplicity_small_witt():
    sig, caps = setup("W(1,{1})", 3, 1)
    summ = simplicity_experiment(sig, caps, 5, 1)
    assert summ.corroborated and summ.min_coverage == 1


def test_simplicity_deterministic():
    sig, caps = setup("Hbar(1,0)", 0, 2)
    a = simplicity_experiment(sig, caps, 3, 9).to_dict()
    b = simplicity_experiment(sig, caps, 3, 9).to_dict()
    assert a == b


def test_simplicity_needs_a_seed():
    sig, caps = setup("W(1)", 2)
    with pytest.raises(PreconditionError):
        simplicity_experiment(sig, caps, 0)


def test_residue_bounds_quotient_coverage(P):
    """A seed with zero residue generates an ideal inside ker(residue), so the
    residue monomial x1^-1 y1^-1 is never reached."""
    sig, caps = setup("Hbar(1,1)", 1, 1)
    rep = closure_saturate(P("e^{x1}*y1", "Hbar(1,1)"), caps, trace_tactics=False, max_rounds=3)
    assert rep.coverage < 1
