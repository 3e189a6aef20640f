from collections import Counter

import pytest

from algcps.cps import B1VAR, B2VAR, KVAR, Direction, apply_k, colon, cps, psi
from algcps.errors import RewriteError
from algcps.harness import RULE_FIXTURES, Outcome, check_rule_fixture
from algcps.rewrite import (
    Calculus,
    NormalizationStatus,
    RuleLabel,
    SearchStatus,
    Step,
    normalize,
    reachable,
    replay,
    search_steps,
    step_alg,
    step_lin,
    successors,
)
from algcps.syntax import parse_term as t
from algcps.terms import App, Lam, alpha_eq, app, linear_key, var_name


def labels(steps):
    return {step.rule for step in steps}


@pytest.mark.parametrize("fixture", RULE_FIXTURES, ids=lambda f: f.label.value)
def test_rule_line_fixture(fixture):
    coverage = Counter()
    assert check_rule_fixture(fixture, coverage).outcome is Outcome.PASS
    assert coverage[fixture.label.value] == 1


def test_fixtures_cover_every_rule_line():
    assert {fixture.label for fixture in RULE_FIXTURES} == set(RuleLabel)


def test_base_values_are_normal():
    assert step_lin(t("x")) == []
    assert step_alg(t(r"\x. (\y. y) x")) == []


def test_lin_distributes_over_sum_argument(copy_sum, copy_term):
    steps = step_lin(copy_sum)
    expected = t(f"({copy_term}) y + ({copy_term}) z")
    assert any(s.rule is RuleLabel.Ar_sum and alpha_eq(s.target, expected) for s in steps)
    assert not labels(steps) & {RuleLabel.BetaV, RuleLabel.BetaN}


def test_lin_substitutes_base_values(copy_term):
    steps = step_lin(t(f"({copy_term}) y"))
    assert [s.rule for s in steps] == [RuleLabel.BetaV]
    assert steps[0].target == t(r"\f. f y y")


def test_alg_clones_its_argument(copy_sum):
    steps = step_alg(copy_sum)
    assert [s.rule for s in steps] == [RuleLabel.BetaN]
    assert steps[0].target == t(r"\f. f (y + z) (y + z)")


def test_guard_discipline():
    term = t(r"(\x. x) ((\y. y) z)")
    lin, alg = step_lin(term), step_alg(term)
    assert labels(alg) == {RuleLabel.BetaN}
    assert labels(lin) == {RuleLabel.BetaV}
    assert lin[0].position == (1,)
    assert lin[0].contexts() == [RuleLabel.XiLin_appR]

    assert RuleLabel.A_app_sum in labels(step_alg(t("(f + g) x")))
    assert RuleLabel.Al_sum not in labels(step_alg(t("(f + g) x")))
    # left linearity waits for a value argument in λ_lin
    assert RuleLabel.Al_sum not in labels(step_lin(t(r"(f + g) ((\x. x) y)")))


def test_vector_space_steps_are_shared():
    term = t("2.(x + y) + 0")
    lin = {(s.rule, s.position, s.target) for s in step_lin(term) if s.rule.is_vector_space}
    alg = {(s.rule, s.position, s.target) for s in step_alg(term) if s.rule.is_vector_space}
    assert lin == alg
    assert {RuleLabel.S1, RuleLabel.Com} <= {rule for rule, _, _ in lin}


def test_every_step_replays(copy_sum):
    for calculus in Calculus:
        for step in successors(t("2.(x + 0) + (f + g) (1/2.y)"), calculus):
            assert replay(step) == step.target
        for step in successors(copy_sum, calculus):
            assert replay(step) == step.target


def test_replay_rejects_foreign_rules():
    term = t(r"(\x. x) (y + z)")
    with pytest.raises(RewriteError):
        replay(Step(term, t("y + z"), RuleLabel.BetaN, (), Calculus.LIN))
    with pytest.raises(RewriteError):
        replay(Step(t(r"f ((\x. x) y)"), t("f y"), RuleLabel.BetaN, (1,), Calculus.ALG))


def test_reachable_is_reflexive():
    result = reachable(t("f x"), t("f x"), Calculus.ALG, max_states=1)
    assert result.status is SearchStatus.FOUND
    assert len(result.trace) == 0


def test_reachable_terminates_on_commutativity_loops():
    result = reachable(t("x + y"), t("z"), Calculus.LIN, max_states=10)
    assert result.status is SearchStatus.UNREACHABLE


def test_reachable_reports_budget_exhaustion():
    result = reachable(t(r"(\x. x) ((\y. y) w)"), t("z"), Calculus.ALG, max_states=2)
    assert result.status is SearchStatus.EXHAUSTED
    assert not result.found


@pytest.mark.parametrize(
    "start, goal",
    [
        # the β-redex only appears once S2 removes the unit scaling
        (r"(\k. (1.\k. k y) k) k", "1.(k y)"),
        ("(1.0) k", "0"),
    ],
)
def test_reachable_sees_redexes_behind_linear_structure(start, goal):
    result = reachable(t(start), t(goal), Calculus.ALG, max_states=1_000)
    assert result.status is SearchStatus.FOUND
    assert result.trace.chains(modulo_linear=True)
    for step in result.trace.steps:
        assert replay(step) == step.target
    assert linear_key(result.trace.final) == linear_key(t(goal))


def test_search_steps_keep_linear_rules_only_in_arguments():
    assert search_steps(t("x + y"), Calculus.LIN) == []
    steps = search_steps(t("f (x + y)"), Calculus.LIN)
    assert [(s.rule, s.position) for s in steps] == [(RuleLabel.Ar_sum, ()), (RuleLabel.Com, (1,))]


def test_chains_modulo_linear():
    trace = normalize(t(r"z + (\x. x) y"), Calculus.LIN).trace
    assert not trace.chains()
    assert trace.chains(modulo_linear=True)


def test_no_cloning_display():
    """(λx.f x x)(α.y+β.z) reaches α.(f y y)+β.(f z z) in λ_lin."""
    result = reachable(
        t(r"(\x. f x x) (1/2.y + 1/2.z)"),
        t("1/2.(f y y) + 1/2.(f z z)"),
        Calculus.LIN,
        max_states=10_000,
    )
    assert result.found
    assert result.trace.chains()
    assert {RuleLabel.Ar_sum, RuleLabel.Ar_scale, RuleLabel.BetaV} <= labels(result.trace.steps)


def test_copy_of_sum_normalizes_per_calculus(copy_sum):
    lin = normalize(copy_sum, Calculus.LIN, 100)
    assert lin.status is NormalizationStatus.VALUE
    assert linear_key(lin.term) == linear_key(t(r"(\f. f y y) + (\f. f z z)"))
    assert [s.rule for s in lin.trace.steps] == [RuleLabel.Ar_sum, RuleLabel.BetaV, RuleLabel.BetaV]

    alg = normalize(copy_sum, Calculus.ALG, 100)
    assert alg.is_value
    assert alg.term == t(r"\f. f (y + z) (y + z)")


def test_normalize_returns_values_in_canonical_form():
    result = normalize(t("x + 2.x"), Calculus.LIN, 1)
    assert result.status is NormalizationStatus.VALUE
    assert result.term == t("3.x")
    assert len(result.trace) == 0


def test_normalize_statuses():
    assert normalize(t("x y"), Calculus.LIN).status is NormalizationStatus.STUCK
    omega = t(r"(\x. x x) (\x. x x)")
    assert normalize(omega, Calculus.ALG, 5).status is NormalizationStatus.TIMEOUT


def test_trace_text_marks_renormalization():
    # canonical order puts the application first, so the step fires at 0
    trace = normalize(t(r"z + (\x. x) y"), Calculus.LIN).trace
    text = trace.to_text()
    assert "~L" in text
    assert "BetaV @ 0" in text
    step = trace.to_dict()["steps"][0]
    assert step["rule"] == "BetaV"
    assert step["renormalized_from"] == r"(\x. x) y + z"


def v2n_copy_lines(copy_term):
    """The first lines of the worked simulation of copy(y+z) in λ_alg."""
    sum_image = cps(t("y + z"), Direction.V2N)
    body_image = Lam(var_name("x"), cps(t(r"\f. f x x"), Direction.V2N))
    k1 = Lam(var_name("b1"), App(sum_image, Lam(var_name("b2"), app(B1VAR, B2VAR, KVAR))))
    return [
        apply_k(cps(App(copy_term, t("y + z")), Direction.V2N)),
        App(cps(copy_term, Direction.V2N), k1),
        App(k1, body_image),
        App(sum_image, Lam(var_name("b2"), app(body_image, B2VAR, KVAR))),
    ]


def test_v2n_worked_trace_prefix(copy_term):
    lines = v2n_copy_lines(copy_term)
    trace = normalize(lines[0], Calculus.ALG, 3).trace
    assert [s.rule for s in trace.steps] == [RuleLabel.BetaN] * 3
    for state, line in zip(trace.states(), lines):
        assert alpha_eq(state, line)


def test_v2n_worked_trace_reaches_colon_image(copy_sum):
    start = apply_k(cps(copy_sum, Direction.V2N))
    goal = colon(t(r"(\f. f y y) + (\f. f z z)"), KVAR, Direction.V2N)
    assert goal == t(r"k (\f. \k. (\k. (\k. k f) (\b1. (\k. k y) (\b2. b1 b2 k))) "
                     r"(\b1. (\k. k y) (\b2. b1 b2 k))) + k (\f. \k. (\k. (\k. k f) "
                     r"(\b1. (\k. k z) (\b2. b1 b2 k))) (\b1. (\k. k z) (\b2. b1 b2 k)))")
    result = reachable(start, goal, Calculus.ALG, max_states=100_000)
    assert result.found
    assert result.trace.chains()
    assert RuleLabel.A_app_sum in labels(result.trace.steps)


def test_n2v_worked_trace_reaches_colon_image(copy_sum):
    start = apply_k(cps(copy_sum, Direction.N2V))
    goal = colon(t(r"\f. f (y + z) (y + z)"), KVAR, Direction.N2V)
    result = reachable(start, goal, Calculus.LIN, max_states=100_000)
    assert result.found
    assert [s.rule for s in result.trace.steps][:3] == [RuleLabel.BetaV] * 3


def test_psi_of_pair_matches_colon():
    pair = t(r"\f. f y y")
    assert colon(pair, KVAR, Direction.V2N) == App(KVAR, psi(pair))
