import random

import pytest

from algcps.cps import B1VAR, B2VAR, KVAR, Direction, cps
from algcps.errors import UnknownLemmaError
from algcps.harness import (
    KNOWN_FALSIFIED,
    LEMMA_NAMES,
    Budgets,
    CheckReport,
    Failure,
    GenConfig,
    Lemma,
    Outcome,
    TermGenerator,
    Verdict,
    build_continuation,
    build_suspension,
    check_lemma,
    check_term,
    gen_term,
    get_lemma,
    has_zero_argument,
    instance_seed,
    non_injectivity_witness,
    report_name,
    shrink,
    _worst,
)
from algcps.inverse import apply_continuation, is_continuation, is_suspension
from algcps.rewrite import Calculus, RuleLabel, SearchStatus, reachable
from algcps.syntax import parse_term as t
from algcps.terms import App, Lam, Sum, Var, app, is_value, subterms, var_name


def generator(seed, direction):
    return TermGenerator(GenConfig(seed=seed).for_direction(direction), random.Random(seed))


class TestGenerator:
    def test_same_seed_same_term(self):
        assert gen_term(GenConfig(seed=7)) == gen_term(GenConfig(seed=7))
        terms = {gen_term(GenConfig(seed=seed)) for seed in range(20)}
        assert len(terms) > 1

    def test_depth_zero_is_a_variable(self):
        assert isinstance(gen_term(GenConfig(max_depth=0)), Var)

    def test_value_only(self):
        for seed in range(30):
            assert is_value(gen_term(GenConfig(seed=seed, value_only=True)))

    def test_n2v_excludes_zero_arguments(self):
        for seed in range(100):
            cfg = GenConfig(seed=seed, max_depth=4).for_direction(Direction.N2V)
            assert not has_zero_argument(gen_term(cfg))

    def test_zero_arguments_per_direction(self):
        assert GenConfig().for_direction(Direction.V2N).zero_arguments is True
        assert GenConfig().for_direction(Direction.N2V).zero_arguments is False
        assert GenConfig(zero_arguments=True).for_direction(Direction.N2V).zero_arguments is True

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"max_depth": -1},
            {"scalar_pool": ()},
            {"source_var_pool": ("x", "k")},
            {"shape_weights": {"var": 1, "pair": 2}},
            {"shape_weights": {"var": 0}},
        ],
    )
    def test_invalid_config(self, kwargs):
        with pytest.raises(ValueError):
            GenConfig(**kwargs)

    def test_budgets_must_be_positive(self):
        with pytest.raises(ValueError):
            Budgets(states=0)


@pytest.mark.parametrize("direction", list(Direction))
def test_builders_stay_in_the_grammar(direction):
    for seed in range(25):
        gen = generator(seed, direction)
        assert is_continuation(build_continuation(gen, direction), direction)
        assert is_suspension(build_suspension(gen.term(3), direction, gen), direction)


def test_rule_lines_cover_every_label():
    report = check_lemma("rule-lines")
    assert report.ok
    assert report.attempted == len(RuleLabel)
    assert set(report.coverage) == {label.value for label in RuleLabel}


@pytest.mark.parametrize("direction", list(Direction))
@pytest.mark.parametrize("lemma", ["free-variables", "image-classes", "inverse-term", "non-injectivity"])
def test_structural_lemmas_hold(lemma, direction):
    report = check_lemma(lemma, direction, GenConfig(max_depth=3), instances=20)
    assert report.ok, report.failures
    assert report.attempted == 20
    assert report.name == f"{lemma}[{direction.value}]"


def test_check_lemma_is_deterministic():
    cfg = GenConfig(seed=3, max_depth=3)
    first = check_lemma("inverse-term", Direction.N2V, cfg, instances=10).to_dict()
    second = check_lemma("inverse-term", Direction.N2V, cfg, instances=10).to_dict()
    first.pop("elapsed_s")
    second.pop("elapsed_s")
    assert first == second


def test_directional_lemma_needs_a_direction():
    with pytest.raises(ValueError):
        check_lemma("soundness")


@pytest.mark.parametrize("direction", list(Direction))
def test_non_injectivity_witness(direction):
    verdict = non_injectivity_witness(direction)
    assert verdict.outcome is Outcome.PASS
    assert verdict.detail.endswith("decompiles to x z + y z")


@pytest.mark.parametrize("direction", list(Direction))
def test_copy_of_sum_is_simulated(copy_sum, direction):
    report = check_term("soundness", copy_sum, direction)
    assert report.ok
    assert report.passed == 1


@pytest.mark.parametrize("direction", list(Direction))
def test_completeness_on_a_variable(direction):
    report = check_term("completeness", t("x"), direction)
    assert report.passed == 1


def test_n2v_zero_argument_is_not_simulated():
    # {|0|} = 0 is no value of the linear calculus, so the argument collapses
    report = check_term("soundness", t(r"(\x. \z. x) 0"), Direction.N2V)
    assert not report.ok
    assert "does not reach" in report.failures[0].detail


def test_v2n_continuation_linearity_counterexample():
    cont = Lam(
        var_name("b1"),
        App(cps(t(r"(\v. v) w"), Direction.V2N), Lam(var_name("b2"), app(B1VAR, B2VAR, KVAR))),
    )
    left, right = t(r"(\u. u) x"), t("y")

    def fill(term):
        return apply_continuation(cont, term, Direction.V2N)

    result = reachable(fill(Sum(left, right)), Sum(fill(left), fill(right)), Calculus.LIN, 10_000)
    assert result.status is SearchStatus.UNREACHABLE
    assert KNOWN_FALSIFIED == ("continuation-linearity[v2n]", "inverse-step[v2n]")


def test_lemma_registry():
    assert LEMMA_NAMES[0] == "rule-lines"
    assert len(LEMMA_NAMES) == 21
    assert not get_lemma("rule-lines").directional
    assert get_lemma("inverse-value").values
    with pytest.raises(UnknownLemmaError):
        get_lemma("associativity")
    assert report_name("soundness", Direction.V2N) == "soundness[v2n]"
    assert report_name("rule-lines", None) == "rule-lines"


def test_instance_seed():
    assert instance_seed(0, "soundness", Direction.V2N, 3) == instance_seed(0, "soundness", Direction.V2N, 3)
    assert instance_seed(0, "soundness", Direction.V2N, 3) != instance_seed(0, "soundness", Direction.N2V, 3)
    assert instance_seed(0, "soundness", Direction.V2N, 3) != instance_seed(1, "soundness", Direction.V2N, 3)


def test_shrink_finds_smallest_failing_term():
    def no_applications(ctx, source):
        if any(isinstance(sub, App) for sub in subterms(source)):
            return Verdict(Outcome.FAIL, "has an application")
        return Verdict(Outcome.PASS)

    lemma = Lemma("no-applications", "terms have no applications", no_applications)
    cfg = GenConfig().for_direction(Direction.V2N)
    smaller, verdict = shrink(lemma, t(r"(\x. f x) (y z)"), Direction.V2N, 0, cfg, Budgets())
    assert smaller == t("f x")
    assert verdict.outcome is Outcome.FAIL


def test_report_tally():
    report = CheckReport(name="soundness[v2n]", lemma="soundness", direction="v2n")
    for outcome in Outcome:
        report.tally(Verdict(outcome))
    report.failures.append(Failure(1, "x", "broken"))
    assert report.attempted == 3
    assert report.passed == 1
    assert not report.ok
    assert report.summary() == "1/3 passed, 1 failed, 1 inconclusive, 1 skipped"
    assert report.to_dict()["failures"] == [{"seed": 1, "term": "x", "detail": "broken"}]


SMALL_BUDGETS = Budgets(states=2_000, graph_states=300)
STRUCTURAL = ("free-variables", "image-classes", "inverse-term", "non-injectivity")
SEEDED_LEMMAS = [
    name for name in LEMMA_NAMES if get_lemma(name).directional and name not in STRUCTURAL
]


@pytest.mark.parametrize("direction", list(Direction))
@pytest.mark.parametrize("lemma", SEEDED_LEMMAS)
def test_seeded_lemma_check(lemma, direction):
    report = check_lemma(lemma, direction, GenConfig(seed=0, max_depth=3), SMALL_BUDGETS, instances=10)
    if report.name in KNOWN_FALSIFIED:
        assert all("does not reach" in failure.detail for failure in report.failures)
    else:
        assert report.ok, [failure.to_dict() for failure in report.failures]


@pytest.mark.parametrize(
    "lemma, source, direction",
    [
        ("soundness", "1.0", Direction.V2N),
        ("soundness", r"1.\z. z", Direction.N2V),
        ("administrative-collapse", "1.y", Direction.V2N),
        ("administrative-collapse", "1.-1.f", Direction.N2V),
        ("administrative-collapse", "1.(y + g)", Direction.N2V),
    ],
)
def test_unit_scalings_are_simulated(lemma, source, direction):
    report = check_term(lemma, t(source), direction)
    assert report.ok, report.failures
    assert report.passed == 1


def test_worst_verdict():
    fail = Verdict(Outcome.FAIL, "broken")
    pending = Verdict(Outcome.INCONCLUSIVE, "budget")
    assert _worst([None, pending, fail]) is fail
    assert _worst([pending, None]) is pending
    assert _worst([None, None]) is None
    assert _worst([]) is None

