"""
Property harness for the translations.

Every lemma of the correctness argument becomes an executable check: a
seeded generator produces source terms, instance builders turn them into
translated computations, suspensions, continuations and CPS-values, and the
check compares both sides syntactically, modulo alpha-equivalence or by
bounded reachability. Failing instances are shrunk over their subterms and
reported with the seed and term text needed to replay them.
"""
import random
import time
import zlib
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional

from .cps import B1VAR, B2VAR, BVAR, KVAR, Direction, apply_k, colon, cps, value_image
from .errors import AlgCpsError, UnknownLemmaError
from .inverse import (
    apply_continuation,
    classify,
    inv_computation,
    inv_suspension,
    inv_value,
    is_computation,
    is_continuation,
    is_suspension,
)
from .logger import get_logger
from .rewrite import (
    Calculus,
    RuleLabel,
    SearchStatus,
    StateSpace,
    Step,
    normalize,
    reachable,
    replay,
    successors,
)
from .scalars import Scalar
from .syntax import parse_term
from .terms import (
    B,
    B1,
    B2,
    K,
    ZERO,
    App,
    Lam,
    Namespace,
    Scale,
    Sum,
    Term,
    Var,
    Zero,
    alpha_eq,
    app,
    children,
    free_vars,
    is_value,
    linear_atoms,
    linear_key,
    nameless_key,
    plus,
    replace_at,
    subterms,
    substitute,
    var_name,
)

DEFAULT_INSTANCES = 500
DEFAULT_SCALARS: tuple[Scalar, ...] = (
    Fraction(0), Fraction(1), Fraction(2), Fraction(1, 2), Fraction(-1)
)
DEFAULT_SOURCE_VARS = ("x", "y", "z", "f", "g")
DEFAULT_SHAPE_WEIGHTS = {"var": 4, "lam": 3, "app": 3, "zero": 1, "scale": 2, "sum": 2}
VALUE_SHAPES = ("var", "lam", "zero", "scale", "sum")

# Longest random reduction prefix used to reach non-initial computations
MAX_PREFIX_STEPS = 12
# Skipped instances (no value, no redex) are retried up to this factor
MAX_TRIES_FACTOR = 10
SHRINK_ROUNDS = 64
SHRINK_CANDIDATES = 200
# Total instance runs one shrink may spend; only a check's first failure is shrunk
SHRINK_RUNS = 200

NON_INJECTIVE_WITNESS = "(x + y) z"
KNOWN_FALSIFIED = ("continuation-linearity[v2n]", "inverse-step[v2n]")


@dataclass
class GenConfig:
    """
    Term generator settings.

    `zero_arguments` controls whether a literal 0 may be generated as an
    application argument. None means "per direction": allowed for v2n,
    excluded for n2v, where {|0|} = 0 is not a value of λ_lin.
    """
    seed: int = 0
    max_depth: int = 5
    scalar_pool: tuple[Scalar, ...] = DEFAULT_SCALARS
    source_var_pool: tuple[str, ...] = DEFAULT_SOURCE_VARS
    shape_weights: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_SHAPE_WEIGHTS))
    value_only: bool = False
    zero_arguments: Optional[bool] = None

    def __post_init__(self):
        if self.max_depth < 0:
            raise ValueError("max_depth must be non-negative")
        if not self.scalar_pool:
            raise ValueError("scalar_pool must not be empty")
        if not self.source_var_pool:
            raise ValueError("source_var_pool must not be empty")
        for name in self.source_var_pool:
            if var_name(name).namespace is not Namespace.SOURCE:
                raise ValueError(f"'{name}' is reserved and cannot be a source variable")
        unknown = set(self.shape_weights) - set(DEFAULT_SHAPE_WEIGHTS)
        if unknown:
            raise ValueError(f"Unknown term shapes: {', '.join(sorted(unknown))}")
        if not any(weight > 0 for weight in self.shape_weights.values()):
            raise ValueError("At least one term shape needs a positive weight")

    def for_direction(self, direction: Direction) -> "GenConfig":
        if self.zero_arguments is not None:
            return self
        return replace(self, zero_arguments=Direction(direction) is Direction.V2N)


@dataclass(frozen=True)
class Budgets:
    """Search limits for one instance."""
    states: int = 10_000
    steps: int = 1_000
    graph_states: int = 2_000
    successors: int = 4

    def __post_init__(self):
        for name in ("states", "steps", "graph_states", "successors"):
            if getattr(self, name) <= 0:
                raise ValueError(f"Budget '{name}' must be positive")


class TermGenerator:
    """Seeded random source terms, built top-down with a depth bound."""

    def __init__(self, cfg: GenConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng
        self.names = [var_name(name) for name in cfg.source_var_pool]
        self.small = max(1, cfg.max_depth // 2)

    def _shape(self, allowed) -> str:
        shapes = [s for s in allowed if self.cfg.shape_weights.get(s, 0) > 0]
        if not shapes:
            return "var"
        weights = [self.cfg.shape_weights[s] for s in shapes]
        return self.rng.choices(shapes, weights)[0]

    def scalar(self) -> Scalar:
        return self.rng.choice(self.cfg.scalar_pool)

    def variable(self) -> Var:
        return Var(self.rng.choice(self.names))

    def term(self, depth: int, argument: bool = False) -> Term:
        if depth <= 0:
            return self.variable()
        shape = self._shape(DEFAULT_SHAPE_WEIGHTS)
        if shape == "zero" and argument and not self.cfg.zero_arguments:
            shape = "var"
        if shape == "var":
            return self.variable()
        if shape == "zero":
            return ZERO
        if shape == "lam":
            return Lam(self.rng.choice(self.names), self.term(depth - 1))
        if shape == "app":
            return App(self.term(depth - 1), self.term(depth - 1, argument=True))
        if shape == "scale":
            return Scale(self.scalar(), self.term(depth - 1))
        return Sum(self.term(depth - 1), self.term(depth - 1))

    def value(self, depth: int) -> Term:
        if depth <= 0:
            return self.variable()
        shape = self._shape(VALUE_SHAPES)
        if shape == "var":
            return self.variable()
        if shape == "zero":
            return ZERO
        if shape == "lam":
            return Lam(self.rng.choice(self.names), self.term(depth - 1))
        if shape == "scale":
            return Scale(self.scalar(), self.value(depth - 1))
        return Sum(self.value(depth - 1), self.value(depth - 1))

    def base_value(self, depth: int) -> Term:
        if depth <= 0 or self.rng.random() < 0.4:
            return self.variable()
        return Lam(self.rng.choice(self.names), self.term(depth - 1))

    def abstraction(self, depth: int) -> Lam:
        return Lam(self.rng.choice(self.names), self.term(max(depth - 1, 0)))

    def source(self) -> Term:
        if self.cfg.value_only:
            return self.value(self.cfg.max_depth)
        return self.term(self.cfg.max_depth)


def gen_term(cfg: GenConfig, rng: Optional[random.Random] = None) -> Term:
    """
    Generate a source term. The same seed always yields the same term.

    Args:
        cfg: Generator settings
        rng: Random source (seeded from cfg.seed if None)
    """
    return TermGenerator(cfg, rng or random.Random(cfg.seed)).source()


def has_zero_argument(term: Term) -> bool:
    return any(isinstance(t, App) and isinstance(t.arg, Zero) for t in subterms(term))


# Instance builders


def reduction_prefix(
    term: Term,
    calculus: Calculus,
    rng: random.Random,
    max_steps: int = MAX_PREFIX_STEPS,
) -> tuple[Term, list[Step]]:
    """Follow a random path of up to `max_steps` steps."""
    steps = []
    current = term
    for _ in range(rng.randint(0, max_steps)):
        options = successors(current, calculus)
        if not options:
            break
        step = rng.choice(options)
        steps.append(step)
        current = step.target
    return current, steps


def build_computation(source: Term, direction: Direction, rng: random.Random) -> Term:
    """A computation reachable from the translation of `source` applied to k."""
    computation, _ = reduction_prefix(apply_k(cps(source, direction)), direction.target, rng)
    return computation


def build_base_computation(source: Term, direction: Direction, rng: random.Random) -> Term:
    atoms = [atom for _, atom in linear_atoms(build_computation(source, direction, rng))]
    if atoms:
        return rng.choice(atoms)
    return colon(Var(var_name("x")), KVAR, direction)


def build_suspension(
    source: Term, direction: Direction, generator: TermGenerator
) -> Term:
    """A combination of two or three translated terms, the first one translating `source`."""
    rng = generator.rng
    parts = [cps(source, direction)]
    parts.append(parts[0] if rng.random() < 0.3 else cps(generator.term(generator.small), direction))
    if rng.random() < 0.3:
        parts.append(cps(generator.term(generator.small), direction))
    summands = [Scale(generator.scalar(), p) if rng.random() < 0.4 else p for p in parts]
    return plus(*summands)


def build_base_suspension(generator: TermGenerator, direction: Direction) -> Term:
    term = generator.term(generator.small, argument=True)
    if isinstance(term, Zero):
        term = generator.variable()
    return cps(term, direction)


def build_cps_value(generator: TermGenerator, direction: Direction) -> Term:
    if direction is Direction.N2V:
        return value_image(generator.abstraction(generator.small), direction)
    return value_image(generator.base_value(generator.small), direction)


def build_continuation(generator: TermGenerator, direction: Direction, depth: int = 2) -> Term:
    """A random continuation of the direction's K grammar, ending in k."""
    rng = generator.rng
    if depth <= 0 or rng.random() < 0.3:
        return KVAR
    rest = build_continuation(generator, direction, depth - 1)
    if direction is Direction.N2V:
        suspension = cps(generator.term(generator.small, argument=True), direction)
        return Lam(B, app(BVAR, suspension, rest))
    if rng.random() < 0.5:
        return Lam(B, app(build_cps_value(generator, direction), BVAR, rest))
    suspension = build_suspension(generator.term(generator.small), direction, generator)
    return Lam(B1, App(suspension, Lam(B2, app(B1VAR, B2VAR, rest))))


# Verdicts and reports


class Outcome(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"
    SKIP = "skip"


@dataclass
class Verdict:
    outcome: Outcome
    detail: str = ""
    witness: Optional[str] = None


PASSED = Verdict(Outcome.PASS)


def _fail(detail: str, witness: Optional[str] = None) -> Verdict:
    return Verdict(Outcome.FAIL, detail, witness)


@dataclass
class Failure:
    """A failing instance, replayable from its seed and term text."""
    seed: int
    term: str
    detail: str
    witness: Optional[str] = None
    original: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        data = {"seed": self.seed, "term": self.term, "detail": self.detail}
        if self.witness is not None:
            data["witness"] = self.witness
        if self.original is not None:
            data["original"] = self.original
        return data


@dataclass
class CheckReport:
    name: str
    lemma: str
    direction: Optional[str] = None
    attempted: int = 0
    passed: int = 0
    failures: list[Failure] = field(default_factory=list)
    inconclusive: int = 0
    skipped: int = 0
    coverage: Counter = field(default_factory=Counter)
    extra: dict[str, Any] = field(default_factory=dict)
    elapsed_s: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def inconclusive_ratio(self) -> float:
        return self.inconclusive / self.attempted if self.attempted else 0.0

    def tally(self, verdict: Verdict) -> None:
        if verdict.outcome is Outcome.SKIP:
            self.skipped += 1
            return
        self.attempted += 1
        if verdict.outcome is Outcome.PASS:
            self.passed += 1
        elif verdict.outcome is Outcome.INCONCLUSIVE:
            self.inconclusive += 1

    def summary(self) -> str:
        text = f"{self.passed}/{self.attempted} passed"
        if self.failures:
            text += f", {len(self.failures)} failed"
        if self.inconclusive:
            text += f", {self.inconclusive} inconclusive"
        if self.skipped:
            text += f", {self.skipped} skipped"
        return text

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "lemma": self.lemma,
            "direction": self.direction,
            "attempted": self.attempted,
            "passed": self.passed,
            "failed": len(self.failures),
            "inconclusive": self.inconclusive,
            "skipped": self.skipped,
            "elapsed_s": round(self.elapsed_s, 3),
            "failures": [f.to_dict() for f in self.failures],
            "coverage": dict(sorted(self.coverage.items())),
            "extra": self.extra,
        }


@dataclass
class CheckContext:
    """What a lemma check gets besides its source term."""
    direction: Direction
    rng: random.Random
    generator: TermGenerator
    budgets: Budgets
    coverage: Counter
    notes: Counter


def _record(ctx: CheckContext, steps) -> None:
    for step in steps:
        for label in step.labels():
            ctx.coverage[label.value] += 1


def _reaches(
    ctx: CheckContext, start: Term, goal: Term, calculus: Calculus, what: str
) -> Optional[Verdict]:
    """None when `start` reaches `goal`, otherwise the verdict to report."""
    result = reachable(start, goal, calculus, ctx.budgets.states)
    if result.found:
        _record(ctx, result.trace.steps)
        return None
    if result.status is SearchStatus.EXHAUSTED:
        return Verdict(Outcome.INCONCLUSIVE, f"{what}: budget exhausted after {result.explored} states")
    return _fail(f"{what}: {start} does not reach {goal} in {calculus.symbol}", witness=str(goal))


def _worst(verdicts: Iterable[Optional[Verdict]]) -> Optional[Verdict]:
    """The first failure, else the first inconclusive verdict, else None."""
    pending = None
    for verdict in verdicts:
        if verdict is None:
            continue
        if verdict.outcome is Outcome.FAIL:
            return verdict
        pending = pending or verdict
    return pending


def _mismatch(what: str, left: Term, right: Term) -> Optional[Verdict]:
    if alpha_eq(left, right):
        return None
    return _fail(f"{what}: {left} differs from {right}", witness=f"{left} | {right}")


def _sample(ctx: CheckContext, items: list) -> list:
    return ctx.rng.sample(items, min(ctx.budgets.successors, len(items)))


def _pick_variable(ctx: CheckContext, *terms: Term):
    names = sorted(
        {n for t in terms for n in free_vars(t) if n.namespace is Namespace.SOURCE},
        key=str,
    )
    return ctx.rng.choice(names or ctx.generator.names)


def _substitution_pair(ctx: CheckContext) -> tuple[Term, Term]:
    """A target term to substitute and its source-side image."""
    if ctx.direction is Direction.V2N:
        value = build_cps_value(ctx.generator, ctx.direction)
        return value, inv_value(value, ctx.direction)
    suspension = build_base_suspension(ctx.generator, ctx.direction)
    return suspension, inv_suspension(suspension, ctx.direction)


# Lemma checks


def check_free_variables(ctx: CheckContext, source: Term) -> Verdict:
    translated = cps(source, ctx.direction)
    if free_vars(translated) != free_vars(source):
        return _fail(f"translation has free variables {_names(free_vars(translated))}, "
                     f"source has {_names(free_vars(source))}")
    if free_vars(apply_k(translated)) != free_vars(source) | {K}:
        return _fail("applying the translation to k does not add exactly k")
    return PASSED


def _names(names) -> str:
    return "{" + ", ".join(sorted(str(n) for n in names)) + "}"


def check_image_classes(ctx: CheckContext, source: Term) -> Verdict:
    d = ctx.direction
    translated = cps(source, d)
    if not is_suspension(translated, d):
        return _fail(f"translation is classified {classify(translated, d).value}, not a suspension")
    for what, term in (("translation applied to k", apply_k(translated)),
                       ("colon translation", colon(source, KVAR, d))):
        if not is_computation(term, d):
            return _fail(f"{what} is classified {classify(term, d).value}, not a computation")
    return PASSED


def check_administrative_collapse(ctx: CheckContext, source: Term) -> Verdict:
    d = ctx.direction
    start = apply_k(cps(source, d))
    return _reaches(ctx, start, colon(source, KVAR, d), d.target, "administrative collapse") or PASSED


def check_inverse_term(ctx: CheckContext, source: Term) -> Verdict:
    back = inv_computation(apply_k(cps(source, ctx.direction)), ctx.direction)
    return _mismatch("decompiled translation", back, source) or PASSED


def check_inverse_value(ctx: CheckContext, source: Term) -> Verdict:
    back = inv_computation(colon(source, KVAR, ctx.direction), ctx.direction)
    return _mismatch("decompiled colon translation", back, source) or PASSED


def non_injectivity_witness(direction: Direction) -> Verdict:
    """The colon translation forgets how a sum in function position was written."""
    source = parse_term(NON_INJECTIVE_WITNESS)
    back = inv_computation(colon(source, KVAR, direction), direction)
    if alpha_eq(back, source):
        return _fail(f"{source} decompiles to itself")
    return Verdict(Outcome.PASS, f"{source} decompiles to {back}")


def check_non_injectivity(ctx: CheckContext, source: Term) -> Verdict:
    d, generator = ctx.direction, ctx.generator
    argument = generator.term(generator.small, argument=True)
    other = generator.term(generator.small)
    scalar = generator.scalar()
    pairs = (
        (App(Scale(scalar, source), argument), Scale(scalar, App(source, argument))),
        (App(Sum(source, other), argument), Sum(App(source, argument), App(other, argument))),
    )
    for left, right in pairs:
        if colon(left, KVAR, d) != colon(right, KVAR, d):
            return _fail(f"{left} and {right} have different colon translations")
    if not alpha_eq(inv_computation(colon(source, KVAR, d), d), source):
        ctx.notes["non-injective instances"] += 1
    return PASSED


def check_substitution_value(ctx: CheckContext, source: Term) -> Verdict:
    d = ctx.direction
    base = source
    if not isinstance(source, Lam) and not (d is Direction.V2N and isinstance(source, Var)):
        base = Lam(ctx.rng.choice(ctx.generator.names), source)
    value = value_image(base, d)
    replacement, image = _substitution_pair(ctx)
    x = _pick_variable(ctx, value)
    left = substitute(inv_value(value, d), x, image)
    right = inv_value(substitute(value, x, replacement), d)
    return _mismatch("value substitution", left, right) or PASSED


def check_substitution_suspension(ctx: CheckContext, source: Term) -> Verdict:
    d = ctx.direction
    suspension = build_suspension(source, d, ctx.generator)
    replacement, image = _substitution_pair(ctx)
    x = _pick_variable(ctx, suspension)
    left = substitute(inv_suspension(suspension, d), x, image)
    right = inv_suspension(substitute(suspension, x, replacement), d)
    return _mismatch("suspension substitution", left, right) or PASSED


def check_substitution_computation(ctx: CheckContext, source: Term) -> Verdict:
    d = ctx.direction
    computation = build_base_computation(source, d, ctx.rng)
    replacement, image = _substitution_pair(ctx)
    x = _pick_variable(ctx, computation)
    left = substitute(inv_computation(computation, d), x, image)
    right = inv_computation(substitute(computation, x, replacement), d)
    return _mismatch("computation substitution", left, right) or PASSED


def check_substitution_continuation(ctx: CheckContext, source: Term) -> Verdict:
    d = ctx.direction
    cont = build_continuation(ctx.generator, d)
    replacement, image = _substitution_pair(ctx)
    x = _pick_variable(ctx, cont, source)
    left = substitute(apply_continuation(cont, source, d), x, image)
    right = apply_continuation(substitute(cont, x, replacement), substitute(source, x, image), d)
    return _mismatch("continuation substitution", left, right) or PASSED


def check_continuation_composition(ctx: CheckContext, source: Term) -> Verdict:
    d = ctx.direction
    outer = build_continuation(ctx.generator, d)
    inner = build_continuation(ctx.generator, d)
    left = apply_continuation(outer, apply_continuation(inner, source, d), d)
    right = apply_continuation(substitute(inner, K, outer), source, d)
    return _mismatch("continuation composition", left, right) or PASSED


def check_continuation_substitution(ctx: CheckContext, source: Term) -> Verdict:
    d = ctx.direction
    computation = build_base_computation(source, d, ctx.rng)
    cont = build_continuation(ctx.generator, d)
    left = apply_continuation(cont, inv_computation(computation, d), d)
    right = inv_computation(substitute(computation, K, cont), d)
    return _mismatch("continuation substitution", left, right) or PASSED


def check_continuation_step(ctx: CheckContext, source: Term) -> Verdict:
    d = ctx.direction
    steps = successors(source, d.source)
    if not steps:
        return Verdict(Outcome.SKIP, "source has no redex")
    cont = build_continuation(ctx.generator, d)
    filled = apply_continuation(cont, source, d)
    after = successors(filled, d.source)
    for step in _sample(ctx, steps):
        expected = apply_continuation(cont, step.target, d)
        matches = [s for s in after if alpha_eq(s.target, expected)]
        if not matches:
            return _fail(
                f"{step.rule.value} step of the hole is not a step of {filled}",
                witness=str(expected),
            )
        _record(ctx, matches[:1])
    return PASSED


def check_continuation_linearity(ctx: CheckContext, source: Term) -> Verdict:
    d, generator = ctx.direction, ctx.generator
    cont = build_continuation(generator, d)
    other = generator.term(generator.small)
    scalar = generator.scalar()

    def fill(term: Term) -> Term:
        return apply_continuation(cont, term, d)

    bullets = (
        ("sum", fill(Sum(source, other)), Sum(fill(source), fill(other))),
        ("scaling", fill(Scale(scalar, source)), Scale(scalar, fill(source))),
        ("zero", fill(ZERO), ZERO),
    )
    for what, start, goal in bullets:
        verdict = _reaches(ctx, start, goal, d.source, f"linearity of the continuation over {what}")
        if verdict:
            return verdict
    return PASSED


def check_suspension_step(ctx: CheckContext, source: Term) -> Verdict:
    d = ctx.direction
    suspension = build_suspension(source, d, ctx.generator)
    decompiled = inv_suspension(suspension, d)
    after = successors(decompiled, d.source)
    for step in _sample(ctx, successors(suspension, d.target)):
        expected = inv_suspension(step.target, d)
        matches = [s for s in after if alpha_eq(s.target, expected)]
        if not matches:
            return _fail(
                f"{step.rule.value} step of {suspension} has no counterpart from {decompiled}",
                witness=str(expected),
            )
        _record(ctx, [step])
    return PASSED


def check_inverse_step(ctx: CheckContext, source: Term) -> Verdict:
    d = ctx.direction
    computation = build_computation(source, d, ctx.rng)
    decompiled = inv_computation(computation, d)
    for step in _sample(ctx, successors(computation, d.target)):
        verdict = _reaches(
            ctx, decompiled, inv_computation(step.target, d), d.source,
            f"decompiled {step.rule.value} step",
        )
        if verdict:
            return verdict
    return PASSED


def check_grammar_closure(ctx: CheckContext, source: Term) -> Verdict:
    d = ctx.direction
    cases = (
        ("computation", build_computation(source, d, ctx.rng), is_computation),
        ("suspension", build_suspension(source, d, ctx.generator), is_suspension),
        ("continuation", build_continuation(ctx.generator, d), is_continuation),
    )
    for what, term, recognizer in cases:
        for step in successors(term, d.target):
            if not recognizer(step.target, d):
                return _fail(
                    f"{step.rule.value} step leaves the {what} grammar",
                    witness=str(step.target),
                )
            _record(ctx, [step])
    return PASSED


def check_indifference(ctx: CheckContext, source: Term) -> Verdict:
    computation = build_computation(source, ctx.direction, ctx.rng)
    by_calculus = {}
    for calculus in Calculus:
        steps = successors(computation, calculus)
        _record(ctx, steps)
        by_calculus[calculus] = {nameless_key(step.target) for step in steps}
    if by_calculus[Calculus.LIN] != by_calculus[Calculus.ALG]:
        only = by_calculus[Calculus.LIN] ^ by_calculus[Calculus.ALG]
        return _fail(f"the calculi disagree on {len(only)} successors of {computation}")
    return PASSED


def check_soundness(ctx: CheckContext, source: Term) -> Verdict:
    """If M reduces to a value V, the translation applied to k reaches V:k."""
    d = ctx.direction
    result = normalize(source, d.source, ctx.budgets.steps)
    if not result.is_value:
        return Verdict(Outcome.SKIP, f"source is {result.status.value}")
    _record(ctx, result.trace.steps)
    start = apply_k(cps(source, d))
    return _reaches(ctx, start, colon(result.term, KVAR, d), d.target, "soundness") or PASSED


def check_completeness(ctx: CheckContext, source: Term) -> Verdict:
    """Every value the translation reaches is a value the source reaches."""
    d = ctx.direction
    space = StateSpace(apply_k(cps(source, d)), d.target, ctx.budgets.graph_states)
    space.run()
    candidates = []
    for key, state in list(space.states.items()):
        if not is_computation(state, d):
            continue
        candidate = inv_computation(state, d)
        if is_value(candidate) and linear_key(colon(candidate, KVAR, d)) == key:
            candidates.append(candidate)
    verdict = _worst(
        _reaches(ctx, source, candidate, d.source, "completeness") for candidate in candidates
    )
    if verdict:
        return verdict
    if space.exhausted:
        return Verdict(Outcome.INCONCLUSIVE, f"target graph exceeds {ctx.budgets.graph_states} states")
    if not candidates:
        return Verdict(Outcome.SKIP, "translation reaches no value")
    return PASSED


# Rule-line fixtures: one redex per rule line, with the expected successor


@dataclass(frozen=True)
class RuleFixture:
    calculus: Calculus
    source: str
    label: RuleLabel
    expected: str
    position: tuple[int, ...] = ()


RULE_FIXTURES = (
    RuleFixture(Calculus.ALG, r"(\x. f x x) (y + z)", RuleLabel.BetaN, "f (y + z) (y + z)"),
    RuleFixture(Calculus.LIN, r"(\x. f x x) y", RuleLabel.BetaV, "f y y"),
    RuleFixture(Calculus.ALG, "(f + g) x", RuleLabel.A_app_sum, "f x + g x"),
    RuleFixture(Calculus.ALG, "(2.f) x", RuleLabel.A_app_scale, "2.(f x)"),
    RuleFixture(Calculus.ALG, "0 x", RuleLabel.A_app_zero, "0"),
    RuleFixture(Calculus.LIN, "(f + g) x", RuleLabel.Al_sum, "f x + g x"),
    RuleFixture(Calculus.LIN, "(2.f) x", RuleLabel.Al_scale, "2.(f x)"),
    RuleFixture(Calculus.LIN, "0 x", RuleLabel.Al_zero, "0"),
    RuleFixture(Calculus.LIN, "f (x + y)", RuleLabel.Ar_sum, "f x + f y"),
    RuleFixture(Calculus.LIN, "f (2.x)", RuleLabel.Ar_scale, "2.(f x)"),
    RuleFixture(Calculus.LIN, "f 0", RuleLabel.Ar_zero, "0"),
    RuleFixture(Calculus.LIN, "x + (y + z)", RuleLabel.Asso_L, "(x + y) + z"),
    RuleFixture(Calculus.ALG, "(x + y) + z", RuleLabel.Asso_R, "x + (y + z)"),
    RuleFixture(Calculus.LIN, "x + y", RuleLabel.Com, "y + x"),
    RuleFixture(Calculus.ALG, "2.x + 3.x", RuleLabel.F1, "5.x"),
    RuleFixture(Calculus.LIN, "2.x + x", RuleLabel.F2, "3.x"),
    RuleFixture(Calculus.ALG, "x + x", RuleLabel.F3, "2.x"),
    RuleFixture(Calculus.LIN, "2.3.x", RuleLabel.F4, "6.x"),
    RuleFixture(Calculus.ALG, "2.(x + y)", RuleLabel.S1, "2.x + 2.y"),
    RuleFixture(Calculus.LIN, "1.x", RuleLabel.S2, "x"),
    RuleFixture(Calculus.ALG, "0.x", RuleLabel.S3, "0"),
    RuleFixture(Calculus.LIN, "2.0", RuleLabel.S4, "0"),
    RuleFixture(Calculus.ALG, "0 + x", RuleLabel.S5, "x"),
    RuleFixture(Calculus.ALG, r"(\x. x) f y", RuleLabel.Xi_appL, "f y", (0,)),
    RuleFixture(Calculus.LIN, r"(\x. x) y + z", RuleLabel.Xi_sumL, "y + z", (0,)),
    RuleFixture(Calculus.LIN, r"z + (\x. x) y", RuleLabel.Xi_sumR, "z + y", (1,)),
    RuleFixture(Calculus.ALG, r"2.(\x. x) y", RuleLabel.Xi_scale, "2.y", (0,)),
    RuleFixture(Calculus.LIN, r"f ((\x. x) y)", RuleLabel.XiLin_appR, "f y", (1,)),
)


def check_rule_fixture(fixture: RuleFixture, coverage: Counter) -> Verdict:
    source = parse_term(fixture.source)
    expected = parse_term(fixture.expected)
    for step in successors(source, fixture.calculus):
        if step.position != fixture.position or fixture.label not in step.labels():
            continue
        if alpha_eq(step.target, expected) and alpha_eq(replay(step), step.target):
            for label in step.labels():
                coverage[label.value] += 1
            return PASSED
    return _fail(
        f"{fixture.label.value} does not take {fixture.source} to {fixture.expected} "
        f"in {fixture.calculus.symbol}"
    )


# Registry


@dataclass(frozen=True)
class Lemma:
    name: str
    summary: str
    check: Optional[Callable[[CheckContext, Term], Verdict]] = None
    values: bool = False
    pinned: Optional[Callable[[Direction], Verdict]] = None

    @property
    def directional(self) -> bool:
        return self.check is not None

    def accepts(self, term: Term, cfg: GenConfig) -> bool:
        if self.values and not is_value(term):
            return False
        return cfg.zero_arguments or not has_zero_argument(term)


LEMMAS: dict[str, Lemma] = {
    lemma.name: lemma
    for lemma in (
        Lemma("rule-lines", "each rule line rewrites its fixture redex as expected"),
        Lemma("free-variables", "translation preserves free variables", check_free_variables),
        Lemma("image-classes", "translations land in the CPS grammar", check_image_classes),
        Lemma("administrative-collapse", "translation applied to k reaches the colon translation",
              check_administrative_collapse),
        Lemma("inverse-term", "decompiling a translation gives back the term", check_inverse_term),
        Lemma("inverse-value", "decompiling V:k gives back the value V", check_inverse_value,
              values=True),
        Lemma("non-injectivity", "the colon translation identifies distributed applications",
              check_non_injectivity, pinned=non_injectivity_witness),
        Lemma("substitution-value", "decompiling CPS-values commutes with substitution",
              check_substitution_value),
        Lemma("substitution-suspension", "decompiling suspensions commutes with substitution",
              check_substitution_suspension),
        Lemma("substitution-computation", "decompiling computations commutes with substitution",
              check_substitution_computation),
        Lemma("substitution-continuation", "decompiled continuations commute with substitution",
              check_substitution_continuation),
        Lemma("continuation-composition", "decompiled continuations compose by substituting k",
              check_continuation_composition),
        Lemma("continuation-substitution", "substituting k plugs the decompiled computation",
              check_continuation_substitution),
        Lemma("continuation-step", "decompiled continuations are reduction contexts",
              check_continuation_step),
        Lemma("continuation-linearity", "decompiled continuations are linear",
              check_continuation_linearity),
        Lemma("suspension-step", "suspension steps decompile to single steps",
              check_suspension_step),
        Lemma("inverse-step", "computation steps decompile to reductions", check_inverse_step),
        Lemma("grammar-closure", "the CPS grammar is closed under reduction", check_grammar_closure),
        Lemma("indifference", "both calculi reduce CPS computations alike", check_indifference),
        Lemma("soundness", "source values are simulated by the translation", check_soundness),
        Lemma("completeness", "values reached by the translation are reached by the source",
              check_completeness),
    )
}
LEMMA_NAMES = tuple(LEMMAS)


def get_lemma(name: str) -> Lemma:
    if name not in LEMMAS:
        raise UnknownLemmaError(name, LEMMA_NAMES)
    return LEMMAS[name]


def report_name(lemma: str, direction: Optional[Direction]) -> str:
    return f"{lemma}[{Direction(direction).value}]" if direction else lemma


# Runner


def instance_seed(seed: int, lemma: str, direction: Optional[Direction], index: int) -> int:
    tag = Direction(direction).value if direction else "-"
    return zlib.crc32(f"{seed}:{lemma}:{tag}:{index}".encode())


def run_instance(
    lemma: Lemma,
    source: Term,
    direction: Direction,
    seed: int,
    cfg: GenConfig,
    budgets: Budgets,
    coverage: Optional[Counter] = None,
    notes: Optional[Counter] = None,
) -> Verdict:
    """Run one check on a given source term; the seed drives the instance builders."""
    rng = random.Random(seed * 2 + 1)
    ctx = CheckContext(
        direction=direction,
        rng=rng,
        generator=TermGenerator(cfg, rng),
        budgets=budgets,
        coverage=coverage if coverage is not None else Counter(),
        notes=notes if notes is not None else Counter(),
    )
    try:
        return lemma.check(ctx, source)
    except AlgCpsError as e:
        return _fail(f"{type(e).__name__}: {e.message}")


def _shrink_candidates(term: Term) -> list[Term]:
    found = set()
    for sub in subterms(term):
        if sub is not term:
            found.add(sub)
    # hoist each child over its parent, anywhere in the term
    stack = [((), term)]
    while stack:
        path, node = stack.pop()
        for index, child in enumerate(children(node)):
            found.add(replace_at(term, path, child))
            stack.append((path + (index,), child))
    found.discard(term)
    return sorted(found, key=lambda t: (t.size, nameless_key(t)))[:SHRINK_CANDIDATES]


def shrink(
    lemma: Lemma,
    source: Term,
    direction: Direction,
    seed: int,
    cfg: GenConfig,
    budgets: Budgets,
) -> tuple[Term, Optional[Verdict]]:
    """
    Greedily replace a failing term with its smallest failing candidate.

    Returns:
        The shrunk term and its failing verdict (None if nothing smaller fails)
    """
    current, verdict = source, None
    runs = 0
    for _ in range(SHRINK_ROUNDS):
        for candidate in _shrink_candidates(current):
            if runs >= SHRINK_RUNS:
                get_logger().debug(f"Shrinking stopped after {runs} runs at {current}")
                return current, verdict
            if not lemma.accepts(candidate, cfg):
                continue
            runs += 1
            result = run_instance(lemma, candidate, direction, seed, cfg, budgets)
            if result.outcome is Outcome.FAIL:
                current, verdict = candidate, result
                break
        else:
            break
    return current, verdict


def _check_fixtures(lemma: Lemma) -> CheckReport:
    report = CheckReport(name=lemma.name, lemma=lemma.name)
    started = time.monotonic()
    for index, fixture in enumerate(RULE_FIXTURES):
        verdict = check_rule_fixture(fixture, report.coverage)
        report.tally(verdict)
        if verdict.outcome is Outcome.FAIL:
            report.failures.append(Failure(index, fixture.source, verdict.detail))
    report.elapsed_s = time.monotonic() - started
    return report


def check_lemma(
    name: str,
    direction: Optional[Direction] = None,
    cfg: Optional[GenConfig] = None,
    budgets: Optional[Budgets] = None,
    instances: int = DEFAULT_INSTANCES,
    shrink_failures: bool = True,
) -> CheckReport:
    """
    Check one lemma in one direction on generated instances.

    Args:
        name: Lemma id (see LEMMA_NAMES)
        direction: Translation direction (ignored by rule-lines)
        cfg: Generator settings
        budgets: Search limits per instance
        instances: Number of instances that must be attempted
        shrink_failures: Shrink the first failing term before reporting it

    Returns:
        CheckReport with pass/fail/inconclusive counts and rule coverage

    Raises:
        UnknownLemmaError: If the lemma id is unknown
    """
    logger = get_logger()
    lemma = get_lemma(name)
    if not lemma.directional:
        report = _check_fixtures(lemma)
        logger.info(f"{report.name}: {report.summary()}")
        return report
    if direction is None:
        raise ValueError(f"Lemma '{name}' needs a direction")

    direction = Direction(direction)
    cfg = (cfg or GenConfig()).for_direction(direction)
    if lemma.values:
        cfg = replace(cfg, value_only=True)
    budgets = budgets or Budgets()

    report = CheckReport(name=report_name(name, direction), lemma=name, direction=direction.value)
    notes: Counter = Counter()
    started = time.monotonic()

    if lemma.pinned:
        verdict = lemma.pinned(direction)
        report.tally(verdict)
        report.extra["witness"] = verdict.detail
        if verdict.outcome is Outcome.FAIL:
            report.failures.append(Failure(0, NON_INJECTIVE_WITNESS, verdict.detail))

    tries = 0
    while report.attempted < instances and tries < instances * MAX_TRIES_FACTOR:
        seed = instance_seed(cfg.seed, name, direction, tries)
        tries += 1
        source = TermGenerator(cfg, random.Random(seed * 2)).source()
        verdict = run_instance(lemma, source, direction, seed, cfg, budgets, report.coverage, notes)
        report.tally(verdict)
        if verdict.outcome is not Outcome.FAIL:
            continue

        failure = Failure(seed, str(source), verdict.detail, verdict.witness)
        if shrink_failures and not report.failures:
            smaller, smaller_verdict = shrink(lemma, source, direction, seed, cfg, budgets)
            if smaller_verdict is not None:
                failure = Failure(
                    seed, str(smaller), smaller_verdict.detail, smaller_verdict.witness,
                    original=str(source),
                )
        logger.debug(f"{report.name} failed on {failure.term} (seed {seed}): {failure.detail}")
        report.failures.append(failure)

    if report.attempted < instances:
        logger.warning(
            f"{report.name}: only {report.attempted} of {instances} instances applicable "
            f"after {tries} tries"
        )
    if notes:
        report.extra["notes"] = dict(notes)
    report.elapsed_s = time.monotonic() - started
    logger.info(f"{report.name}: {report.summary()}")
    return report


def check_term(
    name: str,
    term: Term,
    direction: Direction,
    budgets: Optional[Budgets] = None,
    seed: int = 0,
    cfg: Optional[GenConfig] = None,
) -> CheckReport:
    """Run a lemma on one given source term instead of generated ones."""
    lemma = get_lemma(name)
    if not lemma.directional:
        raise ValueError(f"Lemma '{name}' does not take a term")
    direction = Direction(direction)
    cfg = (cfg or GenConfig(seed=seed)).for_direction(direction)
    report = CheckReport(name=report_name(name, direction), lemma=name, direction=direction.value)
    started = time.monotonic()
    verdict = run_instance(lemma, term, direction, seed, cfg, budgets or Budgets(), report.coverage)
    report.tally(verdict)
    if verdict.outcome is Outcome.FAIL:
        report.failures.append(Failure(seed, str(term), verdict.detail, verdict.witness))
    elif verdict.outcome is not Outcome.PASS:
        report.extra["reason"] = verdict.detail
    report.elapsed_s = time.monotonic() - started
    return report
