"""
One-step reduction for both calculi, reachability search and the normalizer
"""
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterator, Optional

from .errors import RewriteError
from .logger import get_logger
from .scalars import ONE, is_one, is_zero
from .terms import (
    ZERO,
    App,
    Lam,
    Scale,
    Sum,
    Term,
    Zero,
    alpha_eq,
    canonicalize_linear,
    is_base_value,
    is_value,
    linear_key,
    replace_at,
    subterm_at,
    substitute,
)

DEFAULT_MAX_STATES = 100_000
DEFAULT_MAX_STEPS = 1_000


class Calculus(str, Enum):
    LIN = "lin"
    ALG = "alg"

    @property
    def symbol(self) -> str:
        return f"λ_{self.value}"


class RuleLabel(str, Enum):
    """One label per rule line of the rewrite system."""
    BetaN = "BetaN"
    BetaV = "BetaV"
    A_app_sum = "A_app_sum"
    A_app_scale = "A_app_scale"
    A_app_zero = "A_app_zero"
    Al_sum = "Al_sum"
    Al_scale = "Al_scale"
    Al_zero = "Al_zero"
    Ar_sum = "Ar_sum"
    Ar_scale = "Ar_scale"
    Ar_zero = "Ar_zero"
    Asso_L = "Asso_L"
    Asso_R = "Asso_R"
    Com = "Com"
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"
    S5 = "S5"
    Xi_appL = "Xi_appL"
    Xi_sumL = "Xi_sumL"
    Xi_sumR = "Xi_sumR"
    Xi_scale = "Xi_scale"
    XiLin_appR = "XiLin_appR"

    @property
    def group(self) -> str:
        return RULE_GROUPS[self]

    @property
    def is_vector_space(self) -> bool:
        return self in VECTOR_SPACE_RULES

    @property
    def is_context(self) -> bool:
        return self in CONTEXT_RULES


RULE_GROUPS = {
    RuleLabel.BetaN: "β_n",
    RuleLabel.BetaV: "β_v",
    RuleLabel.A_app_sum: "A",
    RuleLabel.A_app_scale: "A",
    RuleLabel.A_app_zero: "A",
    RuleLabel.Al_sum: "A_l",
    RuleLabel.Al_scale: "A_l",
    RuleLabel.Al_zero: "A_l",
    RuleLabel.Ar_sum: "A_r",
    RuleLabel.Ar_scale: "A_r",
    RuleLabel.Ar_zero: "A_r",
    RuleLabel.Asso_L: "Asso",
    RuleLabel.Asso_R: "Asso",
    RuleLabel.Com: "Com",
    RuleLabel.F1: "F",
    RuleLabel.F2: "F",
    RuleLabel.F3: "F",
    RuleLabel.F4: "F",
    RuleLabel.S1: "S",
    RuleLabel.S2: "S",
    RuleLabel.S3: "S",
    RuleLabel.S4: "S",
    RuleLabel.S5: "S",
    RuleLabel.Xi_appL: "ξ",
    RuleLabel.Xi_sumL: "ξ",
    RuleLabel.Xi_sumR: "ξ",
    RuleLabel.Xi_scale: "ξ",
    RuleLabel.XiLin_appR: "ξ_λlin",
}

VECTOR_SPACE_RULES = frozenset(
    label for label, group in RULE_GROUPS.items() if group in ("Asso", "Com", "F", "S")
)
CONTEXT_RULES = frozenset(
    label for label, group in RULE_GROUPS.items() if group in ("ξ", "ξ_λlin")
)
LIN_ONLY_RULES = frozenset(
    label for label, group in RULE_GROUPS.items() if group in ("β_v", "A_l", "A_r", "ξ_λlin")
)
ALG_ONLY_RULES = frozenset(
    label for label, group in RULE_GROUPS.items() if group in ("β_n", "A")
)


def context_label(term: Term, index: int) -> RuleLabel:
    """The context rule that descends into child `index` of `term`."""
    if isinstance(term, App):
        return RuleLabel.Xi_appL if index == 0 else RuleLabel.XiLin_appR
    if isinstance(term, Sum):
        return RuleLabel.Xi_sumL if index == 0 else RuleLabel.Xi_sumR
    if isinstance(term, Scale):
        return RuleLabel.Xi_scale
    raise RewriteError(f"No context rule descends into {type(term).__name__}")


def format_position(position: tuple[int, ...]) -> str:
    return ".".join(str(i) for i in position) if position else "ε"


def parse_position(text: str) -> tuple[int, ...]:
    if text in ("ε", ""):
        return ()
    return tuple(int(part) for part in text.split("."))


@dataclass(frozen=True)
class Step:
    """A single reduction step: `rule` fired at `position` inside `source`."""
    source: Term
    target: Term
    rule: RuleLabel
    position: tuple[int, ...]
    calculus: Calculus

    def contexts(self) -> list[RuleLabel]:
        labels = []
        node = self.source
        for index in self.position:
            labels.append(context_label(node, index))
            node = subterm_at(node, (index,))
        return labels

    def labels(self) -> list[RuleLabel]:
        return [self.rule] + self.contexts()

    def to_dict(self) -> dict[str, Any]:
        return {
            "rule": self.rule.value,
            "position": format_position(self.position),
            "term": str(self.target),
        }


@dataclass
class Trace:
    """An initial term and the steps taken from it."""
    initial: Term
    steps: list[Step] = field(default_factory=list)

    @property
    def final(self) -> Term:
        return self.steps[-1].target if self.steps else self.initial

    def __len__(self):
        return len(self.steps)

    def states(self) -> list[Term]:
        return [self.initial] + [step.target for step in self.steps]

    def chains(self, modulo_linear: bool = False) -> bool:
        """
        True when every step starts exactly where the previous one ended, or
        only up to the vector-space rules with `modulo_linear`.
        """
        previous = self.initial
        for step in self.steps:
            if step.source != previous:
                if not modulo_linear or linear_key(step.source) != linear_key(previous):
                    return False
            previous = step.target
        return True

    def to_text(self) -> str:
        lines = [f"   {self.initial}"]
        previous = self.initial
        for step in self.steps:
            if step.source != previous:
                lines.append("~L")
                lines.append(f"   {step.source}")
            lines.append(f"{step.rule.value} @ {format_position(step.position)}")
            lines.append(f"   {step.target}")
            previous = step.target
        return "\n".join(lines)

    def to_dict(self) -> dict[str, Any]:
        steps = []
        previous = self.initial
        for step in self.steps:
            entry = step.to_dict()
            if step.source != previous:
                entry["renormalized_from"] = str(step.source)
            steps.append(entry)
            previous = step.target
        return {"initial": str(self.initial), "steps": steps}


def _root_rewrites(term: Term, calculus: Calculus, vector_space: bool) -> Iterator[tuple[RuleLabel, Term]]:
    """Rules whose redex is the whole term, in rule order."""
    lin = calculus is Calculus.LIN
    if isinstance(term, App):
        fun, arg = term.fun, term.arg
        if isinstance(fun, Lam):
            if not lin:
                yield RuleLabel.BetaN, substitute(fun.body, fun.var, arg)
            elif is_base_value(arg):
                yield RuleLabel.BetaV, substitute(fun.body, fun.var, arg)
        if not lin or is_value(arg):
            if isinstance(fun, Sum):
                label = RuleLabel.Al_sum if lin else RuleLabel.A_app_sum
                yield label, Sum(App(fun.left, arg), App(fun.right, arg))
            elif isinstance(fun, Scale):
                label = RuleLabel.Al_scale if lin else RuleLabel.A_app_scale
                yield label, Scale(fun.scalar, App(fun.body, arg))
            elif isinstance(fun, Zero):
                yield (RuleLabel.Al_zero if lin else RuleLabel.A_app_zero), ZERO
        if lin and is_base_value(fun):
            if isinstance(arg, Sum):
                yield RuleLabel.Ar_sum, Sum(App(fun, arg.left), App(fun, arg.right))
            elif isinstance(arg, Scale):
                yield RuleLabel.Ar_scale, Scale(arg.scalar, App(fun, arg.body))
            elif isinstance(arg, Zero):
                yield RuleLabel.Ar_zero, ZERO
        return

    if not vector_space:
        return
    if isinstance(term, Sum):
        left, right = term.left, term.right
        if isinstance(right, Sum):
            yield RuleLabel.Asso_L, Sum(Sum(left, right.left), right.right)
        if isinstance(left, Sum):
            yield RuleLabel.Asso_R, Sum(left.left, Sum(left.right, right))
        yield RuleLabel.Com, Sum(right, left)
        if isinstance(left, Scale):
            if isinstance(right, Scale) and alpha_eq(left.body, right.body):
                yield RuleLabel.F1, Scale(left.scalar + right.scalar, left.body)
            if alpha_eq(left.body, right):
                yield RuleLabel.F2, Scale(left.scalar + ONE, left.body)
        if alpha_eq(left, right):
            yield RuleLabel.F3, Scale(ONE + ONE, left)
        if isinstance(left, Zero):
            yield RuleLabel.S5, right
    elif isinstance(term, Scale):
        body = term.body
        if isinstance(body, Scale):
            yield RuleLabel.F4, Scale(term.scalar * body.scalar, body.body)
        if isinstance(body, Sum):
            yield RuleLabel.S1, Sum(Scale(term.scalar, body.left), Scale(term.scalar, body.right))
        if is_one(term.scalar):
            yield RuleLabel.S2, body
        if is_zero(term.scalar):
            yield RuleLabel.S3, ZERO
        if isinstance(body, Zero):
            yield RuleLabel.S4, ZERO


def _steps(
    term: Term,
    calculus: Calculus,
    vector_space: bool,
    in_arguments: Optional[bool] = None,
) -> Iterator[tuple[tuple[int, ...], RuleLabel, Term]]:
    """
    Steps below `term`. `in_arguments` overrides `vector_space` once the walk
    has entered the argument of an application.
    """
    inner = vector_space if in_arguments is None else in_arguments
    for rule, target in _root_rewrites(term, calculus, vector_space):
        yield (), rule, target
    if isinstance(term, App):
        for path, rule, target in _steps(term.fun, calculus, vector_space, inner):
            yield (0,) + path, rule, App(target, term.arg)
        if calculus is Calculus.LIN and is_value(term.fun):
            for path, rule, target in _steps(term.arg, calculus, inner, inner):
                yield (1,) + path, rule, App(term.fun, target)
    elif isinstance(term, Sum):
        for path, rule, target in _steps(term.left, calculus, vector_space, inner):
            yield (0,) + path, rule, Sum(target, term.right)
        for path, rule, target in _steps(term.right, calculus, vector_space, inner):
            yield (1,) + path, rule, Sum(term.left, target)
    elif isinstance(term, Scale):
        for path, rule, target in _steps(term.body, calculus, vector_space, inner):
            yield (0,) + path, rule, Scale(term.scalar, target)


def successors(term: Term, calculus: Calculus, vector_space: bool = True) -> list[Step]:
    """
    All one-step successors of a term, outermost redexes first, then left
    to right.

    Args:
        term: Term to reduce
        calculus: Which relation to use
        vector_space: Include the vector-space rules (L)

    Returns:
        Steps in enumeration order
    """
    return [
        Step(term, target, rule, path, calculus)
        for path, rule, target in _steps(term, calculus, vector_space)
    ]


def search_steps(term: Term, calculus: Calculus) -> list[Step]:
    """
    Successors that can change a state's linear key.

    Outside application arguments the vector-space rules never change
    `linear_key`, so only the argument positions of λ_lin keep them.
    """
    return [
        Step(term, target, rule, path, calculus)
        for path, rule, target in _steps(term, calculus, False, True)
    ]


def step_lin(term: Term) -> list[Step]:
    return successors(term, Calculus.LIN)


def step_alg(term: Term) -> list[Step]:
    return successors(term, Calculus.ALG)


def replay(step: Step) -> Term:
    """
    Rebuild a step's target from its source, rule and position.

    Raises:
        RewriteError: If the position is not a reduction context of the
            calculus or the rule does not apply there
    """
    node = step.source
    for index in step.position:
        label = context_label(node, index)
        if label is RuleLabel.XiLin_appR and (step.calculus is Calculus.ALG or not is_value(node.fun)):
            raise RewriteError(f"{label.value} does not apply in {step.calculus.symbol} at {node}")
        node = subterm_at(node, (index,))
    for rule, target in _root_rewrites(node, step.calculus, True):
        if rule is step.rule:
            return replace_at(step.source, step.position, target)
    raise RewriteError(
        f"{step.rule.value} does not apply at {format_position(step.position)} in {step.source}"
    )


class SearchStatus(str, Enum):
    FOUND = "found"
    UNREACHABLE = "unreachable"
    EXHAUSTED = "exhausted"


@dataclass
class SearchResult:
    status: SearchStatus
    trace: Optional[Trace]
    explored: int

    @property
    def found(self) -> bool:
        return self.status is SearchStatus.FOUND


class StateSpace:
    """
    Breadth-first exploration of a reduction graph, with states identified
    modulo the vector-space rules.

    Each state is represented by the first raw term that reached it. A raw
    term can hide a redex behind its linear structure (the β-redex of
    `(1.M) N` only appears after S2), so a state is expanded from its raw
    term and then from its canonical form. Steps taken from the canonical
    form start modulo the vector-space rules and show as `~L` in the trace;
    every step still replays.
    """

    def __init__(self, start: Term, calculus: Calculus, max_states: int = DEFAULT_MAX_STATES):
        if max_states <= 0:
            raise ValueError("max_states must be positive")
        self.start = start
        self.calculus = calculus
        self.max_states = max_states
        self.start_key = linear_key(start)
        self.states: dict[str, Term] = {self.start_key: start}
        self.parents: dict[str, Optional[tuple[str, Step]]] = {self.start_key: None}
        self.queue = deque([self.start_key])
        self.explored = 0
        self.exhausted = False

    def run(self, goal: Optional[str] = None) -> Optional[str]:
        """Explore until the goal key is discovered or the graph (or budget) runs out."""
        if goal is not None and goal in self.states:
            return goal
        while self.queue:
            key = self.queue.popleft()
            self.explored += 1
            for step in self._expand(self.states[key]):
                target_key = linear_key(step.target)
                if target_key in self.states:
                    continue
                self.states[target_key] = step.target
                self.parents[target_key] = (key, step)
                if target_key == goal:
                    return goal
                self.queue.append(target_key)
                if len(self.states) >= self.max_states:
                    self.exhausted = True
                    get_logger().debug(
                        f"State budget of {self.max_states} exhausted after exploring {self.explored}"
                    )
                    return None
        return None

    def _expand(self, term: Term) -> Iterator[Step]:
        yield from search_steps(term, self.calculus)
        canonical = canonicalize_linear(term)
        if canonical != term:
            yield from search_steps(canonical, self.calculus)

    def trace_to(self, key: str) -> Trace:
        steps = []
        parent = self.parents[key]
        while parent is not None:
            key, step = parent
            steps.append(step)
            parent = self.parents[key]
        steps.reverse()
        return Trace(self.start, steps)


def reachable(
    term: Term,
    target: Term,
    calculus: Calculus,
    max_states: int = DEFAULT_MAX_STATES,
) -> SearchResult:
    """
    Decide whether `term` reduces to `target` modulo the vector-space rules.

    Exhausting the state budget is reported as EXHAUSTED, never as
    UNREACHABLE.
    """
    space = StateSpace(term, calculus, max_states)
    goal = linear_key(target)
    found = space.run(goal)
    if found is not None:
        return SearchResult(SearchStatus.FOUND, space.trace_to(found), space.explored)
    status = SearchStatus.EXHAUSTED if space.exhausted else SearchStatus.UNREACHABLE
    return SearchResult(status, None, space.explored)


class NormalizationStatus(str, Enum):
    VALUE = "value"
    STUCK = "stuck"
    TIMEOUT = "timeout"


@dataclass
class Normalization:
    term: Term
    status: NormalizationStatus
    trace: Trace

    @property
    def is_value(self) -> bool:
        return self.status is NormalizationStatus.VALUE


def normalize(term: Term, calculus: Calculus, max_steps: int = DEFAULT_MAX_STEPS) -> Normalization:
    """
    Deterministic big-step driver: canonicalize the linear structure, then
    fire the leftmost-outermost non-vector-space step, until a value.

    The trace chains modulo the vector-space rules.
    """
    if max_steps <= 0:
        raise ValueError("max_steps must be positive")
    trace = Trace(term)
    current = canonicalize_linear(term)
    for _ in range(max_steps):
        if is_value(current):
            return Normalization(current, NormalizationStatus.VALUE, trace)
        steps = successors(current, calculus, vector_space=False)
        if not steps:
            return Normalization(current, NormalizationStatus.STUCK, trace)
        trace.steps.append(steps[0])
        current = canonicalize_linear(steps[0].target)
    if is_value(current):
        return Normalization(current, NormalizationStatus.VALUE, trace)
    get_logger().debug(f"Normalization in {calculus.symbol} timed out after {max_steps} steps")
    return Normalization(current, NormalizationStatus.TIMEOUT, trace)
