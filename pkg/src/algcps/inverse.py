"""
Grammar classifiers for the CPS images and the inverse translations.

Each direction has its own grammar of base computations (C), computations
(D), base suspensions (S), suspensions (T), continuations (K) and
CPS-values (B). Recognition is syntactic and matches the reserved binders
k, b1 and b2 literally. The binder of a continuation that feeds a value to
its next continuation may be any of b, b1 and b2: reducing the application
of a λb1 continuation leaves its inner λb2 in that position.

The translation of 0 is 0, so the positions that hold a translated source
term (the body of a CPS-value abstraction and the suspension argument of
the n2v application forms) accept 0 next to a base suspension.
"""
from enum import Enum
from functools import lru_cache

from .cps import Direction
from .errors import ClassificationError
from .terms import (
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
)


class GrammarClass(str, Enum):
    C = "BaseComputation"
    D = "Computation"
    S = "BaseSuspension"
    T = "Suspension"
    K = "Continuation"
    B = "CpsValue"
    NONE = "None"


def _is_source_var(term: Term) -> bool:
    return isinstance(term, Var) and term.name.namespace is Namespace.SOURCE


def _is_var(term: Term, name) -> bool:
    return isinstance(term, Var) and term.name == name


def _is_relay_binder(term: Term) -> bool:
    return isinstance(term, Lam) and term.var.namespace is Namespace.INTERMEDIATE


def _is_combination(term: Term, base) -> bool:
    """Membership in the closure of a base class under 0, scaling and sums."""
    if isinstance(term, Zero):
        return True
    if isinstance(term, Scale):
        return _is_combination(term.body, base)
    if isinstance(term, Sum):
        return _is_combination(term.left, base) and _is_combination(term.right, base)
    return base(term)


def _map_combination(term: Term, base) -> Term:
    if isinstance(term, Zero):
        return ZERO
    if isinstance(term, Scale):
        return Scale(term.scalar, _map_combination(term.body, base))
    if isinstance(term, Sum):
        return Sum(_map_combination(term.left, base), _map_combination(term.right, base))
    return base(term)


class CpsGrammar:
    """Recognizers and inverse functions for one direction."""

    direction: Direction

    def _reject(self, cls: GrammarClass, term: Term):
        raise ClassificationError(cls.value, str(term), self.direction.value)

    # recognizers

    def base_computation(self, term: Term) -> bool:
        raise NotImplementedError

    def base_suspension(self, term: Term) -> bool:
        raise NotImplementedError

    def continuation(self, term: Term) -> bool:
        raise NotImplementedError

    def cps_value(self, term: Term) -> bool:
        raise NotImplementedError

    def computation(self, term: Term) -> bool:
        return _is_combination(term, self.base_computation)

    def suspension(self, term: Term) -> bool:
        return _is_combination(term, self.base_suspension)

    def suspension_slot(self, term: Term) -> bool:
        return isinstance(term, Zero) or self.base_suspension(term)

    def classify(self, term: Term) -> GrammarClass:
        checks = (
            (GrammarClass.C, self.base_computation),
            (GrammarClass.S, self.base_suspension),
            (GrammarClass.K, self.continuation),
            (GrammarClass.B, self.cps_value),
            (GrammarClass.D, self.computation),
            (GrammarClass.T, self.suspension),
        )
        for cls, check in checks:
            if check(term):
                return cls
        return GrammarClass.NONE

    # inverse functions

    def overline(self, term: Term) -> Term:
        return _map_combination(term, self.overline_base)

    def overline_base(self, term: Term) -> Term:
        raise NotImplementedError

    def sigma(self, term: Term) -> Term:
        return _map_combination(term, self.sigma_base)

    def sigma_slot(self, term: Term) -> Term:
        return ZERO if isinstance(term, Zero) else self.sigma_base(term)

    def sigma_base(self, term: Term) -> Term:
        if isinstance(term, Lam) and term.var == K:
            return self.overline_base(term.body)
        self._reject(GrammarClass.S, term)

    def value(self, term: Term) -> Term:
        raise NotImplementedError

    def fill(self, cont: Term, hole: Term) -> Term:
        raise NotImplementedError


class V2NGrammar(CpsGrammar):
    """
    C ::= KB | B1 B2 K | TK        S ::= λk.C
    K ::= k | λb.BbK | λb1.T(λb2.b1 b2 K)
    B ::= x | λx.S
    """

    direction = Direction.V2N

    @lru_cache(maxsize=1 << 16)
    def base_computation(self, term: Term) -> bool:
        if not isinstance(term, App):
            return False
        fun, arg = term.fun, term.arg
        if isinstance(fun, App):
            return self.cps_value(fun.fun) and self.cps_value(fun.arg) and self.continuation(arg)
        if self.continuation(fun):
            return self.cps_value(arg)
        return self.suspension(fun) and self.continuation(arg)

    @lru_cache(maxsize=1 << 16)
    def base_suspension(self, term: Term) -> bool:
        return isinstance(term, Lam) and term.var == K and self.base_computation(term.body)

    @lru_cache(maxsize=1 << 16)
    def continuation(self, term: Term) -> bool:
        if isinstance(term, Var):
            return term.name == K
        if not isinstance(term, Lam) or not isinstance(term.body, App):
            return False
        body = term.body
        if term.var.namespace is Namespace.INTERMEDIATE and isinstance(body.fun, App):
            # λb.B b K
            return (
                _is_var(body.fun.arg, term.var)
                and self.cps_value(body.fun.fun)
                and self.continuation(body.arg)
            )
        if term.var == B1:
            # λb1.T(λb2.b1 b2 K)
            inner = body.arg
            return (
                isinstance(inner, Lam)
                and inner.var == B2
                and isinstance(inner.body, App)
                and isinstance(inner.body.fun, App)
                and _is_var(inner.body.fun.fun, B1)
                and _is_var(inner.body.fun.arg, B2)
                and self.continuation(inner.body.arg)
                and self.suspension(body.fun)
            )
        return False

    @lru_cache(maxsize=1 << 16)
    def cps_value(self, term: Term) -> bool:
        if _is_source_var(term):
            return True
        return (
            isinstance(term, Lam)
            and term.var.namespace is Namespace.SOURCE
            and self.suspension_slot(term.body)
        )

    def overline_base(self, term: Term) -> Term:
        if not isinstance(term, App):
            self._reject(GrammarClass.C, term)
        fun, arg = term.fun, term.arg
        if isinstance(fun, App):
            return self.fill(arg, App(self.value(fun.fun), self.value(fun.arg)))
        if isinstance(fun, Var) or _is_relay_binder(fun):
            return self.fill(fun, self.value(arg))
        return self.fill(arg, self.sigma(fun))

    def value(self, term: Term) -> Term:
        """ψ(x) = x, ψ(λx.S) = λx.σ(S)"""
        if _is_source_var(term):
            return term
        if isinstance(term, Lam) and term.var.namespace is Namespace.SOURCE:
            return Lam(term.var, self.sigma_slot(term.body))
        self._reject(GrammarClass.B, term)

    def fill(self, cont: Term, hole: Term) -> Term:
        if _is_var(cont, K):
            return hole
        if isinstance(cont, Lam) and isinstance(cont.body, App):
            body = cont.body
            if (
                cont.var.namespace is Namespace.INTERMEDIATE
                and isinstance(body.fun, App)
                and _is_var(body.fun.arg, cont.var)
            ):
                return self.fill(body.arg, App(self.value(body.fun.fun), hole))
            if cont.var == B1 and self.continuation(cont):
                return self.fill(body.arg.body.arg, App(hole, self.sigma(body.fun)))
        self._reject(GrammarClass.K, cont)


class N2VGrammar(CpsGrammar):
    """
    C ::= KB | BSK | TK            S ::= x | λk.C
    K ::= k | λb.bSK               B ::= λx.S
    """

    direction = Direction.N2V

    @lru_cache(maxsize=1 << 16)
    def base_computation(self, term: Term) -> bool:
        if not isinstance(term, App):
            return False
        fun, arg = term.fun, term.arg
        if isinstance(fun, App):
            return self.cps_value(fun.fun) and self.suspension_slot(fun.arg) and self.continuation(arg)
        if self.continuation(fun):
            return self.cps_value(arg)
        return self.suspension(fun) and self.continuation(arg)

    @lru_cache(maxsize=1 << 16)
    def base_suspension(self, term: Term) -> bool:
        if _is_source_var(term):
            return True
        return isinstance(term, Lam) and term.var == K and self.base_computation(term.body)

    @lru_cache(maxsize=1 << 16)
    def continuation(self, term: Term) -> bool:
        if isinstance(term, Var):
            return term.name == K
        # λb.b S K
        return (
            _is_relay_binder(term)
            and isinstance(term.body, App)
            and isinstance(term.body.fun, App)
            and _is_var(term.body.fun.fun, term.var)
            and self.suspension_slot(term.body.fun.arg)
            and self.continuation(term.body.arg)
        )

    @lru_cache(maxsize=1 << 16)
    def cps_value(self, term: Term) -> bool:
        return (
            isinstance(term, Lam)
            and term.var.namespace is Namespace.SOURCE
            and self.suspension_slot(term.body)
        )

    def sigma_base(self, term: Term) -> Term:
        if _is_source_var(term):
            return term
        return super().sigma_base(term)

    def overline_base(self, term: Term) -> Term:
        if not isinstance(term, App):
            self._reject(GrammarClass.C, term)
        fun, arg = term.fun, term.arg
        if isinstance(fun, App):
            return self.fill(arg, App(self.value(fun.fun), self.sigma_slot(fun.arg)))
        if _is_var(fun, K) or _is_relay_binder(fun):
            return self.fill(fun, self.value(arg))
        return self.fill(arg, self.sigma(fun))

    def value(self, term: Term) -> Term:
        """φ(λx.S) = λx.σ(S)"""
        if isinstance(term, Lam) and term.var.namespace is Namespace.SOURCE:
            return Lam(term.var, self.sigma_slot(term.body))
        self._reject(GrammarClass.B, term)

    def fill(self, cont: Term, hole: Term) -> Term:
        if _is_var(cont, K):
            return hole
        if (
            _is_relay_binder(cont)
            and isinstance(cont.body, App)
            and isinstance(cont.body.fun, App)
            and _is_var(cont.body.fun.fun, cont.var)
        ):
            return self.fill(cont.body.arg, App(hole, self.sigma_slot(cont.body.fun.arg)))
        self._reject(GrammarClass.K, cont)


GRAMMARS: dict[Direction, CpsGrammar] = {
    Direction.V2N: V2NGrammar(),
    Direction.N2V: N2VGrammar(),
}


def grammar(direction: Direction) -> CpsGrammar:
    return GRAMMARS[Direction(direction)]


def classify(term: Term, direction: Direction) -> GrammarClass:
    """
    The grammar class of a term in the CPS image of a direction.

    Base classes win over their combinations, so 0 is a Computation.
    """
    return grammar(direction).classify(term)


def is_base_computation(term: Term, direction: Direction) -> bool:
    return grammar(direction).base_computation(term)


def is_computation(term: Term, direction: Direction) -> bool:
    return grammar(direction).computation(term)


def is_base_suspension(term: Term, direction: Direction) -> bool:
    return grammar(direction).base_suspension(term)


def is_suspension(term: Term, direction: Direction) -> bool:
    return grammar(direction).suspension(term)


def is_continuation(term: Term, direction: Direction) -> bool:
    return grammar(direction).continuation(term)


def is_cps_value(term: Term, direction: Direction) -> bool:
    return grammar(direction).cps_value(term)


def inv_computation(term: Term, direction: Direction) -> Term:
    """
    Decompile a computation (the overline function).

    Raises:
        ClassificationError: Naming the subterm that fits no production
    """
    return grammar(direction).overline(term)


def inv_suspension(term: Term, direction: Direction) -> Term:
    """Decompile a suspension (σ)."""
    return grammar(direction).sigma(term)


def inv_value(term: Term, direction: Direction) -> Term:
    """Decompile a CPS-value (ψ for v2n, φ for n2v)."""
    return grammar(direction).value(term)


def apply_continuation(cont: Term, term: Term, direction: Direction) -> Term:
    """
    Fill the hole of a decompiled continuation with a source term.

    This is meta-level hole filling, not β-reduction.
    """
    return grammar(direction).fill(cont, term)


def invert(term: Term, direction: Direction) -> tuple[GrammarClass, Term]:
    """
    Classify a term and apply the matching inverse function.

    Raises:
        ClassificationError: If the term is a continuation or unclassified
    """
    cls = classify(term, direction)
    if cls in (GrammarClass.C, GrammarClass.D):
        return cls, inv_computation(term, direction)
    if cls in (GrammarClass.S, GrammarClass.T):
        return cls, inv_suspension(term, direction)
    if cls is GrammarClass.B:
        return cls, inv_value(term, direction)
    raise ClassificationError(
        f"{GrammarClass.D.value} or {GrammarClass.T.value}", str(term), Direction(direction).value
    )
