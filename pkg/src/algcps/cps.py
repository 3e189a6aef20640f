"""
CPS translations between the calculi, with their colon translations.

v2n simulates λ_lin in λ_alg; n2v simulates λ_alg in λ_lin. Both emit the
reserved names k, b, b1 and b2 literally, shadowing as they nest.
"""
from enum import Enum

from .errors import ClassificationError, ShapeError, validate_source_term
from .rewrite import Calculus
from .terms import B, B1, B2, K, ZERO, App, Lam, Scale, Sum, Term, Var, Zero, app

KVAR = Var(K)
BVAR = Var(B)
B1VAR = Var(B1)
B2VAR = Var(B2)


class Direction(str, Enum):
    V2N = "v2n"
    N2V = "n2v"

    @property
    def source(self) -> Calculus:
        return Calculus.LIN if self is Direction.V2N else Calculus.ALG

    @property
    def target(self) -> Calculus:
        return Calculus.ALG if self is Direction.V2N else Calculus.LIN


def _cps(term: Term, direction: Direction) -> Term:
    if isinstance(term, Zero):
        return ZERO
    if isinstance(term, Scale):
        return Lam(K, App(Scale(term.scalar, _cps(term.body, direction)), KVAR))
    if isinstance(term, Sum):
        return Lam(K, App(Sum(_cps(term.left, direction), _cps(term.right, direction)), KVAR))
    if isinstance(term, Lam):
        return Lam(K, App(KVAR, Lam(term.var, _cps(term.body, direction))))

    if direction is Direction.V2N:
        if isinstance(term, Var):
            return Lam(K, App(KVAR, term))
        # ⟦MN⟧ = λk.⟦M⟧(λb1.⟦N⟧(λb2.b1 b2 k))
        inner = Lam(B2, app(B1VAR, B2VAR, KVAR))
        return Lam(K, App(_cps(term.fun, direction), Lam(B1, App(_cps(term.arg, direction), inner))))

    if isinstance(term, Var):
        return term
    # {|MN|} = λk.{|M|}(λb.b{|N|}k)
    return Lam(K, App(_cps(term.fun, direction), Lam(B, app(BVAR, _cps(term.arg, direction), KVAR))))


def cps(term: Term, direction: Direction) -> Term:
    """
    Translate a source term.

    Raises:
        ReservedNameError: If the term uses k, b, b1 or b2
    """
    validate_source_term(term)
    return _cps(term, direction)


def apply_k(term: Term) -> Term:
    return App(term, KVAR)


def psi(term: Term) -> Term:
    """Ψ(x) = x, Ψ(λx.M) = λx.⟦M⟧"""
    if isinstance(term, Var):
        return term
    if isinstance(term, Lam):
        return Lam(term.var, _cps(term.body, Direction.V2N))
    raise ShapeError("psi", "a base value", str(term))


def phi(term: Term) -> Term:
    """Φ(λx.M) = λx.{|M|}"""
    if isinstance(term, Lam):
        return Lam(term.var, _cps(term.body, Direction.N2V))
    raise ShapeError("phi", "an abstraction", str(term))


def value_image(term: Term, direction: Direction) -> Term:
    """The CPS-value a base value is passed to its continuation as."""
    if direction is Direction.V2N:
        return psi(term)
    return phi(term)


def _colon_v2n(term: Term, cont: Term) -> Term:
    if isinstance(term, (Var, Lam)):
        return App(cont, psi(term))
    if isinstance(term, Zero):
        return ZERO
    if isinstance(term, Scale):
        return Scale(term.scalar, _colon_v2n(term.body, cont))
    if isinstance(term, Sum):
        return Sum(_colon_v2n(term.left, cont), _colon_v2n(term.right, cont))

    fun, arg = term.fun, term.arg
    if isinstance(fun, (Var, Lam)):
        return _colon_v2n(arg, Lam(B, app(psi(fun), BVAR, cont)))
    if isinstance(fun, App):
        inner = Lam(B2, app(B1VAR, B2VAR, cont))
        return _colon_v2n(fun, Lam(B1, App(_cps(arg, Direction.V2N), inner)))
    return _colon_shared(fun, arg, cont, _colon_v2n)


def _colon_n2v(term: Term, cont: Term) -> Term:
    if isinstance(term, Lam):
        return App(cont, phi(term))
    if isinstance(term, Var):
        return App(term, cont)
    if isinstance(term, Zero):
        return ZERO
    if isinstance(term, Scale):
        return Scale(term.scalar, _colon_n2v(term.body, cont))
    if isinstance(term, Sum):
        return Sum(_colon_n2v(term.left, cont), _colon_n2v(term.right, cont))

    fun, arg = term.fun, term.arg
    if isinstance(fun, Lam):
        return app(phi(fun), _cps(arg, Direction.N2V), cont)
    if isinstance(fun, (Var, App)):
        return _colon_n2v(fun, Lam(B, app(BVAR, _cps(arg, Direction.N2V), cont)))
    return _colon_shared(fun, arg, cont, _colon_n2v)


def _colon_shared(fun: Term, arg: Term, cont: Term, colon_fn) -> Term:
    # (0)N:K = 0:K, (α.M)N:K = α.(MN):K, (M+N)L:K = ML+NL:K
    if isinstance(fun, Zero):
        return ZERO
    if isinstance(fun, Scale):
        return Scale(fun.scalar, colon_fn(App(fun.body, arg), cont))
    return colon_fn(Sum(App(fun.left, arg), App(fun.right, arg)), cont)


def colon(term: Term, cont: Term, direction: Direction) -> Term:
    """
    The colon translation M:K, which pre-collapses the initial
    administrative redexes of the translation applied to K.

    Args:
        term: Source term
        cont: A continuation of the target grammar
        direction: Translation direction

    Returns:
        A computation of the target grammar

    Raises:
        ReservedNameError: If the source term uses a reserved name
        ClassificationError: If `cont` is not a continuation
    """
    from .inverse import GrammarClass, is_continuation

    validate_source_term(term)
    if not is_continuation(cont, direction):
        raise ClassificationError(GrammarClass.K.value, str(cont), direction.value)
    if direction is Direction.V2N:
        return _colon_v2n(term, cont)
    return _colon_n2v(term, cont)
