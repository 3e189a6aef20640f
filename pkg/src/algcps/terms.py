"""
Term AST shared by both calculi
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterator

from .scalars import ONE, Scalar, format_scalar, is_one, is_zero


class Namespace(str, Enum):
    """The three disjoint variable namespaces."""
    SOURCE = "source"
    CONTINUATION = "continuation"
    INTERMEDIATE = "intermediate"


CONTINUATION_NAMES = frozenset({"k"})
INTERMEDIATE_NAMES = frozenset({"b", "b1", "b2"})


def namespace_of(name: str) -> Namespace:
    """Namespace of an identifier; primes added by renaming are ignored."""
    base = name.rstrip("'")
    if base in CONTINUATION_NAMES:
        return Namespace.CONTINUATION
    if base in INTERMEDIATE_NAMES:
        return Namespace.INTERMEDIATE
    return Namespace.SOURCE


@dataclass(frozen=True, order=True)
class VarName:
    """A variable name tagged with its namespace"""
    namespace: Namespace
    name: str

    def __post_init__(self):
        if not self.name or namespace_of(self.name) is not self.namespace:
            raise ValueError(f"{self.name!r} is not a {self.namespace.value} name")

    def __str__(self):
        return self.name

    def primed(self) -> "VarName":
        return VarName(self.namespace, self.name + "'")


def var_name(name: str) -> VarName:
    return VarName(namespace_of(name), name)


K = var_name("k")
B = var_name("b")
B1 = var_name("b1")
B2 = var_name("b2")


class Term:
    """Base class of the immutable term AST."""

    fv: frozenset
    size: int
    _hash: int

    def _children(self) -> tuple:
        raise NotImplementedError

    def _seal(self, fv: frozenset, size: int, *key) -> None:
        object.__setattr__(self, "fv", fv)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "_hash", hash((type(self).__name__,) + key))

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return self._children() == other._children()

    def __hash__(self):
        return self._hash

    def __str__(self):
        from .syntax import format_term
        return format_term(self)

    def __repr__(self):
        return f"<{type(self).__name__} {self}>"


@dataclass(frozen=True, eq=False, repr=False)
class Var(Term):
    name: VarName
    fv: frozenset = field(init=False, compare=False)
    size: int = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        self._seal(frozenset((self.name,)), 1, self.name)

    def _children(self):
        return (self.name,)


@dataclass(frozen=True, eq=False, repr=False)
class Lam(Term):
    var: VarName
    body: Term
    fv: frozenset = field(init=False, compare=False)
    size: int = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        self._seal(self.body.fv - {self.var}, self.body.size + 1, self.var, self.body)

    def _children(self):
        return (self.var, self.body)


@dataclass(frozen=True, eq=False, repr=False)
class App(Term):
    fun: Term
    arg: Term
    fv: frozenset = field(init=False, compare=False)
    size: int = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        self._seal(self.fun.fv | self.arg.fv, self.fun.size + self.arg.size + 1, self.fun, self.arg)

    def _children(self):
        return (self.fun, self.arg)


@dataclass(frozen=True, eq=False, repr=False)
class Zero(Term):
    fv: frozenset = field(init=False, compare=False)
    size: int = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        self._seal(frozenset(), 1)

    def _children(self):
        return ()


@dataclass(frozen=True, eq=False, repr=False)
class Scale(Term):
    scalar: Scalar
    body: Term
    fv: frozenset = field(init=False, compare=False)
    size: int = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        self._seal(self.body.fv, self.body.size + 1, self.scalar, self.body)

    def _children(self):
        return (self.scalar, self.body)


@dataclass(frozen=True, eq=False, repr=False)
class Sum(Term):
    left: Term
    right: Term
    fv: frozenset = field(init=False, compare=False)
    size: int = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        self._seal(self.left.fv | self.right.fv, self.left.size + self.right.size + 1,
                   self.left, self.right)

    def _children(self):
        return (self.left, self.right)


ZERO = Zero()


# Constructors used by the translations and the tests.

def var(name: str | VarName) -> Var:
    return Var(name if isinstance(name, VarName) else var_name(name))


def lam(name: str | VarName, body: Term) -> Lam:
    return Lam(name if isinstance(name, VarName) else var_name(name), body)


def app(fun: Term, *args: Term) -> Term:
    """Left-associated application f a1 ... an."""
    term = fun
    for arg in args:
        term = App(term, arg)
    return term


def plus(*terms: Term) -> Term:
    """Right-associated sum; the empty sum is 0."""
    if not terms:
        return ZERO
    term = terms[-1]
    for left in reversed(terms[:-1]):
        term = Sum(left, term)
    return term


def free_vars(term: Term) -> frozenset:
    return term.fv


def variables(term: Term) -> set[VarName]:
    """Every variable name occurring in the term, binders included."""
    names = set()
    stack = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            names.add(node.name)
        elif isinstance(node, Lam):
            names.add(node.var)
            stack.append(node.body)
        elif isinstance(node, App):
            stack.extend((node.fun, node.arg))
        elif isinstance(node, Scale):
            stack.append(node.body)
        elif isinstance(node, Sum):
            stack.extend((node.left, node.right))
    return names


def is_base_value(term: Term) -> bool:
    return isinstance(term, (Var, Lam))


def is_value(term: Term) -> bool:
    if isinstance(term, (Var, Lam, Zero)):
        return True
    if isinstance(term, Scale):
        return is_value(term.body)
    if isinstance(term, Sum):
        return is_value(term.left) and is_value(term.right)
    return False


def fresh_name(name: VarName, avoid) -> VarName:
    """Prime a name, within its namespace, until it avoids the given set."""
    candidate = name.primed()
    while candidate in avoid:
        candidate = candidate.primed()
    return candidate


def substitute(term: Term, x: VarName, replacement: Term) -> Term:
    """
    Capture-avoiding substitution term[x := replacement].

    Bound variables of the term are renamed within their own namespace when
    they would capture a free variable of the replacement.
    """
    if x not in term.fv:
        return term
    if isinstance(term, Var):
        return replacement
    if isinstance(term, Lam):
        binder, body = term.var, term.body
        if binder in replacement.fv:
            renamed = fresh_name(binder, replacement.fv | body.fv | {x})
            body = substitute(body, binder, Var(renamed))
            binder = renamed
        return Lam(binder, substitute(body, x, replacement))
    if isinstance(term, App):
        return App(substitute(term.fun, x, replacement), substitute(term.arg, x, replacement))
    if isinstance(term, Scale):
        return Scale(term.scalar, substitute(term.body, x, replacement))
    if isinstance(term, Sum):
        return Sum(substitute(term.left, x, replacement), substitute(term.right, x, replacement))
    return term


def _nameless(term: Term, env: tuple, out: list) -> None:
    if isinstance(term, Var):
        for depth, bound in enumerate(reversed(env)):
            if bound == term.name:
                out.append(f"#{depth}")
                return
        out.append(term.name.name)
    elif isinstance(term, Lam):
        out.append(f"(\\{term.var.namespace.value[0]} ")
        _nameless(term.body, env + (term.var,), out)
        out.append(")")
    elif isinstance(term, App):
        out.append("(")
        _nameless(term.fun, env, out)
        out.append(" ")
        _nameless(term.arg, env, out)
        out.append(")")
    elif isinstance(term, Scale):
        out.append(f"(<{format_scalar(term.scalar)}> ")
        _nameless(term.body, env, out)
        out.append(")")
    elif isinstance(term, Sum):
        out.append("(")
        _nameless(term.left, env, out)
        out.append(" + ")
        _nameless(term.right, env, out)
        out.append(")")
    else:
        out.append("0")


@lru_cache(maxsize=1 << 16)
def nameless_key(term: Term) -> str:
    """
    Canonical nameless rendering: bound variables become indices, free ones
    keep their names. Two terms are alpha-equivalent iff their keys match.
    """
    out: list[str] = []
    _nameless(term, (), out)
    return "".join(out)


def alpha_eq(left: Term, right: Term) -> bool:
    return left == right or nameless_key(left) == nameless_key(right)


def linear_atoms(term: Term) -> list[tuple[Scalar, Term]]:
    """Flatten the top-level sums and scalings into (coefficient, atom) pairs."""
    atoms = []
    stack = [(term, ONE)]
    while stack:
        node, coefficient = stack.pop()
        if isinstance(node, Sum):
            stack.append((node.right, coefficient))
            stack.append((node.left, coefficient))
        elif isinstance(node, Scale):
            stack.append((node.body, coefficient * node.scalar))
        elif not isinstance(node, Zero):
            atoms.append((coefficient, node))
    return atoms


def combination(pairs: list[tuple[Scalar, Term]]) -> Term:
    """Build a right-associated linear combination, eliding coefficient 1."""
    summands = [atom if is_one(c) else Scale(c, atom) for c, atom in pairs]
    return plus(*summands)


@lru_cache(maxsize=1 << 16)
def canonicalize_linear(term: Term) -> Term:
    """
    Normal form of the linear structure under associativity, commutativity,
    factorization and simplification.

    Descends into sums, scalings and the function side of applications (the
    context positions both calculi share), never under an abstraction.
    Alpha-equivalent atoms are merged and ordered by their nameless key.
    """
    merged: dict[str, list] = {}
    for coefficient, atom in linear_atoms(term):
        if isinstance(atom, App):
            fun = canonicalize_linear(atom.fun)
            if fun is not atom.fun and fun != atom.fun:
                atom = App(fun, atom.arg)
        key = nameless_key(atom)
        if key in merged:
            merged[key][0] = merged[key][0] + coefficient
        else:
            merged[key] = [coefficient, atom]
    pairs = [(c, atom) for key, (c, atom) in sorted(merged.items()) if not is_zero(c)]
    return combination(pairs)


@lru_cache(maxsize=1 << 16)
def linear_key(term: Term) -> str:
    """Equality modulo the vector-space rules, as a hashable key."""
    return nameless_key(canonicalize_linear(term))


def children(term: Term) -> tuple[Term, ...]:
    """Child terms in position order."""
    if isinstance(term, App):
        return (term.fun, term.arg)
    if isinstance(term, Sum):
        return (term.left, term.right)
    if isinstance(term, (Lam, Scale)):
        return (term.body,)
    return ()


def with_child(term: Term, index: int, child: Term) -> Term:
    if isinstance(term, App):
        return App(child, term.arg) if index == 0 else App(term.fun, child)
    if isinstance(term, Sum):
        return Sum(child, term.right) if index == 0 else Sum(term.left, child)
    if isinstance(term, Lam):
        return Lam(term.var, child)
    if isinstance(term, Scale):
        return Scale(term.scalar, child)
    raise IndexError(f"{type(term).__name__} has no child {index}")


def subterm_at(term: Term, path: tuple[int, ...]) -> Term:
    for index in path:
        term = children(term)[index]
    return term


def replace_at(term: Term, path: tuple[int, ...], replacement: Term) -> Term:
    if not path:
        return replacement
    head, rest = path[0], path[1:]
    return with_child(term, head, replace_at(children(term)[head], rest, replacement))


def subterms(term: Term) -> Iterator[Term]:
    """Pre-order walk over all subterms."""
    stack = [term]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))
