r"""
Term text syntax: tokenizer, recursive-descent parser and printer.

    term   := sum
    sum    := scaled ('+' sum)?
    scaled := scalar '.' scaled | app
    app    := atom atom*
    atom   := ident | '0' | '\' ident+ '.' term | '(' term ')'

Sums associate to the right, application to the left. Scaling binds looser
than application, so ``2.f x`` is ``2.(f x)``. A lambda body extends as far
right as possible. Complex scalars are bracketed: ``[1/2+1/2i].x``.
"""
import re
from dataclasses import dataclass

from .errors import ScalarSyntaxError, TermSyntaxError
from .scalars import RATIONALS, Ring, Scalar, format_scalar, is_complex
from .terms import ZERO, App, Lam, Scale, Sum, Term, Var, Zero, var_name

WHITESPACE = "ws"
LAMBDA = "lambda"
DOT = "dot"
LEFT = "left"
RIGHT = "right"
PLUS = "plus"
NUMBER = "number"
COMPLEX = "complex"
IDENT = "ident"
END = "end"

TOKEN_PATTERN = re.compile(
    r"""
    (?P<ws>\s+)
    |(?P<lambda>\\|λ)
    |(?P<dot>\.)
    |(?P<left>\()
    |(?P<right>\))
    |(?P<plus>\+)
    |(?P<number>-?\d+(?:/\d+)?)
    |(?P<complex>\[[^\]]*\])
    |(?P<ident>[^\W\d]\w*'*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    position = 0
    while position < len(text):
        match = TOKEN_PATTERN.match(text, position)
        if match is None:
            raise TermSyntaxError(f"Unexpected character {text[position]!r}", text, position)
        if match.lastgroup != WHITESPACE:
            tokens.append(Token(match.lastgroup, match.group(), position))
        position = match.end()
    tokens.append(Token(END, "", len(text)))
    return tokens


class Parser:
    """Recursive-descent parser over a token list with two-token lookahead."""

    def __init__(self, text: str, ring: Ring = RATIONALS):
        self.text = text
        self.ring = ring
        self.tokens = tokenize(text)
        self.index = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        token = self.peek()
        self.index += 1
        return token

    def expect(self, kind: str, what: str) -> Token:
        token = self.peek()
        if token.kind != kind:
            self.fail(f"Expected {what}", token)
        return self.next()

    def fail(self, message: str, token: Token):
        found = "end of input" if token.kind == END else repr(token.text)
        raise TermSyntaxError(f"{message}, found {found}", self.text, token.position)

    def scalar(self, token: Token) -> Scalar:
        literal = token.text
        if token.kind == COMPLEX and self.ring is RATIONALS:
            raise TermSyntaxError(
                "Complex scalar needs the gaussian ring", self.text, token.position
            )
        try:
            return self.ring.parse(literal)
        except ScalarSyntaxError:
            raise TermSyntaxError(f"Invalid scalar {literal!r}", self.text, token.position) from None

    def starts_scalar(self) -> bool:
        return self.peek().kind in (NUMBER, COMPLEX) and self.peek(1).kind == DOT

    def starts_atom(self) -> bool:
        token = self.peek()
        if token.kind in (IDENT, LAMBDA, LEFT):
            return True
        return token.kind == NUMBER and self.peek(1).kind != DOT

    def parse_goal(self) -> Term:
        term = self.parse_sum()
        token = self.peek()
        if token.kind != END:
            self.fail("Unexpected token", token)
        return term

    def parse_sum(self) -> Term:
        left = self.parse_scaled()
        if self.peek().kind == PLUS:
            self.next()
            return Sum(left, self.parse_sum())
        return left

    def parse_scaled(self) -> Term:
        if self.starts_scalar():
            scalar = self.scalar(self.next())
            self.next()
            return Scale(scalar, self.parse_scaled())
        return self.parse_app()

    def parse_app(self) -> Term:
        head = self.parse_atom()
        while self.starts_atom():
            head = App(head, self.parse_atom())
        return head

    def parse_atom(self) -> Term:
        token = self.peek()
        if token.kind == IDENT:
            self.next()
            return Var(var_name(token.text))
        if token.kind == NUMBER:
            if self.scalar(token) != 0:
                self.fail("Scalar must be followed by '.'", token)
            self.next()
            return ZERO
        if token.kind == LAMBDA:
            self.next()
            binders = [self.expect(IDENT, "a variable after lambda")]
            while self.peek().kind == IDENT:
                binders.append(self.next())
            self.expect(DOT, "'.' after lambda binder")
            body = self.parse_sum()
            for binder in reversed(binders):
                body = Lam(var_name(binder.text), body)
            return body
        if token.kind == LEFT:
            self.next()
            term = self.parse_sum()
            self.expect(RIGHT, "')'")
            return term
        self.fail("Expected a term", token)


def parse_term(text: str, ring: Ring = RATIONALS) -> Term:
    """
    Parse term text.

    Args:
        text: Term in the text syntax
        ring: Scalar carrier for the coefficients

    Returns:
        Parsed Term

    Raises:
        TermSyntaxError: With the column of the offending token
    """
    return Parser(text, ring).parse_goal()


# Printer precedence levels
SUM = 0
SCALE = 1
APP = 2
ATOM = 3


def format_scalar_literal(scalar: Scalar) -> str:
    text = format_scalar(scalar)
    return f"[{text}]" if is_complex(scalar) else text


def _paren_if(needed: bool, text: str) -> str:
    return f"({text})" if needed else text


def _format(term: Term, precedence: int, tail: bool) -> str:
    # tail: nothing follows the term in its enclosing context, so a lambda
    # may extend to the right without parentheses.
    if isinstance(term, Var):
        return term.name.name
    if isinstance(term, Zero):
        return "0"
    if isinstance(term, Lam):
        return _paren_if(not tail, f"\\{term.var}. {_format(term.body, SUM, True)}")

    needed = precedence > {App: APP, Scale: SCALE, Sum: SUM}[type(term)]
    tail = tail or needed
    if isinstance(term, App):
        text = f"{_format(term.fun, APP, False)} {_format(term.arg, ATOM, tail)}"
    elif isinstance(term, Scale):
        text = f"{format_scalar_literal(term.scalar)}.{_format(term.body, SCALE, tail)}"
    else:
        text = f"{_format(term.left, SCALE, False)} + {_format(term.right, SUM, tail)}"
    return _paren_if(needed, text)


def format_term(term: Term) -> str:
    """Print a term with minimal parentheses."""
    return _format(term, SUM, True)
