"""
Error handling
"""
from pathlib import Path
from typing import Optional

import click

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_TIMEOUT = 4


class AlgCpsError(Exception):
    """Base exception for algcps errors."""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, hint: Optional[str] = None):
        self.message = message
        self.hint = hint
        super().__init__(self.message)

    def display(self):
        """Display formatted error message."""
        click.secho(f"\n[ERROR] {self.message}", fg="red", bold=True, err=True)
        if self.hint:
            click.secho(f"\n  Hint: {self.hint}", fg="yellow", err=True)
        click.echo(err=True)


class TermSyntaxError(AlgCpsError):
    """Raised when term text does not parse."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        caret = " " * position + "^"
        super().__init__(
            f"{message} at column {position + 1}:\n     {text}\n     {caret}",
            "Terms use \\x. M for abstraction, juxtaposition for application, "
            "a.M for scaling and M + N for sums.",
        )


class ScalarSyntaxError(AlgCpsError):
    """Raised when a scalar literal is malformed."""

    def __init__(self, text: str, ring: str):
        super().__init__(
            f"Invalid {ring} scalar: {text!r}",
            "Rationals are written n, -n or n/m; Gaussian rationals a+bi.",
        )


class ReservedNameError(AlgCpsError):
    """Raised when a source term uses a name reserved by the translations."""

    exit_code = EXIT_PRECONDITION

    def __init__(self, name: str):
        super().__init__(
            f"Source term uses reserved variable: {name}",
            "The names k, b, b1 and b2 belong to the translations; rename the variable.",
        )


class ClassificationError(AlgCpsError):
    """Raised when a term lies outside the expected CPS grammar class."""

    exit_code = EXIT_PRECONDITION

    def __init__(self, expected: str, subterm: str, direction: str):
        self.expected = expected
        self.subterm = subterm
        super().__init__(
            f"Not a {expected} of the {direction} image: {subterm}",
            f"Run `algcps classify --dir {direction}` on the term to see its class.",
        )


class ShapeError(AlgCpsError):
    """Raised when an operation receives a term of the wrong shape."""

    exit_code = EXIT_PRECONDITION

    def __init__(self, operation: str, expected: str, got: str):
        super().__init__(f"{operation} expects {expected}, got: {got}")


class ReductionTimeout(AlgCpsError):
    """Raised when a reduction budget is exhausted."""

    exit_code = EXIT_TIMEOUT

    def __init__(self, steps: int):
        self.steps = steps
        super().__init__(
            f"TIMEOUT after {steps} steps",
            "The calculi are not normalizing; raise the budget with --steps.",
        )


class SearchExhausted(AlgCpsError):
    """Raised when a reachability search runs out of states."""

    exit_code = EXIT_TIMEOUT

    def __init__(self, states: int):
        self.states = states
        super().__init__(
            f"Search budget of {states} states exhausted",
            "Raise the budget with --budget.",
        )


class RewriteError(AlgCpsError):
    """Raised when a rewrite step cannot be replayed."""

    exit_code = EXIT_PRECONDITION


class UnknownLemmaError(AlgCpsError):
    """Raised when a check name is not registered."""

    def __init__(self, name: str, known: list[str]):
        super().__init__(
            f"Unknown lemma: {name}",
            "Known lemmas:\n     " + "\n     ".join(known),
        )


class InvalidSuiteError(AlgCpsError):
    """Raised when suite YAML is invalid."""

    def __init__(self, message: str):
        super().__init__(
            f"Invalid suite: {message}",
            "Check the suite YAML syntax and required fields.",
        )


class SuiteNotFoundError(AlgCpsError):
    """Raised when a suite file doesn't exist."""

    def __init__(self, suite: Path):
        super().__init__(
            f"Suite not found: {suite}",
            "Bundled suites live in the suites/ directory of the repository.",
        )


def validate_source_term(term) -> None:
    """
    Validate that a term only uses source-namespace variables.

    Args:
        term: Term to inspect (free and bound occurrences)

    Raises:
        ReservedNameError: If a continuation or intermediate name occurs
    """
    from .terms import Namespace, variables

    for name in variables(term):
        if name.namespace is not Namespace.SOURCE:
            raise ReservedNameError(str(name))
