"""Command-line interface for algcps"""
import json
import sys
from pathlib import Path

import click
from click.core import ParameterSource
from colorama import Fore, Style, init

from . import __version__
from .cps import KVAR, Direction, apply_k, colon, cps
from .errors import EXIT_CHECK_FAILED, EXIT_USAGE, AlgCpsError, ReductionTimeout, SearchExhausted
from .logger import get_logger, setup_logging
from .rewrite import (
    DEFAULT_MAX_STATES,
    DEFAULT_MAX_STEPS,
    Calculus,
    NormalizationStatus,
    SearchStatus,
    normalize,
    reachable,
)
from .scalars import RINGS, get_ring
from .syntax import format_term, parse_term
from .terms import Term
from .utils import read_term_text

# Initialize colorama
init(autoreset=True)

CALCULI = click.Choice([c.value for c in Calculus])
DIRECTIONS = click.Choice([d.value for d in Direction])
FORMATS = click.Choice(["text", "structured"])


def _abort(error: AlgCpsError):
    get_logger().debug(f"{type(error).__name__}: {error.message}")
    error.display()
    sys.exit(error.exit_code)


def load_term(ctx: click.Context, argument: str) -> Term:
    """Parse a TERM argument, reading it from a file when written as @path."""
    try:
        text = read_term_text(argument)
    except FileNotFoundError as e:
        click.secho(f"[ERROR] {e}", fg="red", err=True)
        sys.exit(EXIT_USAGE)
    return parse_term(text, ctx.obj["ring"])


def _emit(fmt: str, text: str, data: dict):
    click.echo(json.dumps(data, indent=2, ensure_ascii=False) if fmt == "structured" else text)


@click.group()
@click.version_option(version=__version__, prog_name="algcps")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose logging (DEBUG level)")
@click.option("--quiet", "-q", is_flag=True, help="Quiet mode - only show errors")
@click.option(
    "--ring",
    type=click.Choice(sorted(RINGS)),
    default="rational",
    show_default=True,
    help="Scalar carrier for coefficients",
)
@click.pass_context
def main(ctx: click.Context, verbose: bool, quiet: bool, ring: str):
    """
    CPS translations between the linear and the algebraic lambda calculi.

    Terms are written with \\x. M for abstraction, juxtaposition for
    application, a.M for scaling, M + N for sums and 0 for the zero
    vector. Give a term inline or as @file.

    \b
    Quick Start:
      algcps reduce --calculus lin "(\\x f. f x x) (y + z)"
      algcps translate --dir v2n "x"
      algcps invert --dir v2n "k x"
      algcps check --lemma inverse-term --instances 50

    \b
    Exit codes:
      0  success (including a stuck normal form)
      1  a check failed or a target is unreachable
      2  usage or syntax error
      3  classification or precondition error
      4  reduction or search budget exhausted
    """
    setup_logging(verbose=verbose, quiet=quiet)
    ctx.obj = {
        "ring": get_ring(ring),
        "ring_explicit": ctx.get_parameter_source("ring") is not ParameterSource.DEFAULT,
        "verbose": verbose,
        "quiet": quiet,
    }


@main.command()
@click.argument("term")
@click.pass_context
def parse(ctx: click.Context, term: str):
    """
    Parse TERM and print it with minimal parentheses.

    \b
    Examples:
      algcps parse "(\\x. (x)) (y)"
        → (\\x. x) y
      algcps parse "2.(x + 0)"
    """
    try:
        click.echo(format_term(load_term(ctx, term)))
    except AlgCpsError as e:
        _abort(e)


def _report_normal_form(result, steps: int):
    if result.status is NormalizationStatus.STUCK:
        click.secho("[STUCK] Normal form is not a value", fg="yellow", err=True)
    elif result.status is NormalizationStatus.TIMEOUT:
        _abort(ReductionTimeout(steps))


@main.command()
@click.option("--calculus", "-c", type=CALCULI, required=True, help="Reduction relation")
@click.option(
    "--steps",
    type=click.IntRange(min=1),
    default=DEFAULT_MAX_STEPS,
    show_default=True,
    help="Step budget",
)
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
@click.argument("term")
@click.pass_context
def reduce(ctx: click.Context, calculus: str, steps: int, fmt: str, term: str):
    """
    Reduce TERM to a value with the deterministic strategy.

    Vector-space structure is canonicalized between steps, so the value is
    printed in canonical form (atoms merged and sorted).

    \b
    Examples:
      algcps reduce --calculus lin "(\\x f. f x x) (y + z)"
        → (\\f. f y y) + \\f. f z z
      algcps reduce --calculus alg "(\\x f. f x x) (y + z)"
        → \\f. f (y + z) (y + z)
    """
    try:
        result = normalize(load_term(ctx, term), Calculus(calculus), steps)
    except AlgCpsError as e:
        _abort(e)
    if result.status is not NormalizationStatus.TIMEOUT:
        _emit(fmt, str(result.term), {
            "status": result.status.value,
            "term": str(result.term),
            "steps": len(result.trace),
        })
    _report_normal_form(result, steps)


@main.command()
@click.option("--calculus", "-c", type=CALCULI, required=True, help="Reduction relation")
@click.option(
    "--steps",
    type=click.IntRange(min=1),
    default=DEFAULT_MAX_STEPS,
    show_default=True,
    help="Step budget of the strategy",
)
@click.option("--to", "goal", default=None, help="Search a shortest path to this term instead")
@click.option(
    "--budget",
    type=click.IntRange(min=1),
    default=DEFAULT_MAX_STATES,
    show_default=True,
    help="State budget of the --to search",
)
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
@click.argument("term")
@click.pass_context
def trace(ctx: click.Context, calculus: str, steps: int, goal: str, budget: int, fmt: str, term: str):
    """
    Print the reduction steps of TERM, one rule label and position per step.

    Without --to the steps are those of the strategy used by reduce, and a
    ~L line marks a vector-space renormalization between two steps. With
    --to, a breadth-first search modulo the vector-space rules looks for a
    shortest path to the goal. Its steps fire on the state the previous step
    reached, or on that state's canonical form behind a ~L line.

    \b
    Examples:
      algcps trace --calculus lin "(\\x. x) ((\\y. y) z)"
      algcps trace --calculus alg --to "(\\k. k x) k" "(\\k. k x) k"
      algcps trace --calculus lin --format structured "(\\x. x) y"
    """
    calc = Calculus(calculus)
    try:
        source = load_term(ctx, term)
        if goal is None:
            result = normalize(source, calc, steps)
            witness = result.trace
        else:
            search = reachable(source, load_term(ctx, goal), calc, budget)
            witness = search.trace
    except AlgCpsError as e:
        _abort(e)

    if goal is None:
        _emit(fmt, witness.to_text(), {"status": result.status.value, **witness.to_dict()})
        _report_normal_form(result, steps)
        return

    if search.status is SearchStatus.FOUND:
        _emit(fmt, witness.to_text(), {"status": search.status.value, **witness.to_dict()})
    elif search.status is SearchStatus.UNREACHABLE:
        click.secho(
            f"[UNREACHABLE] Goal not reachable ({search.explored} states explored)",
            fg="red", err=True,
        )
        sys.exit(EXIT_CHECK_FAILED)
    else:
        _abort(SearchExhausted(budget))


@main.command()
@click.option("--dir", "direction", type=DIRECTIONS, required=True, help="Translation direction")
@click.option("--apply-k", "with_k", is_flag=True, help="Apply the translation to the continuation k")
@click.option("--colon", "use_colon", is_flag=True, help="Print the colon translation M:k instead")
@click.argument("term")
@click.pass_context
def translate(ctx: click.Context, direction: str, with_k: bool, use_colon: bool, term: str):
    """
    Print the CPS translation of TERM.

    \b
    Examples:
      algcps translate --dir v2n "x"
        → \\k. k x
      algcps translate --dir n2v --apply-k "f x"
        → (\\k. f \\b. b x k) k
      algcps translate --dir v2n --colon "(x + y) z"
    """
    d = Direction(direction)
    try:
        source = load_term(ctx, term)
        if use_colon:
            result = colon(source, KVAR, d)
        else:
            result = cps(source, d)
            if with_k:
                result = apply_k(result)
    except AlgCpsError as e:
        _abort(e)
    click.echo(format_term(result))


@main.command()
@click.option("--dir", "direction", type=DIRECTIONS, required=True, help="Translation direction")
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
@click.argument("term")
@click.pass_context
def invert(ctx: click.Context, direction: str, fmt: str, term: str):
    """
    Decompile TERM, a computation, suspension or CPS-value, to a source term.

    \b
    Examples:
      algcps invert --dir v2n "k x"
        → x
      algcps invert --dir v2n "(\\k. k x) k"
        → x
      algcps invert --dir n2v "\\k. k (\\x. x)"
        → \\x. x
    """
    from .inverse import invert as invert_term

    try:
        cls, result = invert_term(load_term(ctx, term), Direction(direction))
    except AlgCpsError as e:
        _abort(e)
    _emit(fmt, format_term(result), {"class": cls.value, "term": format_term(result)})


@main.command()
@click.option("--dir", "direction", type=DIRECTIONS, required=True, help="Translation direction")
@click.argument("term")
@click.pass_context
def classify(ctx: click.Context, direction: str, term: str):
    """
    Print the grammar class of TERM in the CPS image of a direction.

    One of BaseComputation, Computation, BaseSuspension, Suspension,
    Continuation, CpsValue or None.

    \b
    Examples:
      algcps classify --dir v2n "\\k. k x"
        → BaseSuspension
      algcps classify --dir v2n "\\b. x b k"
        → Continuation
    """
    from .inverse import classify as classify_term

    try:
        click.echo(classify_term(load_term(ctx, term), Direction(direction)).value)
    except AlgCpsError as e:
        _abort(e)


@main.command()
@click.option(
    "--lemma", "-l", "lemmas",
    multiple=True,
    default=("all",),
    show_default=True,
    help="Lemma id (repeatable) or 'all'; see `algcps lemmas`",
)
@click.option("--dir", "directions", type=DIRECTIONS, multiple=True, help="Direction (repeatable, default: both)")
@click.option("--seed", type=int, default=None, help="Generator seed [default: 0]")
@click.option("--instances", "-n", type=click.IntRange(min=1), default=None, help="Instances per check [default: 500]")
@click.option("--depth", type=click.IntRange(min=0), default=None, help="Maximum term depth [default: 5]")
@click.option("--budget", type=click.IntRange(min=1), default=None, help="State budget per reachability search")
@click.option(
    "--suite", "suite_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Suite YAML (see suites/)",
)
@click.option("--term", "term_text", default=None, help="Check the lemmas on this source term only")
@click.option("--jobs", "-j", type=click.IntRange(min=1), default=1, show_default=True, help="Worker processes")
@click.option(
    "--report-dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Write check_report_<timestamp>.json and execution.log here",
)
@click.option("--strict", is_flag=True, help="Known-falsified checks fail the run too")
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
@click.pass_context
def check(
    ctx: click.Context,
    lemmas: tuple[str, ...],
    directions: tuple[str, ...],
    seed: int,
    instances: int,
    depth: int,
    budget: int,
    suite_path: Path,
    term_text: str,
    jobs: int,
    report_dir: Path,
    strict: bool,
    fmt: str,
):
    """
    Check lemmas of the translations on generated instances.

    Every lemma runs once per direction and reports as name[dir]. Failing
    instances are shrunk and printed with the seed that replays them.
    Budget-exhausted instances are reported as inconclusive and never fail
    a run. Checks listed as known falsified only fail the run with --strict.

    \b
    Examples:
      algcps check --suite suites/quick.yaml
        → Run the quick suite
      algcps check --lemma inverse-term --lemma indifference --dir n2v
        → Two lemmas, n2v only, 500 instances each
      algcps check --suite suites/acceptance.yaml --jobs 4 --report-dir reports/
        → Acceptance suite on four processes, JSON report saved
      algcps check --lemma soundness --term "(\\x f. f x x) (y + z)"
        → One lemma on one given term

    \b
    Output Structure:
      <report-dir>/
        ├── execution.log                       # DEBUG log of the run
        └── check_report_<timestamp>.json       # Per-check counts, failures, coverage
    """
    from .core import load_suite, run_suite, run_term_checks
    from .harness import DEFAULT_INSTANCES, KNOWN_FALSIFIED, LEMMA_NAMES, Budgets, GenConfig, get_lemma
    from .models import Suite

    obj = ctx.obj
    structured = fmt == "structured"
    try:
        names = list(LEMMA_NAMES) if "all" in lemmas else [get_lemma(name).name for name in lemmas]
        dirs = [Direction(d) for d in directions] or list(Direction)

        if term_text is not None:
            budgets = Budgets(states=budget) if budget else Budgets()
            result = run_term_checks(
                load_term(ctx, term_text), names, dirs, budgets,
                seed=seed or 0, structured=structured, strict=strict,
            )
            sys.exit(result.exit_code)

        if suite_path is not None:
            suite = load_suite(suite_path, obj["ring"] if obj["ring_explicit"] else None)
            suite.restrict(None if "all" in lemmas else names, list(dirs) if directions else None)
            suite.override(seed=seed, instances=instances, depth=depth, states=budget)
        else:
            suite = Suite.from_lemmas(
                names,
                dirs,
                GenConfig(seed=seed or 0, max_depth=5 if depth is None else depth),
                Budgets(states=budget) if budget else Budgets(),
                instances or DEFAULT_INSTANCES,
                known_falsified=list(KNOWN_FALSIFIED),
            )

        result = run_suite(
            suite,
            jobs=jobs,
            report_dir=report_dir,
            strict=strict,
            structured=structured,
            verbose=obj["verbose"],
            quiet=obj["quiet"],
        )
    except AlgCpsError as e:
        _abort(e)

    if not structured:
        if result.exit_code == 0:
            click.secho("\n[SUCCESS] No counterexample found", fg="green")
        else:
            click.secho("\n[FAILED] Counterexamples found", fg="red")
    sys.exit(result.exit_code)


@main.command(name="lemmas")
def list_lemmas():
    """
    List the lemma ids accepted by `check --lemma`.

    Directional lemmas run once per translation direction. Checks known to
    fail on some instances are marked.
    """
    from .harness import KNOWN_FALSIFIED, LEMMAS

    known = {name.split("[")[0]: name for name in KNOWN_FALSIFIED}

    click.echo(f"\n{Fore.CYAN}{'=' * 70}{Style.RESET_ALL}")
    click.echo(f"{Fore.CYAN}  Lemmas{Style.RESET_ALL}")
    click.echo(f"{Fore.CYAN}{'=' * 70}{Style.RESET_ALL}\n")

    for lemma in LEMMAS.values():
        scope = "v2n, n2v" if lemma.directional else "fixtures"
        click.echo(f"  {Fore.GREEN}-{Style.RESET_ALL} {lemma.name} ({scope})")
        click.echo(f"    {lemma.summary}")
        if lemma.name in known:
            click.echo(f"    {Fore.YELLOW}known falsified: {known[lemma.name]}{Style.RESET_ALL}")

    click.echo()
    click.echo(f"Total: {Fore.GREEN}{len(LEMMAS)}{Style.RESET_ALL} lemmas")
    click.echo()


if __name__ == "__main__":
    main()
