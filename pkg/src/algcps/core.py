"""
Core execution logic: suite loading, lemma checks and check reports
"""
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

import click

from . import __version__
from .cps import Direction
from .errors import EXIT_CHECK_FAILED, EXIT_OK, InvalidSuiteError, SuiteNotFoundError
from .harness import KNOWN_FALSIFIED, Budgets, CheckReport, GenConfig, check_lemma, check_term, get_lemma
from .logger import configure_worker, get_logger, setup_logging
from .models import CheckSpec, Suite
from .rewrite import RuleLabel
from .scalars import Ring, format_scalar
from .terms import Term
from .utils import (
    get_timestamp_compact,
    get_timestamp_utc,
    load_yaml_file,
    validate_suite_schema,
)

MAX_SHOWN_FAILURES = 3
INCONCLUSIVE_LIMIT = 0.10
SAMPLING_NOTE = (
    "Checks run on sampled instances: a failure falsifies a lemma, "
    "a pass only means no counterexample was found."
)


def load_suite(suite_path: Path, ring: Optional[Ring] = None) -> Suite:
    """
    Load and validate a suite from YAML file.

    Args:
        suite_path: Path to suite YAML
        ring: Scalar carrier for the suite's scalar pool (suite's own if None)

    Returns:
        Validated Suite object

    Raises:
        SuiteNotFoundError: If the file doesn't exist
        InvalidSuiteError: If the YAML is malformed or fails validation
    """
    logger = get_logger()
    logger.debug(f"Loading suite: {suite_path}")

    if not suite_path.exists():
        raise SuiteNotFoundError(suite_path)
    try:
        data = load_yaml_file(suite_path)
        validate_suite_schema(data)
        suite = Suite.from_yaml(suite_path, data, ring)
    except ValueError as e:
        raise InvalidSuiteError(str(e)) from e

    logger.debug("Suite validation passed")
    return suite


@dataclass
class SuiteResult:
    """Merged outcome of a suite run"""
    suite: Suite
    reports: list[CheckReport]
    strict: bool = False
    coverage: Counter = field(default_factory=Counter)
    report_path: Optional[Path] = None

    def __post_init__(self):
        for report in self.reports:
            self.coverage.update(report.coverage)

    @property
    def failed(self) -> list[str]:
        known = set(self.suite.known_falsified)
        return [r.name for r in self.reports if not r.ok and r.name not in known]

    @property
    def falsified(self) -> list[str]:
        known = set(self.suite.known_falsified)
        return [r.name for r in self.reports if not r.ok and r.name in known]

    @property
    def missing_rules(self) -> list[str]:
        return [label.value for label in RuleLabel if not self.coverage[label.value]]

    @property
    def exit_code(self) -> int:
        if self.failed or (self.strict and self.falsified):
            return EXIT_CHECK_FAILED
        return EXIT_OK

    def to_dict(self) -> dict[str, Any]:
        suite = self.suite
        return {
            "tool": "algcps",
            "version": __version__,
            "generated_at_utc": get_timestamp_utc(),
            "suite": {
                "name": suite.metadata.name,
                "description": suite.metadata.description,
                "path": str(suite.path) if suite.path else None,
            },
            "seed": suite.config.seed,
            "config": {
                "max_depth": suite.config.max_depth,
                "scalars": [format_scalar(s) for s in suite.config.scalar_pool],
                "variables": list(suite.config.source_var_pool),
            },
            "budgets": asdict(suite.budgets),
            "known_falsified": suite.known_falsified,
            "strict": self.strict,
            "checks": [r.to_dict() for r in self.reports],
            "coverage": {label.value: self.coverage[label.value] for label in RuleLabel},
            "outcome": {
                "failed": self.failed,
                "falsified": self.falsified,
                "exit_code": self.exit_code,
            },
            "note": SAMPLING_NOTE,
        }


def _check_kwargs(suite: Suite, check: CheckSpec, direction: Optional[Direction]) -> dict[str, Any]:
    return {
        "name": check.lemma,
        "direction": direction,
        "cfg": suite.config_for(check),
        "budgets": check.budgets or suite.budgets,
        "instances": check.instances,
    }


def run_checks(
    suite: Suite,
    jobs: int = 1,
    verbose: bool = False,
    quiet: bool = False,
    on_report=None,
) -> list[CheckReport]:
    """
    Run every (lemma, direction) of a suite, in suite order.

    With jobs > 1 the checks run on a process pool; each worker owns its
    generator state, so reports are identical to a sequential run.
    """
    logger = get_logger()
    tasks = [
        _check_kwargs(suite, check, direction)
        for check in suite.checks
        for direction in check.directions
    ]
    logger.info(f"Running {len(tasks)} checks with {max(jobs, 1)} job(s)")

    reports = []
    if jobs <= 1:
        for kwargs in tasks:
            report = check_lemma(**kwargs)
            reports.append(report)
            if on_report:
                on_report(len(reports), len(tasks), report)
        return reports

    with ProcessPoolExecutor(
        max_workers=jobs, initializer=configure_worker, initargs=(verbose, quiet)
    ) as pool:
        futures = [pool.submit(check_lemma, **kwargs) for kwargs in tasks]
        for future in futures:
            report = future.result()
            reports.append(report)
            if on_report:
                on_report(len(reports), len(tasks), report)
    return reports


def print_report_line(index: int, total: int, report: CheckReport, known_falsified) -> None:
    line = f"[{index}/{total}] {report.name}: {report.summary()} ({report.elapsed_s:.2f}s)"
    if report.ok:
        click.secho(f"    [OK] {line}", fg="green")
    elif report.name in known_falsified:
        click.secho(f"    [FALSIFIED] {line}", fg="yellow")
    else:
        click.secho(f"    [FAILED] {line}", fg="red")

    for failure in report.failures[:MAX_SHOWN_FAILURES]:
        click.echo(f"        → seed {failure.seed}: {failure.term}")
        click.echo(f"          {failure.detail}")
    if len(report.failures) > MAX_SHOWN_FAILURES:
        click.echo(f"        → ... {len(report.failures) - MAX_SHOWN_FAILURES} more")
    if "witness" in report.extra:
        click.echo(f"        → Witness: {report.extra['witness']}")


def print_summary(result: SuiteResult) -> None:
    reports = result.reports
    passed = sum(1 for r in reports if r.ok)
    click.echo()
    click.echo(f"Checks: {passed}/{len(reports)} passed")
    if result.falsified:
        click.secho(f"Known falsified: {', '.join(result.falsified)}", fg="yellow")
    if result.failed:
        click.secho(f"Failed: {', '.join(result.failed)}", fg="red")
    if any(r.lemma == "rule-lines" for r in reports):
        fired = len(RuleLabel) - len(result.missing_rules)
        if result.missing_rules:
            click.secho(
                f"Rule coverage: {fired}/{len(RuleLabel)} rule lines fired "
                f"(missing: {', '.join(result.missing_rules)})",
                fg="yellow",
            )
        else:
            click.echo(f"Rule coverage: {fired}/{len(RuleLabel)} rule lines fired")
    click.echo(SAMPLING_NOTE)


def save_check_report(result: SuiteResult, report_dir: Path) -> Path:
    """Write check_report_<timestamp>.json into `report_dir`."""
    logger = get_logger()
    report_dir.mkdir(parents=True, exist_ok=True)

    report_file = report_dir / f"check_report_{get_timestamp_compact()}.json"
    with open(report_file, "w", encoding="utf-8") as f:
        json.dump(result.to_dict(), f, indent=2, ensure_ascii=False)

    logger.info(f"Saved check report: {report_file}")
    return report_file


def _warn_inconclusive(reports: list[CheckReport]) -> None:
    logger = get_logger()
    for report in reports:
        if report.inconclusive_ratio > INCONCLUSIVE_LIMIT:
            logger.warning(
                f"{report.name}: {report.inconclusive} of {report.attempted} instances "
                f"exhausted their budget; raise --budget"
            )


def run_suite(
    suite: Suite,
    jobs: int = 1,
    report_dir: Optional[Path] = None,
    strict: bool = False,
    structured: bool = False,
    verbose: bool = False,
    quiet: bool = False,
) -> SuiteResult:
    """
    Run a suite, print its progress and optionally save a JSON report.

    In structured mode nothing but the JSON report goes to stdout.
    """
    logger = setup_logging(log_dir=report_dir, verbose=verbose, quiet=quiet)
    logger.info(f"algcps v{__version__}")
    logger.info(f"Suite: {suite.metadata.name} (seed {suite.config.seed})")

    known = set(suite.known_falsified)
    on_report = None
    if not structured:
        total = sum(len(check.directions) for check in suite.checks)
        click.echo(f"Suite: {suite.metadata.name}")
        if suite.metadata.description:
            click.echo(f"Description: {suite.metadata.description}")
        click.echo(f"Checks: {total}")
        click.echo(f"Seed: {suite.config.seed}")
        click.echo()

        def on_report(index, count, report):
            print_report_line(index, count, report, known)

    reports = run_checks(suite, jobs=jobs, verbose=verbose, quiet=quiet, on_report=on_report)
    result = SuiteResult(suite=suite, reports=reports, strict=strict)
    _warn_inconclusive(reports)

    if report_dir:
        result.report_path = save_check_report(result, report_dir)
    if structured:
        click.echo(json.dumps(result.to_dict(), indent=2, ensure_ascii=False))
    else:
        print_summary(result)
        if result.report_path:
            click.echo(f"\n[METADATA] Check report: {result.report_path}")

    if result.failed:
        logger.error(f"Suite completed with {len(result.failed)} failed check(s)")
    else:
        logger.info("Suite completed")
    return result


def run_term_checks(
    term: Term,
    lemmas: list[str],
    directions: list[Direction],
    budgets: Budgets,
    seed: int = 0,
    structured: bool = False,
    strict: bool = False,
) -> SuiteResult:
    """Run directional lemmas on one given source term."""
    reports = []
    for name in lemmas:
        if not get_lemma(name).directional:
            continue
        for direction in directions:
            reports.append(check_term(name, term, direction, budgets, seed=seed))

    suite = Suite.from_lemmas(
        lemmas, directions, GenConfig(seed=seed), budgets, instances=1,
        known_falsified=list(KNOWN_FALSIFIED),
    )
    result = SuiteResult(suite=suite, reports=reports, strict=strict)
    if structured:
        click.echo(json.dumps([r.to_dict() for r in reports], indent=2, ensure_ascii=False))
        return result
    click.echo(f"Term: {term}")
    for index, report in enumerate(reports, 1):
        print_report_line(index, len(reports), report, KNOWN_FALSIFIED)
        if "reason" in report.extra:
            click.echo(f"        → {report.extra['reason']}")
    return result
