import json

import pytest

from algcps import __version__
from algcps.cli import main


def invoke(runner, *args):
    return runner.invoke(main, list(args))


def test_version(runner):
    result = invoke(runner, "--version")
    assert result.exit_code == 0
    assert __version__ in result.output


@pytest.mark.parametrize(
    "args, expected",
    [
        (["parse", r"(\x. (x)) (y)"], r"(\x. x) y"),
        (["translate", "--dir", "v2n", "x"], r"\k. k x"),
        (["translate", "--dir", "n2v", "x"], "x"),
        (["translate", "--dir", "n2v", "--apply-k", "f x"], r"(\k. f \b. b x k) k"),
        (["translate", "--dir", "v2n", "--colon", "y + z"], "k y + k z"),
        (["invert", "--dir", "v2n", "k x"], "x"),
        (["invert", "--dir", "v2n", r"(\k. k x) k"], "x"),
        (["classify", "--dir", "v2n", r"\k. k x"], "BaseSuspension"),
        (["classify", "--dir", "n2v", "k x"], "None"),
        (["reduce", "--calculus", "alg", r"(\x f. f x x) (y + z)"], r"\f. f (y + z) (y + z)"),
    ],
)
def test_term_commands(runner, args, expected):
    result = invoke(runner, *args)
    assert result.exit_code == 0, result.output
    assert result.output.strip() == expected


def test_term_from_file(runner, tmp_path):
    path = tmp_path / "copy.term"
    path.write_text("(\\x. \\f. f x x) y\n", encoding="utf-8")
    result = invoke(runner, "reduce", "--calculus", "lin", f"@{path}")
    assert result.exit_code == 0
    assert result.output.strip() == r"\f. f y y"


def test_missing_term_file(runner, tmp_path):
    result = invoke(runner, "parse", f"@{tmp_path / 'missing.term'}")
    assert result.exit_code == 2


@pytest.mark.parametrize(
    "args, code",
    [
        (["parse", r"(\x. x"], 2),
        (["parse", "x $ y"], 2),
        (["translate", "--dir", "v2n", "k"], 3),
        (["invert", "--dir", "v2n", "x y"], 3),
        (["reduce", "--calculus", "alg", "--steps", "5", r"(\x. x x) (\x. x x)"], 4),
        (["trace", "--calculus", "alg", "--budget", "2", "--to", "z", r"(\x. x) ((\y. y) w)"], 4),
        (["trace", "--calculus", "lin", "--to", "z", "x + y"], 1),
        (["check", "--lemma", "nope"], 2),
    ],
)
def test_exit_codes(runner, args, code):
    assert invoke(runner, *args).exit_code == code


def test_syntax_error_shows_column(runner):
    result = invoke(runner, "parse", r"(\x. x")
    assert "column 7" in result.output


def test_stuck_term_is_not_an_error(runner):
    result = invoke(runner, "reduce", "--calculus", "lin", "x y")
    assert result.exit_code == 0
    assert "x y" in result.output
    assert "[STUCK]" in result.output


def test_reduce_structured(runner):
    result = invoke(runner, "reduce", "--calculus", "lin", "--format", "structured", r"(\x. x) y")
    data = json.loads(result.output)
    assert data == {"status": "value", "term": "y", "steps": 1}


def test_trace(runner):
    result = invoke(runner, "trace", "--calculus", "lin", r"(\x. x) y")
    assert result.exit_code == 0
    assert "BetaV @ ε" in result.output


def test_trace_to_goal(runner):
    result = invoke(
        runner, "trace", "--calculus", "lin", "--format", "structured",
        "--to", "1/2.(f y y) + 1/2.(f z z)", r"(\x. f x x) (1/2.y + 1/2.z)",
    )
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["status"] == "found"
    assert "Ar_scale" in {step["rule"] for step in data["steps"]}


def test_gaussian_ring(runner):
    result = invoke(runner, "--ring", "gaussian", "reduce", "--calculus", "lin", "[i].[i].x")
    assert result.exit_code == 0
    assert result.output.strip() == "-1.x"


def test_lemmas(runner):
    result = invoke(runner, "lemmas")
    assert result.exit_code == 0
    assert "rule-lines" in result.output
    assert "known falsified: inverse-step[v2n]" in result.output


def test_check_rule_lines(runner):
    result = invoke(runner, "check", "--lemma", "rule-lines")
    assert result.exit_code == 0
    assert "[OK]" in result.output
    assert "Rule coverage: 28/28" in result.output
    assert "[SUCCESS]" in result.output


def test_check_structured(runner):
    result = invoke(
        runner, "check", "--lemma", "inverse-term", "--dir", "n2v", "-n", "5", "--format", "structured",
    )
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert [check["name"] for check in data["checks"]] == ["inverse-term[n2v]"]
    assert data["checks"][0]["attempted"] == 5
    assert data["outcome"]["exit_code"] == 0


def test_check_term(runner):
    result = invoke(
        runner, "check", "--lemma", "soundness", "--dir", "n2v", "--term", r"(\x. \z. x) 0",
    )
    assert result.exit_code == 1
    assert "[FAILED]" in result.output


def test_check_suite_writes_report(runner, suites_dir, tmp_path):
    report_dir = tmp_path / "reports"
    result = invoke(
        runner, "check", "--suite", str(suites_dir / "quick.yaml"),
        "--lemma", "rule-lines", "--lemma", "free-variables", "-n", "5",
        "--report-dir", str(report_dir),
    )
    assert result.exit_code == 0, result.output
    assert (report_dir / "execution.log").exists()
    [report] = list(report_dir.glob("check_report_*.json"))
    data = json.loads(report.read_text(encoding="utf-8"))
    assert data["suite"]["name"] == "QUICK"
    assert [check["name"] for check in data["checks"]] == [
        "rule-lines", "free-variables[v2n]", "free-variables[n2v]",
    ]


def test_acceptance_suite_reduced(runner, suites_dir):
    result = invoke(
        runner, "check", "--suite", str(suites_dir / "acceptance.yaml"),
        "-n", "3", "--depth", "3", "--budget", "2000",
    )
    assert result.exit_code == 0, result.output
    assert "Checks: 41" in result.output
    assert "[FAILED] [" not in result.output


@pytest.mark.parametrize("strict, code", [(False, 0), (True, 1)])
def test_check_term_marks_known_falsified(runner, monkeypatch, strict, code):
    from algcps import core
    from algcps.harness import CheckReport, Failure

    def falsified(name, term, direction, budgets, seed=0):
        report = CheckReport(name=f"{name}[{direction.value}]", lemma=name, direction=direction.value)
        report.attempted = 1
        report.failures.append(Failure(seed, str(term), "decompiled BetaN step: does not reach"))
        return report

    monkeypatch.setattr(core, "check_term", falsified)
    args = ["check", "--lemma", "inverse-step", "--dir", "v2n", "--term", "x"]
    result = invoke(runner, *args, *(["--strict"] if strict else []))
    assert result.exit_code == code
    assert "[FALSIFIED]" in result.output
