"""
Shared fixtures
"""
from pathlib import Path

import pytest
import yaml
from click.testing import CliRunner

from algcps.syntax import parse_term

SUITES_DIR = Path(__file__).resolve().parents[1] / "suites"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def copy_term():
    """copy = λx.⟨x,x⟩ with Church pairs ⟨M,N⟩ = λf.f M N"""
    return parse_term(r"\x. \f. f x x")


@pytest.fixture
def copy_sum(copy_term):
    return parse_term(rf"({copy_term}) (y + z)")


@pytest.fixture
def suites_dir():
    return SUITES_DIR


@pytest.fixture
def write_suite(tmp_path):
    """Write a suite mapping to a YAML file and return its path."""

    def _write(data, name="suite.yaml"):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data, sort_keys=False), encoding="utf-8")
        return path

    return _write
