"""
Utility functions for algcps
"""
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import yaml

BUDGET_KEYS = ("states", "steps", "graph_states", "successors")


def get_timestamp_utc() -> str:
    """Get current UTC timestamp in ISO format"""
    return datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")


def get_timestamp_compact() -> str:
    """UTC timestamp for file names"""
    return datetime.now(timezone.utc).strftime("%Y%m%d_%H%M%S")


def load_yaml_file(path: Path) -> dict[str, Any]:
    """
    Load and parse a YAML file.

    Args:
        path: Path to YAML file

    Returns:
        Parsed YAML content as dictionary

    Raises:
        FileNotFoundError: If file doesn't exist
        ValueError: If file is not valid YAML or not a mapping
    """
    if not path.exists():
        raise FileNotFoundError(f"YAML file not found: {path}")

    with open(path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ValueError(f"Invalid YAML in {path}: {e}")
    if not isinstance(data, dict):
        raise ValueError(f"{path} must contain a YAML mapping")
    return data


def _validate_budgets(budgets: Any, where: str) -> None:
    if not isinstance(budgets, dict):
        raise ValueError(f"{where} 'budgets' must be a mapping")
    for key, value in budgets.items():
        if key not in BUDGET_KEYS:
            raise ValueError(f"{where} has unknown budget '{key}' (known: {', '.join(BUDGET_KEYS)})")
        if not isinstance(value, int) or value <= 0:
            raise ValueError(f"{where} budget '{key}' must be a positive integer")


def validate_suite_schema(data: dict[str, Any]) -> None:
    """
    Validate basic suite YAML structure.

    Args:
        data: Parsed YAML data

    Raises:
        ValueError: If schema is invalid
    """
    if "suite" not in data:
        raise ValueError("Missing required key 'suite'")

    suite = data["suite"]
    if not isinstance(suite, dict) or "name" not in suite:
        raise ValueError("Suite must have 'name' field")
    if "budgets" in suite:
        _validate_budgets(suite["budgets"], "Suite")

    if "checks" not in data:
        raise ValueError("Missing required key 'checks'")

    checks = data["checks"]
    if not isinstance(checks, list):
        raise ValueError("'checks' must be a list")

    if len(checks) == 0:
        raise ValueError("Suite must have at least one check")

    for i, check in enumerate(checks):
        if not isinstance(check, dict) or "lemma" not in check:
            raise ValueError(f"Check {i} missing required 'lemma' field")
        directions = check.get("directions", [])
        if not isinstance(directions, list) or any(d not in ("v2n", "n2v") for d in directions):
            raise ValueError(f"Check {i} 'directions' must be a list of v2n and n2v")
        if "budgets" in check:
            _validate_budgets(check["budgets"], f"Check {i}")

    known = data.get("known_falsified", [])
    if not isinstance(known, list):
        raise ValueError("'known_falsified' must be a list")


def read_term_text(argument: str) -> str:
    """
    Term text given inline, or read from a file when written as @path.

    Raises:
        FileNotFoundError: If the @path file doesn't exist
    """
    if not argument.startswith("@"):
        return argument
    path = Path(argument[1:])
    if not path.exists():
        raise FileNotFoundError(f"Term file not found: {path}")
    return path.read_text(encoding="utf-8").strip()
