"""
Data models for algcps
"""
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Optional

from .cps import Direction
from .harness import (
    DEFAULT_INSTANCES,
    DEFAULT_SCALARS,
    DEFAULT_SOURCE_VARS,
    Budgets,
    GenConfig,
    get_lemma,
)
from .scalars import RATIONALS, Ring, get_ring


@dataclass
class SuiteMetadata:
    """Metadata about a suite"""
    name: str
    description: str


def _budgets(data: dict[str, Any], base: Budgets) -> Budgets:
    if not data:
        return base
    return replace(base, **{key: int(value) for key, value in data.items()})


@dataclass
class CheckSpec:
    """One lemma, checked in one or both directions"""
    lemma: str
    directions: list[Optional[Direction]]
    instances: int = DEFAULT_INSTANCES
    depth: Optional[int] = None
    budgets: Optional[Budgets] = None

    @classmethod
    def from_yaml(cls, data: dict[str, Any], defaults: "Suite") -> "CheckSpec":
        """Create CheckSpec from parsed YAML data"""
        lemma = get_lemma(data["lemma"])
        if lemma.directional:
            directions = [Direction(d) for d in data.get("directions", [d.value for d in Direction])]
        else:
            directions = [None]
        return cls(
            lemma=lemma.name,
            directions=directions,
            instances=int(data.get("instances", defaults.instances)),
            depth=data.get("depth"),
            budgets=_budgets(data.get("budgets", {}), defaults.budgets),
        )


@dataclass
class Suite:
    """A set of lemma checks with shared generator settings"""
    metadata: SuiteMetadata
    config: GenConfig
    budgets: Budgets
    instances: int = DEFAULT_INSTANCES
    checks: list[CheckSpec] = field(default_factory=list)
    known_falsified: list[str] = field(default_factory=list)
    path: Optional[Path] = None

    @classmethod
    def from_yaml(cls, yaml_path: Path, data: dict[str, Any], ring: Optional[Ring] = None) -> "Suite":
        """
        Create Suite from parsed YAML data.

        Scalars are strings in term syntax, parsed with `ring`, or with the
        suite's own `ring` key when no ring is given.
        """
        suite_meta = data.get("suite", {})
        metadata = SuiteMetadata(
            name=suite_meta.get("name", "unnamed"),
            description=suite_meta.get("description", ""),
        )
        ring = ring or get_ring(suite_meta.get("ring", RATIONALS.name))
        scalars = suite_meta.get("scalars")
        config = GenConfig(
            seed=int(suite_meta.get("seed", 0)),
            max_depth=int(suite_meta.get("depth", 5)),
            scalar_pool=tuple(ring.parse(str(s)) for s in scalars) if scalars else DEFAULT_SCALARS,
            source_var_pool=tuple(suite_meta.get("variables", DEFAULT_SOURCE_VARS)),
        )
        suite = cls(
            metadata=metadata,
            config=config,
            budgets=_budgets(suite_meta.get("budgets", {}), Budgets()),
            instances=int(suite_meta.get("instances", DEFAULT_INSTANCES)),
            known_falsified=list(data.get("known_falsified", [])),
            path=yaml_path,
        )
        suite.checks = [CheckSpec.from_yaml(check, suite) for check in data["checks"]]
        return suite

    @classmethod
    def from_lemmas(
        cls,
        lemmas: list[str],
        directions: list[Direction],
        config: GenConfig,
        budgets: Budgets,
        instances: int,
        known_falsified: Optional[list[str]] = None,
    ) -> "Suite":
        """An ad-hoc suite, as assembled from `check` command-line options"""
        checks = []
        for name in lemmas:
            lemma = get_lemma(name)
            checks.append(CheckSpec(
                lemma=lemma.name,
                directions=list(directions) if lemma.directional else [None],
                instances=instances,
                budgets=budgets,
            ))
        return cls(
            metadata=SuiteMetadata(name="command-line", description=", ".join(lemmas)),
            config=config,
            budgets=budgets,
            instances=instances,
            checks=checks,
            known_falsified=list(known_falsified or []),
        )

    def config_for(self, check: CheckSpec) -> GenConfig:
        if check.depth is None:
            return self.config
        return replace(self.config, max_depth=int(check.depth))

    def restrict(
        self,
        lemmas: Optional[list[str]] = None,
        directions: Optional[list[Direction]] = None,
    ) -> None:
        """Keep only the given lemmas and directions"""
        if lemmas:
            self.checks = [c for c in self.checks if c.lemma in lemmas]
        if directions:
            for check in self.checks:
                if check.directions != [None]:
                    check.directions = [d for d in check.directions if d in directions]
            self.checks = [c for c in self.checks if c.directions]

    def override(
        self,
        seed: Optional[int] = None,
        instances: Optional[int] = None,
        depth: Optional[int] = None,
        states: Optional[int] = None,
    ) -> None:
        """Apply command-line overrides to every check"""
        if seed is not None:
            self.config = replace(self.config, seed=seed)
        if depth is not None:
            self.config = replace(self.config, max_depth=depth)
        if states is not None:
            self.budgets = replace(self.budgets, states=states)
        for check in self.checks:
            if instances is not None:
                check.instances = instances
            if depth is not None:
                check.depth = None
            if states is not None and check.budgets is not None:
                check.budgets = replace(check.budgets, states=states)
