"""
Bundled case-study networks and their threshold cases.

Networks are stored as text files under data/, the metadata (quota, cases,
structural checks) in data/case_studies.json. Every load re-runs the
structural checks and raises DatasetIntegrityError on a mismatch.
"""
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from influence_games.core.game import InfluenceGame
from influence_games.core.influence_graph import (
    InfluenceGraph, ThresholdScheme, apply_threshold_scheme,
    mark_isolated_unconvincible, reverse_with_weight_swap
)
from influence_games.network_io import read_network

logger = logging.getLogger(__name__)

DATA_DIR = os.path.join(Path(__file__).parent.absolute(), "data")

# arc weight sent by each role of the student government
ROLE_WEIGHTS = {"advisor": 1, "minister": 2, "prime_minister": 3}


class DatasetIntegrityError(ValueError):
    pass


class UnknownBuiltinError(ValueError):
    pass


def load_metadata() -> dict:
    with open(os.path.join(DATA_DIR, "case_studies.json"), "r") as infile:
        return json.load(infile)


def role_threshold(role: str, in_degree: int) -> int:
    if role == "advisor":
        return 1
    if role == "minister":
        return (in_degree + 1) // 2
    if role == "prime_minister":
        return in_degree
    raise ValueError(
        "Role must be one of " + ", ".join(ROLE_WEIGHTS) + f", got {role}"
    )


@dataclass
class CaseStudy:
    name: str
    graph: InfluenceGraph
    quota: int
    cases: Dict[str, Optional[ThresholdScheme]]
    isolated_unconvincible: bool = False
    count_unconvincible: bool = True
    roles: Dict[str, str] = field(default_factory=dict)

    @property
    def case_names(self) -> Tuple[str, ...]:
        return tuple(self.cases)

    def resolve_case(self, case: Optional[str]) -> str:
        if case is None:
            if len(self.cases) != 1:
                raise UnknownBuiltinError(
                    f"{self.name} needs a case, one of " +
                    ", ".join(self.cases)
                )
            return self.case_names[0]
        if case not in self.cases:
            raise UnknownBuiltinError(
                f"Case of {self.name} must be one of " +
                ", ".join(self.cases) + f", got {case}"
            )
        return case

    def game(self, case: Optional[str] = None) -> InfluenceGame:
        scheme = self.cases[self.resolve_case(case)]
        graph = self.graph
        if scheme is not None:
            graph = apply_threshold_scheme(graph, scheme)
        if self.isolated_unconvincible:
            graph = mark_isolated_unconvincible(graph)
        return InfluenceGame(graph, self.quota, self.count_unconvincible)


def _parse_case(spec: dict) -> Optional[ThresholdScheme]:
    if spec["scheme"] is None:
        return None
    return ThresholdScheme.from_name(spec["scheme"], spec.get("k", 1))


def _fail(name, message):
    raise DatasetIntegrityError(f"Dataset {name}: {message}")


def check_case_study(study: CaseStudy, checks: dict, preferences=None):
    """
    Structural checksums of a transcribed network
    """
    graph, name = study.graph, study.name
    if graph.n != checks["nodes"]:
        _fail(name, f"expected {checks['nodes']} nodes, found {graph.n}")
    if graph.m != checks["arcs"]:
        _fail(name, f"expected {checks['arcs']} arcs, found {graph.m}")

    in_degree = graph.in_degree()
    if "isolated" in checks:
        isolated = (in_degree == 0) & (graph.out_degree() == 0)
        found = sorted(graph.labels[i] for i in np.flatnonzero(isolated))
        if found != sorted(checks["isolated"]):
            _fail(name, f"isolated nodes {found} differ from the record")

    if "in_degree" in checks:
        if np.any(in_degree != checks["in_degree"]):
            _fail(name, f"in-degrees differ from {checks['in_degree']}")
        for node, incoming in enumerate(graph.in_arcs()):
            if sorted(w for _, w in incoming) != [1, 2]:
                _fail(
                    name, f"node {graph.labels[node]} must receive one arc "
                    "of weight 1 and one of weight 2"
                )

    if preferences is not None:
        if reverse_with_weight_swap(preferences).arcs != graph.arcs:
            _fail(name, "influence graph is not the reversed preference graph")

    if study.roles:
        roles = [study.roles[label] for label in graph.labels]
        for src, dst, weight in graph.arcs:
            if weight != ROLE_WEIGHTS[roles[src]]:
                _fail(
                    name, f"arc ({graph.labels[src]}, {graph.labels[dst]}) "
                    f"has weight {weight}, role {roles[src]} sends "
                    f"{ROLE_WEIGHTS[roles[src]]}"
                )
        expected = [
            role_threshold(role, int(deg)) for role, deg in zip(roles, in_degree)
        ]
        if list(graph.thresholds) != expected:
            _fail(name, "thresholds do not follow the role rules")

    if "thresholds" in checks:
        if list(graph.thresholds) != checks["thresholds"]:
            _fail(name, f"thresholds differ from {checks['thresholds']}")


def load_case_study(name: str) -> CaseStudy:
    metadata = load_metadata()
    if name not in metadata:
        raise UnknownBuiltinError(
            "Builtin network must be one of " + ", ".join(metadata) +
            f", got {name}"
        )
    entry = metadata[name]
    network = read_network(os.path.join(DATA_DIR, entry["file"]))
    if network.quota is not None and network.quota != entry["quota"]:
        _fail(name, f"file quota {network.quota} != {entry['quota']}")
    study = CaseStudy(
        name=name,
        graph=network.to_graph(),
        quota=entry["quota"],
        cases={case: _parse_case(spec) for case, spec in entry["cases"].items()},
        isolated_unconvincible=entry.get("isolated_unconvincible", False),
        count_unconvincible=entry.get("count_unconvincible", True),
        roles=entry.get("roles", {})
    )
    preferences = None
    if "preferences" in entry:
        preferences = read_network(
            os.path.join(DATA_DIR, entry["preferences"])
        ).to_graph()
    check_case_study(study, entry["checks"], preferences)
    logger.debug(f"Loaded {name}: {study.graph.n} nodes, {study.graph.m} arcs")
    return study


def load_builtin(name: str, case: Optional[str] = None) -> InfluenceGame:
    return load_case_study(name).game(case)


def list_builtins() -> List[Tuple[str, Tuple[str, ...]]]:
    return [
        (name, tuple(entry["cases"]))
        for name, entry in load_metadata().items()
    ]
