"""
Line oriented text format for influence graphs.

    # comment
    nodes <n>
    label <id> <string>
    threshold <id> <int|inf>
    edge <src> <dst> <weight>
    uedge <a> <b> <weight>
    quota <q>

Ids are 0-based node indices. `nodes` must precede every other directive,
`uedge` expands to both arcs. Unset thresholds default to 1.
"""
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from influence_games.core.game import InfluenceGame
from influence_games.core.influence_graph import (
    UNCONVINCIBLE, InfluenceGraph, is_unconvincible
)

logger = logging.getLogger(__name__)


class NetworkFormatError(ValueError):

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} at line {line}")
        self.line = line


@dataclass
class NetworkFile:
    n: int
    labels: List[str]
    arcs: List[Tuple[int, int, int]] = field(default_factory=list)
    thresholds: List = field(default_factory=list)
    quota: Optional[int] = None

    def to_graph(self) -> InfluenceGraph:
        return InfluenceGraph(
            self.n, tuple(self.arcs), tuple(self.thresholds),
            tuple(self.labels)
        )

    def to_game(self, quota: Optional[int] = None) -> InfluenceGame:
        quota = self.quota if quota is None else quota
        if quota is None:
            raise ValueError("Network file has no quota and none was given")
        return InfluenceGame(self.to_graph(), quota)

    @classmethod
    def from_graph(cls, graph: InfluenceGraph, quota: Optional[int] = None):
        return cls(
            n=graph.n,
            labels=list(graph.labels),
            arcs=list(graph.arcs),
            thresholds=list(graph.thresholds),
            quota=quota
        )


def _parse_int(token: str, what: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise NetworkFormatError(f"{what} must be an integer, got {token!r}", line)


def _expect_args(args, count, directive, line):
    if len(args) != count:
        raise NetworkFormatError(
            f"'{directive}' expects {count} arguments, got {len(args)}", line
        )


def parse_network(text: str) -> NetworkFile:
    n = None
    labels: List[str] = []
    thresholds: List = []
    arcs: Dict[Tuple[int, int], int] = {}
    quota = None

    def node_id(token, line):
        node = _parse_int(token, "Node id", line)
        if not 0 <= node < n:
            raise NetworkFormatError(
                f"Node id {node} out of range [0, {n})", line
            )
        return node

    def add_arc(src, dst, weight, line):
        if src == dst:
            raise NetworkFormatError(f"self-loop at node {src}", line)
        if (src, dst) in arcs:
            raise NetworkFormatError(f"duplicate arc ({src}, {dst})", line)
        arcs[(src, dst)] = weight

    line_number = 0
    for line_number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        directive, *args = content.split()
        if directive != "nodes" and n is None:
            raise NetworkFormatError(
                f"'{directive}' before the 'nodes' directive", line_number
            )

        if directive == "nodes":
            _expect_args(args, 1, directive, line_number)
            if n is not None:
                raise NetworkFormatError("repeated 'nodes' directive", line_number)
            n = _parse_int(args[0], "Node count", line_number)
            if n < 0:
                raise NetworkFormatError(
                    f"Node count must be nonnegative, got {n}", line_number
                )
            labels = [str(i) for i in range(n)]
            thresholds = [1] * n
        elif directive == "label":
            if len(args) < 2:
                raise NetworkFormatError(
                    "'label' expects an id and a string", line_number
                )
            # the label is the rest of the line after the id
            label = content.split(None, 2)[2]
            labels[node_id(args[0], line_number)] = label
        elif directive == "threshold":
            _expect_args(args, 2, directive, line_number)
            node = node_id(args[0], line_number)
            if args[1] == "inf":
                thresholds[node] = UNCONVINCIBLE
            else:
                value = _parse_int(args[1], "Threshold", line_number)
                if value < 1:
                    raise NetworkFormatError(
                        f"Threshold must be >= 1 or inf, got {value}",
                        line_number
                    )
                thresholds[node] = value
        elif directive in ("edge", "uedge"):
            _expect_args(args, 3, directive, line_number)
            src = node_id(args[0], line_number)
            dst = node_id(args[1], line_number)
            weight = _parse_int(args[2], "Weight", line_number)
            if weight < 1:
                raise NetworkFormatError(
                    f"Weight must be >= 1, got {weight}", line_number
                )
            add_arc(src, dst, weight, line_number)
            if directive == "uedge":
                add_arc(dst, src, weight, line_number)
        elif directive == "quota":
            _expect_args(args, 1, directive, line_number)
            if quota is not None:
                raise NetworkFormatError("repeated 'quota' directive", line_number)
            quota = _parse_int(args[0], "Quota", line_number)
            if not 0 <= quota <= n + 1:
                raise NetworkFormatError(
                    f"Quota must lie in [0, {n + 1}], got {quota}", line_number
                )
        else:
            raise NetworkFormatError(
                f"Unknown directive {directive!r}", line_number
            )

    if n is None:
        raise NetworkFormatError("missing 'nodes' directive", line_number + 1)
    if len(set(labels)) != n:
        raise NetworkFormatError("node labels must be unique", line_number + 1)
    return NetworkFile(
        n=n,
        labels=labels,
        arcs=sorted((s, d, w) for (s, d), w in arcs.items()),
        thresholds=thresholds,
        quota=quota
    )


def _check_label(node: int, label: str):
    # a label is the rest of its line up to a comment
    if "#" in label or "\n" in label or label != label.strip() or not label:
        raise ValueError(
            f"Label {label!r} of node {node} cannot be written: labels must "
            "be nonempty, without '#', line breaks or outer whitespace"
        )


def emit_network(network: NetworkFile) -> str:
    """
    Canonical text of a network: default labels and unit thresholds are
    omitted, arcs are written as sorted directed edges
    """
    lines = [f"nodes {network.n}"]
    for i, label in enumerate(network.labels):
        if label != str(i):
            _check_label(i, label)
            lines.append(f"label {i} {label}")
    for i, threshold in enumerate(network.thresholds):
        if is_unconvincible(threshold):
            lines.append(f"threshold {i} inf")
        elif threshold != 1:
            lines.append(f"threshold {i} {threshold}")
    for src, dst, weight in sorted(network.arcs):
        lines.append(f"edge {src} {dst} {weight}")
    if network.quota is not None:
        lines.append(f"quota {network.quota}")
    return "\n".join(lines) + "\n"


def read_network(path) -> NetworkFile:
    if not os.path.exists(path):
        raise FileNotFoundError(f"Network file {path} does not exist")
    with open(path, "r", encoding="utf-8") as infile:
        network = parse_network(infile.read())
    logger.debug(f"Read {network.n} nodes, {len(network.arcs)} arcs from {path}")
    return network


def write_network(path, network: NetworkFile):
    with open(path, "w", encoding="utf-8") as outfile:
        outfile.write(emit_network(network))
