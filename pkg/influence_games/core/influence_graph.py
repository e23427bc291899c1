import logging
import math
from collections.abc import Set
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

# threshold value of a node that no finite incoming weight can activate
UNCONVINCIBLE = math.inf

Arc = Tuple[int, int, int]


def is_unconvincible(threshold):
    return threshold == UNCONVINCIBLE


class Coalition(Set):
    """
    Immutable set of node indices stored as an integer bitmask.
    Compares equal to any other set with the same members, so frozensets can
    be used interchangeably in tests and calling code.
    """

    __slots__ = ("mask", )

    def __init__(self, members: Iterable[int] = ()):
        mask = 0
        for node in members:
            if node < 0:
                raise ValueError(f"Node index must be nonnegative, got {node}")
            mask |= 1 << int(node)
        self.mask = mask

    @classmethod
    def from_mask(cls, mask: int) -> "Coalition":
        if mask < 0:
            raise ValueError("Coalition mask must be nonnegative")
        coalition = cls()
        coalition.mask = int(mask)
        return coalition

    @classmethod
    def _from_iterable(cls, iterable):
        return cls(iterable)

    def __contains__(self, node) -> bool:
        return node >= 0 and (self.mask >> node) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        mask = self.mask
        node = 0
        while mask:
            if mask & 1:
                yield node
            mask >>= 1
            node += 1

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __hash__(self):
        return self._hash()

    def __repr__(self) -> str:
        return f"Coalition({sorted(self)})"

    def with_node(self, node: int) -> "Coalition":
        return Coalition.from_mask(self.mask | (1 << node))

    def without(self, node: int) -> "Coalition":
        return Coalition.from_mask(self.mask & ~(1 << node))


class SchemeKind(Enum):
    CONSTANT = "constant"
    MIN = "min"
    AVERAGE_INDEGREE = "average"
    MAJORITY_INDEGREE = "majority"
    MAX_INDEGREE = "max"


@dataclass(frozen=True)
class ThresholdScheme:
    """
    Rule assigning a threshold to every node of a graph
    """
    kind: SchemeKind
    k: int = 1

    def __post_init__(self):
        if self.kind == SchemeKind.CONSTANT and self.k < 1:
            raise ValueError(f"Constant threshold must be >= 1, got {self.k}")

    @classmethod
    def constant(cls, k: int) -> "ThresholdScheme":
        return cls(SchemeKind.CONSTANT, k)

    @classmethod
    def minimum(cls) -> "ThresholdScheme":
        return cls(SchemeKind.MIN)

    @classmethod
    def average_indegree(cls) -> "ThresholdScheme":
        return cls(SchemeKind.AVERAGE_INDEGREE)

    @classmethod
    def majority_indegree(cls) -> "ThresholdScheme":
        return cls(SchemeKind.MAJORITY_INDEGREE)

    @classmethod
    def max_indegree(cls) -> "ThresholdScheme":
        return cls(SchemeKind.MAX_INDEGREE)

    @classmethod
    def from_name(cls, name: str, k: int = 1) -> "ThresholdScheme":
        try:
            kind = SchemeKind(name)
        except ValueError:
            raise ValueError(
                "Threshold scheme must be one of " +
                ", ".join(kind.value for kind in SchemeKind) + f", got {name}"
            )
        return cls(kind, k)

    @property
    def degree_based(self) -> bool:
        return self.kind in (
            SchemeKind.AVERAGE_INDEGREE, SchemeKind.MAJORITY_INDEGREE,
            SchemeKind.MAX_INDEGREE
        )

    def threshold_for(self, in_degree: int):
        if self.kind == SchemeKind.CONSTANT:
            return self.k
        if self.kind == SchemeKind.MIN:
            return 1
        if in_degree == 0:
            return UNCONVINCIBLE
        if self.kind == SchemeKind.AVERAGE_INDEGREE:
            return (in_degree + 1) // 2
        if self.kind == SchemeKind.MAJORITY_INDEGREE:
            return in_degree // 2 + 1
        return in_degree


def _check_threshold(node, threshold):
    if is_unconvincible(threshold):
        return UNCONVINCIBLE
    if isinstance(threshold, float):
        if not threshold.is_integer():
            raise ValueError(
                f"Threshold of node {node} must be an integer, got {threshold}"
            )
        threshold = int(threshold)
    if threshold < 1:
        raise ValueError(
            f"Threshold of node {node} must be >= 1 or unconvincible, "
            f"got {threshold}"
        )
    return int(threshold)


@dataclass(frozen=True)
class InfluenceGraph:
    """
    Directed weighted graph with an activation threshold per node.

    Nodes are the dense range [0, n). Arcs are stored sorted by (src, dst),
    weights and finite thresholds are integers >= 1.
    """
    n: int
    arcs: Tuple[Arc, ...] = ()
    thresholds: Tuple = ()
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"Node count must be nonnegative, got {self.n}")
        thresholds = self.thresholds if len(self.thresholds) else (1, ) * self.n
        if len(thresholds) != self.n:
            raise ValueError(
                f"Expected {self.n} thresholds, got {len(thresholds)}"
            )
        labels = self.labels if len(self.labels) else tuple(
            str(i) for i in range(self.n)
        )
        if len(labels) != self.n:
            raise ValueError(f"Expected {self.n} labels, got {len(labels)}")
        if len(set(labels)) != self.n:
            raise ValueError("Node labels must be unique")

        seen = set()
        for src, dst, weight in self.arcs:
            if not (0 <= src < self.n and 0 <= dst < self.n):
                raise ValueError(f"Arc ({src}, {dst}) references unknown node")
            if src == dst:
                raise ValueError(f"Self-loop at node {src}")
            if (src, dst) in seen:
                raise ValueError(f"Duplicate arc ({src}, {dst})")
            if weight < 1 or int(weight) != weight:
                raise ValueError(
                    f"Weight of arc ({src}, {dst}) must be an integer >= 1, "
                    f"got {weight}"
                )
            seen.add((src, dst))

        object.__setattr__(
            self, "arcs",
            tuple(sorted((int(s), int(d), int(w)) for s, d, w in self.arcs))
        )
        object.__setattr__(
            self, "thresholds",
            tuple(_check_threshold(i, t) for i, t in enumerate(thresholds))
        )
        object.__setattr__(self, "labels", tuple(str(lab) for lab in labels))

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_arcs(
        cls,
        n: int,
        arcs: Iterable[Arc],
        thresholds: Optional[Sequence] = None,
        labels: Optional[Sequence[str]] = None
    ) -> "InfluenceGraph":
        """
        Build a graph, merging parallel arcs by summing their weights
        """
        merged: Dict[Tuple[int, int], int] = {}
        for src, dst, weight in arcs:
            if weight < 1:
                raise ValueError(
                    f"Weight of arc ({src}, {dst}) must be >= 1, got {weight}"
                )
            merged[(src, dst)] = merged.get((src, dst), 0) + weight
        return cls(
            n,
            tuple((s, d, w) for (s, d), w in merged.items()),
            tuple(thresholds) if thresholds is not None else (),
            tuple(labels) if labels is not None else (),
        )

    @classmethod
    def from_undirected(
        cls,
        n: int,
        edges: Iterable[Tuple[int, int]],
        weights=1,
        thresholds: Optional[Sequence] = None,
        labels: Optional[Sequence[str]] = None
    ) -> "InfluenceGraph":
        """
        Every unordered pair {i, j} yields the arcs (i, j) and (j, i) with the
        same weight. weights is either one integer for all pairs or a sequence
        aligned with edges.
        """
        edges = list(edges)
        if isinstance(weights, int):
            weights = [weights] * len(edges)
        weights = list(weights)
        if len(weights) != len(edges):
            raise ValueError(
                f"Expected {len(edges)} weights, got {len(weights)}"
            )
        pairs = set()
        arcs = []
        for (a, b), weight in zip(edges, weights):
            if a == b:
                raise ValueError(f"Self-loop pair {{{a}, {b}}}")
            key = (min(a, b), max(a, b))
            if key in pairs:
                raise ValueError(f"Duplicate pair {{{a}, {b}}}")
            pairs.add(key)
            arcs.append((a, b, weight))
            arcs.append((b, a, weight))
        return cls(
            n,
            tuple(arcs),
            tuple(thresholds) if thresholds is not None else (),
            tuple(labels) if labels is not None else (),
        )

    def with_thresholds(self, thresholds: Sequence) -> "InfluenceGraph":
        return InfluenceGraph(self.n, self.arcs, tuple(thresholds), self.labels)

    # ------------------------------------------------------------------
    # Accessors
    # ------------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.arcs)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise ValueError(f"Unknown node label {label!r}")

    def label_of(self, node: int) -> str:
        return self.labels[node]

    def in_degree(self) -> np.ndarray:
        degree = np.zeros(self.n, dtype=np.int64)
        for _, dst, _ in self.arcs:
            degree[dst] += 1
        return degree

    def out_degree(self) -> np.ndarray:
        degree = np.zeros(self.n, dtype=np.int64)
        for src, _, _ in self.arcs:
            degree[src] += 1
        return degree

    def out_neighbors(self):
        """
        Adjacency lists of successors, sorted by node index
        """
        adjacency = [[] for _ in range(self.n)]
        for src, dst, _ in self.arcs:
            adjacency[src].append(dst)
        return adjacency

    def out_arcs(self):
        """
        Per node list of (dst, weight) of outgoing arcs
        """
        outgoing = [[] for _ in range(self.n)]
        for src, dst, weight in self.arcs:
            outgoing[src].append((dst, weight))
        return outgoing

    def in_arcs(self):
        """
        Per node list of (src, weight) of incoming arcs
        """
        incoming = [[] for _ in range(self.n)]
        for src, dst, weight in self.arcs:
            incoming[dst].append((src, weight))
        return incoming

    def weight_matrix(self) -> np.ndarray:
        """
        Float matrix W with W[src, dst] = weight, so that for a batch of
        activation rows A the incoming weight per node is A @ W
        """
        matrix = np.zeros((self.n, self.n), dtype=np.float64)
        for src, dst, weight in self.arcs:
            matrix[src, dst] = weight
        return matrix

    def threshold_vector(self) -> np.ndarray:
        """
        Thresholds as float array, np.inf for unconvincible nodes
        """
        return np.array(self.thresholds, dtype=np.float64)

    def unconvincible_nodes(self) -> Tuple[int, ...]:
        return tuple(
            i for i, t in enumerate(self.thresholds) if is_unconvincible(t)
        )

    def total_finite_threshold(self) -> int:
        return sum(t for t in self.thresholds if not is_unconvincible(t))

    def is_symmetric(self) -> bool:
        """
        True if every arc (i, j) has a reverse arc (j, i), weights aside
        """
        pairs = {(src, dst) for src, dst, _ in self.arcs}
        return all((dst, src) in pairs for src, dst in pairs)

    def to_networkx(self):
        import networkx as nx

        graph = nx.DiGraph()
        for i in range(self.n):
            graph.add_node(
                i, label=self.labels[i], threshold=self.thresholds[i]
            )
        for src, dst, weight in self.arcs:
            graph.add_edge(src, dst, weight=weight)
        return graph


def reverse_with_weight_swap(graph: InfluenceGraph) -> InfluenceGraph:
    """
    Turn a preference graph into an influence graph: (i, j, 1) becomes
    (j, i, 2) and (i, j, 2) becomes (j, i, 1)
    """
    arcs = []
    for src, dst, weight in graph.arcs:
        if weight not in (1, 2):
            raise ValueError(
                f"Arc ({src}, {dst}) has weight {weight}, only 1 and 2 can "
                "be swapped"
            )
        arcs.append((dst, src, 3 - weight))
    return InfluenceGraph.from_arcs(
        graph.n, arcs, graph.thresholds, graph.labels
    )


def apply_threshold_scheme(
    graph: InfluenceGraph, scheme: ThresholdScheme
) -> InfluenceGraph:
    in_degree = graph.in_degree()
    thresholds = [scheme.threshold_for(int(deg)) for deg in in_degree]
    return graph.with_thresholds(thresholds)


def mark_isolated_unconvincible(graph: InfluenceGraph) -> InfluenceGraph:
    """
    Nodes without any incident arc can never be convinced
    """
    isolated = (graph.in_degree() == 0) & (graph.out_degree() == 0)
    if not isolated.any():
        return graph
    logger.debug(f"Unconvincible isolated nodes: {np.flatnonzero(isolated)}")
    thresholds = [
        UNCONVINCIBLE if isolated[i] else t
        for i, t in enumerate(graph.thresholds)
    ]
    return graph.with_thresholds(thresholds)


def threshold_mass(graph: InfluenceGraph, coalition: Iterable[int]):
    """
    Sum of the thresholds of the members, inf if one of them is unconvincible
    """
    mass = 0
    for node in coalition:
        if not 0 <= node < graph.n:
            raise ValueError(f"Node {node} is not in the graph")
        threshold = graph.thresholds[node]
        if is_unconvincible(threshold):
            return UNCONVINCIBLE
        mass += threshold
    return mass
