"""
Degree, closeness and betweenness centrality on the arc structure of an
influence graph. Weights and thresholds are ignored: distances are hop
counts along outgoing arcs.
"""
from collections import deque
from typing import List, Optional

import numpy as np

from influence_games.core.influence_graph import InfluenceGraph


def _require_nodes(graph: InfluenceGraph, minimum: int, measure: str):
    if graph.n < minimum:
        raise ValueError(
            f"{measure} centrality needs at least {minimum} nodes, "
            f"graph has {graph.n}"
        )


def degree_centrality(graph: InfluenceGraph, direction="in") -> np.ndarray:
    """
    deg(i) / (n - 1) with direction "in" or "out"
    """
    _require_nodes(graph, 2, "Degree")
    if direction == "in":
        degree = graph.in_degree()
    elif direction == "out":
        degree = graph.out_degree()
    else:
        raise ValueError(f"Direction must be one of in, out, got {direction}")
    return degree / (graph.n - 1)


def distance_matrix(graph: InfluenceGraph) -> np.ndarray:
    """
    Hop distances D[i, j] from i to j, n where j is unreachable from i
    """
    n = graph.n
    adjacency = graph.out_neighbors()
    distances = np.full((n, n), n, dtype=np.int64)
    for source in range(n):
        distances[source, source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in adjacency[v]:
                if distances[source, w] == n and w != source:
                    distances[source, w] = distances[source, v] + 1
                    queue.append(w)
    return distances


def closeness_centrality(graph: InfluenceGraph) -> np.ndarray:
    """
    (n - 1) / sum_j D[i, j]
    """
    _require_nodes(graph, 2, "Closeness")
    # the diagonal is zero so the row sum runs over j != i
    return (graph.n - 1) / distance_matrix(graph).sum(axis=1)


def _shortest_path_dag(adjacency, source, n):
    distance = [-1] * n
    sigma = [0] * n
    predecessors: List[List[int]] = [[] for _ in range(n)]
    distance[source] = 0
    sigma[source] = 1
    order = []
    queue = deque([source])
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in adjacency[v]:
            if distance[w] < 0:
                distance[w] = distance[v] + 1
                queue.append(w)
            if distance[w] == distance[v] + 1:
                sigma[w] += sigma[v]
                predecessors[w].append(v)
    return order, sigma, predecessors


def betweenness_centrality(
    graph: InfluenceGraph, endpoints: Optional[bool] = None
) -> np.ndarray:
    """
    Sum over ordered pairs (j, k) with j, k != i of the share of shortest
    j -> k paths passing through i, divided by (n - 1)(n - 2). Pairs without
    a path contribute 0.

    With endpoints, i also scores 1 for every node it reaches and for every
    node that reaches it. By default endpoints are counted on directed
    graphs and not on symmetric ones.
    """
    _require_nodes(graph, 3, "Betweenness")
    if endpoints is None:
        endpoints = not graph.is_symmetric()
    n = graph.n
    adjacency = graph.out_neighbors()
    betweenness = np.zeros(n, dtype=np.float64)
    for source in range(n):
        order, sigma, predecessors = _shortest_path_dag(adjacency, source, n)
        delta = [0.0] * n
        # reverse BFS order visits every node after its successors
        for w in reversed(order):
            for v in predecessors[w]:
                delta[v] += sigma[v] / sigma[w] * (1 + delta[w])
            if w != source:
                betweenness[w] += delta[w] + (1 if endpoints else 0)
        if endpoints:
            betweenness[source] += len(order) - 1
    return betweenness / ((n - 1) * (n - 2))
