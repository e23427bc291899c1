from typing import Iterable, List

import numpy as np

from influence_games.core.influence_graph import (
    Coalition, InfluenceGraph, is_unconvincible
)


def _check_seed(graph: InfluenceGraph, seed: Iterable[int]) -> Coalition:
    seed = seed if isinstance(seed, Coalition) else Coalition(seed)
    if seed.mask >> graph.n:
        raise ValueError(
            f"Seed {sorted(seed)} contains nodes outside [0, {graph.n})"
        )
    return seed


def spread_trace(graph: InfluenceGraph, seed: Iterable[int]) -> List[Coalition]:
    """
    Activated sets F^1, F^2, ... of the iterative spread of influence.

    At every step all nodes whose incoming weight from the active set reaches
    their threshold are activated at once. Steps that activate nothing are
    not reported, so the list is strictly growing and ends at the fixpoint.
    """
    seed = _check_seed(graph, seed)
    out_arcs = graph.out_arcs()
    active = set(seed)
    # accumulated weight each inactive node receives from the active set
    received = [0] * graph.n
    frontier = sorted(active)
    trace = []
    while frontier:
        touched = set()
        for src in frontier:
            for dst, weight in out_arcs[src]:
                if dst not in active:
                    received[dst] += weight
                    touched.add(dst)
        newly = [
            i for i in sorted(touched)
            if not is_unconvincible(graph.thresholds[i]) and
            received[i] >= graph.thresholds[i]
        ]
        if not newly:
            break
        active.update(newly)
        trace.append(Coalition(active))
        frontier = newly
    return trace


def spread(graph: InfluenceGraph, seed: Iterable[int]) -> Coalition:
    """
    Spread of influence F(seed): the fixpoint of the activation rule
    """
    seed = _check_seed(graph, seed)
    trace = spread_trace(graph, seed)
    return trace[-1] if trace else seed


class BatchSpread:
    """
    Vectorised spread of influence for many seeds at once.

    Rows of the boolean member matrix are seeds, columns are nodes. Incoming
    weight is computed as a matrix product with the weight matrix, which is
    exact for integer weights in float64.
    """

    def __init__(self, graph: InfluenceGraph):
        self.n = graph.n
        self.weights = graph.weight_matrix()
        self.thresholds = graph.threshold_vector()

    def __call__(self, members: np.ndarray) -> np.ndarray:
        active = np.array(members, dtype=bool, copy=True)
        if active.ndim != 2 or active.shape[1] != self.n:
            raise ValueError(
                f"Member matrix must have shape (batch, {self.n}), "
                f"got {active.shape}"
            )
        # at most n steps can add a node
        for _ in range(self.n):
            received = active.astype(np.float64) @ self.weights
            newly = (received >= self.thresholds) & ~active
            if not newly.any():
                break
            active |= newly
        return active

    def sizes(self, members: np.ndarray, counted=None) -> np.ndarray:
        """
        Final spread size per seed, restricted to the counted nodes if a
        boolean node mask is given
        """
        active = self(members)
        if counted is not None:
            active &= counted
        return active.sum(axis=1)


def masks_to_members(masks: np.ndarray, n: int) -> np.ndarray:
    """
    Boolean (len(masks), n) matrix of the bits of every coalition index
    """
    masks = np.asarray(masks, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)
