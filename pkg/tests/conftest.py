import numpy as np
import pytest

from influence_games.core import (
    UNCONVINCIBLE, InfluenceGame, InfluenceGraph, is_winning, threshold_mass
)


def example_graph() -> InfluenceGraph:
    # nodes a, b, c, d with thresholds 1, 1, 1, 4
    a, b, c, d = range(4)
    return InfluenceGraph.from_arcs(
        4, [(a, c, 2), (a, d, 3), (b, a, 1), (b, d, 1), (c, d, 1)],
        thresholds=(1, 1, 1, 4),
        labels=("a", "b", "c", "d")
    )


@pytest.fixture
def g1():
    return example_graph()


@pytest.fixture
def g1_game():
    return InfluenceGame(example_graph(), 4)


def random_game(rng, min_n=2, max_n=8, arc_prob=0.35, inf_prob=0.1):
    n = int(rng.integers(min_n, max_n + 1))
    arcs = [
        (u, v, int(rng.integers(1, 4)))
        for u in range(n) for v in range(n)
        if u != v and rng.random() < arc_prob
    ]
    thresholds = [
        UNCONVINCIBLE if rng.random() < inf_prob else int(rng.integers(1, 5))
        for _ in range(n)
    ]
    quota = int(rng.integers(0, n + 2))
    return InfluenceGame(InfluenceGraph(n, tuple(arcs), tuple(thresholds)), quota)


def symmetric_game(rng, n=6, arc_prob=0.4):
    """
    Random game invariant under swapping nodes 0 and 1
    """

    def swap(node):
        return {0: 1, 1: 0}.get(node, node)

    arcs = {}
    for u in range(n):
        for v in range(n):
            if u == v or (u, v) in arcs:
                continue
            if rng.random() < arc_prob:
                weight = int(rng.integers(1, 4))
                arcs[(u, v)] = weight
                arcs[(swap(u), swap(v))] = weight
            else:
                # mark the orbit as decided
                arcs[(u, v)] = None
                arcs[(swap(u), swap(v))] = None
    thresholds = [int(rng.integers(1, 4)) for _ in range(n)]
    thresholds[1] = thresholds[0]
    graph = InfluenceGraph(
        n, tuple((u, v, w) for (u, v), w in arcs.items() if w is not None),
        tuple(thresholds)
    )
    return InfluenceGame(graph, int(rng.integers(1, n + 1)))


def brute_force(game: InfluenceGame) -> dict:
    """
    Per player tallies recomputed coalition by coalition with the scalar
    spread, independent of the vectorised sweep
    """
    n = game.n
    members = [
        [i for i in range(n) if (mask >> i) & 1] for mask in range(2**n)
    ]
    win = [is_winning(game, m) for m in members]
    result = {
        "crit_by_size": np.zeros((n, n + 1), dtype=np.int64),
        "win_containing": np.zeros(n, dtype=np.int64),
        "lose_excluding": np.zeros(n, dtype=np.int64),
        "min_win_mass": np.full(n, np.inf),
        "min_win_card": np.full(n, np.inf),
        "total_winning": sum(win)
    }
    for mask, coalition in enumerate(members):
        for i in range(n):
            if (mask >> i) & 1:
                if win[mask]:
                    result["win_containing"][i] += 1
                    mass = threshold_mass(game.graph, coalition)
                    result["min_win_mass"][i] = min(
                        result["min_win_mass"][i], mass
                    )
                    result["min_win_card"][i] = min(
                        result["min_win_card"][i], len(coalition)
                    )
                    if not win[mask ^ (1 << i)]:
                        result["crit_by_size"][i, len(coalition)] += 1
            elif not win[mask]:
                result["lose_excluding"][i] += 1
    return result
