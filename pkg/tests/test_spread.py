import numpy as np
import pytest
from conftest import random_game

from influence_games.core import (
    UNCONVINCIBLE, BatchSpread, Coalition, InfluenceGame, InfluenceGraph,
    is_winning, masks_to_members, spread, spread_trace
)


def test_spread_from_a(g1):
    assert spread_trace(g1, {0}) == [{0, 2}, {0, 2, 3}]
    assert spread(g1, {0}) == {0, 2, 3}


def test_spread_from_b(g1):
    # at the second step d receives 3 from a and 1 from b at once
    assert spread_trace(g1, {1}) == [{0, 1}, {0, 1, 2, 3}]
    assert spread(g1, {1}) == {0, 1, 2, 3}


def test_spread_of_empty_seed(g1):
    assert spread_trace(g1, set()) == []
    assert spread(g1, set()) == set()


def test_spread_rejects_unknown_nodes(g1):
    with pytest.raises(ValueError):
        spread(g1, {4})


def test_unconvincible_only_from_seed():
    graph = InfluenceGraph(3, ((0, 1, 5), (0, 2, 5)), (1, UNCONVINCIBLE, 1))
    assert spread(graph, {0}) == {0, 2}
    assert spread(graph, {0, 1}) == {0, 1, 2}


def test_is_winning(g1_game):
    assert is_winning(g1_game, {1})
    assert not is_winning(g1_game, {0})
    assert not is_winning(g1_game, set())
    assert is_winning(g1_game.with_quota(0), set())
    assert not is_winning(g1_game.with_quota(5), {0, 1, 2, 3})


def test_quota_range(g1):
    InfluenceGame(g1, 0)
    InfluenceGame(g1, 5)
    with pytest.raises(ValueError):
        InfluenceGame(g1, 6)
    with pytest.raises(ValueError):
        InfluenceGame(g1, -1)


def test_batch_spread_matches_scalar_spread(g1):
    members = masks_to_members(np.arange(16), 4)
    active = BatchSpread(g1)(members)
    for mask in range(16):
        expected = spread(g1, Coalition.from_mask(mask))
        assert set(np.flatnonzero(active[mask])) == expected


def test_masks_to_members():
    members = masks_to_members(np.array([0, 5, 6]), 3)
    assert members.tolist() == [
        [False, False, False], [True, False, True], [False, True, True]
    ]


def test_spread_properties_on_random_graphs():
    rng = np.random.default_rng(7)
    for _ in range(200):
        graph = random_game(rng, max_n=10).graph
        n = graph.n
        for _ in range(5):
            y_mask = int(rng.integers(0, 2**n))
            x_mask = y_mask & int(rng.integers(0, 2**n))
            x = Coalition.from_mask(x_mask)
            y = Coalition.from_mask(y_mask)
            fx, fy = spread(graph, x), spread(graph, y)
            # inflationary, monotone, idempotent
            assert x <= fx
            assert fx <= fy
            assert spread(graph, fx) == fx
            trace = spread_trace(graph, x)
            assert len(trace) <= n
            if trace:
                assert trace[-1] == fx
                assert all(a < b for a, b in zip(trace, trace[1:]))
            for node in graph.unconvincible_nodes():
                assert (node in fx) == (node in x)


def test_unconvincible_seed_can_be_left_out_of_the_quota():
    # 0 -> 1, node 2 is isolated and unconvincible
    graph = InfluenceGraph(3, ((0, 1, 1), ), (1, 1, UNCONVINCIBLE))
    counting = InfluenceGame(graph, 3)
    assert is_winning(counting, {0, 2})
    strict = InfluenceGame(graph, 3, count_unconvincible=False)
    assert not is_winning(strict, {0, 2})
    assert strict.with_quota(2).count_unconvincible is False
    members = np.array([[True, False, True], [False, False, True]])
    spreader = BatchSpread(graph)
    assert spreader.sizes(members).tolist() == [3, 1]
    assert spreader.sizes(members, strict.counted_nodes()).tolist() == [2, 0]
