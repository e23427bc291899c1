import dataclasses
import math
from fractions import Fraction

import numpy as np
import pytest

from influence_games.core import reverse_with_weight_swap
from influence_games.dataset import (
    DatasetIntegrityError, UnknownBuiltinError, check_case_study,
    list_builtins, load_builtin, load_case_study, load_metadata,
    role_threshold
)
from influence_games.measures import (
    banzhaf, classify_players, effort_centrality, enumerate_game,
    satisfaction, shapley_shubik
)

ISOLATED_MONKEYS = ("2", "6", "16", "18", "19", "20")


def test_list_builtins():
    assert dict(list_builtins()) == {
        "monkeys": ("C1", "C2", "C3", "C4"),
        "dining": ("C1", "C2", "C3"),
        "studentgov": ("fixed", )
    }


@pytest.mark.parametrize(
    "name, nodes, arcs, quota", [
        ("monkeys", 20, 62, 14),
        ("dining", 26, 52, 14),
        ("studentgov", 11, 41, 6),
    ]
)
def test_builtin_structure(name, nodes, arcs, quota):
    study = load_case_study(name)
    assert study.graph.n == nodes
    assert study.graph.m == arcs
    assert study.quota == quota
    for case in study.case_names:
        game = study.game(case)
        assert game.n == nodes and game.quota == quota


def test_unknown_builtin_and_case():
    with pytest.raises(UnknownBuiltinError):
        load_builtin("karate")
    with pytest.raises(UnknownBuiltinError):
        load_builtin("monkeys", "C5")
    with pytest.raises(UnknownBuiltinError, match="needs a case"):
        load_builtin("monkeys")
    # a single case is picked implicitly
    assert load_builtin("studentgov").quota == 6


def test_monkeys_threshold_cases():
    study = load_case_study("monkeys")
    three = study.graph.index_of("3")
    assert study.graph.in_degree()[three] == 13
    expected = {"C1": 1, "C4": 13}
    for case, threshold in expected.items():
        graph = study.game(case).graph
        assert graph.thresholds[three] == threshold
        for label in ISOLATED_MONKEYS:
            assert math.isinf(graph.thresholds[graph.index_of(label)])


def test_dining_is_reversed_preference_graph():
    study = load_case_study("dining")
    assert np.all(study.graph.in_degree() == 2)
    twice = reverse_with_weight_swap(reverse_with_weight_swap(study.graph))
    assert twice.arcs == study.graph.arcs
    assert study.game("C2").graph.thresholds == (2, ) * 26


def test_studentgov_role_thresholds():
    study = load_case_study("studentgov")
    in_degree = study.graph.in_degree()
    for node, label in enumerate(study.graph.labels):
        role = study.roles[label]
        assert study.graph.thresholds[node] == role_threshold(
            role, int(in_degree[node])
        )
    with pytest.raises(ValueError):
        role_threshold("president", 3)


def test_integrity_failures():
    study = load_case_study("studentgov")
    checks = load_metadata()["studentgov"]["checks"]
    with pytest.raises(DatasetIntegrityError, match="nodes"):
        check_case_study(study, {**checks, "nodes": 12})
    tampered = dataclasses.replace(
        study,
        graph=study.graph.with_thresholds((1, ) * study.graph.n)
    )
    with pytest.raises(DatasetIntegrityError, match="role rules"):
        check_case_study(tampered, checks)

    dining = load_case_study("dining")
    dining_checks = load_metadata()["dining"]["checks"]
    with pytest.raises(DatasetIntegrityError, match="reversed"):
        check_case_study(dining, dining_checks, preferences=dining.graph)


def test_monkeys_c1_exact_values():
    game = load_builtin("monkeys", "C1")
    report = enumerate_game(game)
    graph = game.graph
    isolated = {graph.index_of(label) for label in ISOLATED_MONKEYS}
    bz = banzhaf(report)
    ss = shapley_shubik(report)
    sat = satisfaction(report)
    ce = effort_centrality(report)
    flags = classify_players(game, report)
    for node in range(graph.n):
        if node in isolated:
            assert bz[node] == 0 and ss[node] == 0
            assert sat[node] == Fraction(1, 2)
            assert ce[node] == 0
            assert flags[node].dummy
        else:
            assert bz[node] == Fraction(1, 14)
            assert ss[node] == Fraction(1, 14)
            assert sat[node] == Fraction(2**19 + 2**6, 2**20)
            assert ce[node] == Fraction(13, 14)


def test_studentgov_advisor_vetoes_unanimity():
    game = load_builtin("studentgov").with_quota(11)
    report = enumerate_game(game)
    flags = classify_players(game, report)
    assert flags[game.graph.index_of("10")].vetoer


def test_isolated_monkeys_do_not_count_toward_quota():
    study = load_case_study("monkeys")
    assert not study.count_unconvincible
    for case in study.case_names:
        game = study.game(case)
        assert not game.count_unconvincible
        report = enumerate_game(game)
        flags = classify_players(game, report)
        sat = satisfaction(report)
        for label in ISOLATED_MONKEYS:
            node = game.graph.index_of(label)
            assert flags[node].dummy
            assert report.eta[node] == 0
            assert sat[node] == Fraction(1, 2)


def test_counted_isolated_seeds_make_monkeys_critical():
    game = dataclasses.replace(
        load_builtin("monkeys", "C2"), count_unconvincible=True
    )
    report = enumerate_game(game)
    assert report.eta[game.graph.index_of("2")] > 0
