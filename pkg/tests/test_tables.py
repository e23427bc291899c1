import numpy as np
import pandas as pd
import pytest

from influence_games.core import (
    BatchSpread, InfluenceGraph, is_winning, spread
)
from influence_games.dataset import load_builtin, load_case_study
from influence_games.measures import enumerate_game
from influence_games.tables import (
    CentralityTable, UnknownMeasureError, classical_column, compute_table,
    golden_diff, load_golden, parse_measures, render_diff, reproduce_table,
    format_half_even
)


def test_format_half_even():
    assert format_half_even(0.125, 2) == "0.12"
    assert format_half_even(0.375, 2) == "0.38"
    assert format_half_even(2.5, 0) == "2"
    assert format_half_even(3.5, 0) == "4"
    assert format_half_even(-0.0001, 3) == "0.000"
    assert format_half_even(1 / 14, 4) == "0.0714"


def test_parse_measures():
    assert parse_measures("bz, ss,din") == ["bz", "ss", "din"]
    with pytest.raises(UnknownMeasureError):
        parse_measures(" , ")
    with pytest.raises(UnknownMeasureError, match="must be one of"):
        parse_measures("bz,pagerank")


def test_centrality_table_rendering():
    table = CentralityTable(["a", "bb"], default_precision=2)
    table.add_column("x", [0.125, 1])
    table.add_column("flag", [1, 0], precision=0)
    assert table.columns == ["x", "flag"]
    assert table.to_csv() == "node,x,flag\na,0.12,1\nbb,1.00,0\n"
    assert table.to_markdown() == (
        "| node |    x | flag |\n"
        "|-----:|-----:|-----:|\n"
        "|    a | 0.12 |    1 |\n"
        "|   bb | 1.00 |    0 |\n"
    )
    with pytest.raises(ValueError):
        table.add_column("short", [1])
    with pytest.raises(ValueError):
        table.add_column("bad", [np.inf, 0])
    with pytest.raises(ValueError):
        table.render("html")


def test_compute_table_on_example(g1_game):
    table = compute_table(
        g1_game, ["bz", "din", "effort", "vetoer"], precision=3
    )
    assert table.columns == ["bz", "din", "effort", "vetoer"]
    assert table.to_csv().splitlines() == [
        "node,bz,din,effort,vetoer",
        "a,0.000,0.333,0.714,0",
        "b,1.000,0.000,0.857,1",
        "c,0.000,0.333,0.714,0",
        "d,0.000,1.000,0.286,0",
    ]


def test_sampled_table_rejects_exact_only_measures(g1_game):
    with pytest.raises(UnknownMeasureError, match="cannot be sampled"):
        compute_table(g1_game, ["effort"], samples=100)
    table = compute_table(g1_game, ["bz", "ss", "din"], samples=200, seed=1)
    assert np.allclose(table.column("bz"), [0, 1, 0, 0])


def test_golden_tables_have_expected_shape():
    assert load_golden(1).shape == (20, 19)
    assert load_golden(2).shape == (26, 16)
    assert load_golden(3).shape == (11, 8)
    with pytest.raises(ValueError):
        load_golden(4)


def test_table2_indegree_is_constant():
    din = classical_column(load_builtin("dining", "C1"), "din")
    assert np.allclose(din, 2 / 25)


def test_reproduce_table3():
    table = reproduce_table(3)
    golden = load_golden(3)
    assert table.n == 11
    assert table.columns == list(golden.columns)
    diff = golden_diff(table, golden)
    assert list(diff.columns) == [
        "node", "column", "computed", "published", "deviation", "tolerance",
        "within"
    ]
    assert len(diff) == 11 * 8
    checked = diff[diff["column"].isin(
        ["din", "dout", "closeness", "bz", "ss", "satisfaction"]
    )]
    assert checked["within"].all()
    betweenness = diff[diff["column"] == "betweenness"].set_index("node")
    for node in ("1", "2", "3", "4", "5", "10"):
        assert betweenness.loc[node, "within"]
    report = render_diff(diff)
    assert "# bz: 11/11 within tolerance" in report


def test_reproduce_is_independent_of_partitioning():
    expected = reproduce_table(3).to_csv()
    for partitions, workers in [(2, 1), (8, 4)]:
        table = reproduce_table(
            3, partitions=partitions, workers=workers, chunk_bits=4
        )
        assert table.to_csv() == expected


def test_golden_diff_flags_deviations():
    golden = pd.DataFrame({"x": ["0.50", "0.1"]},
                          index=pd.Index(["a", "b"], name="node"))
    table = CentralityTable(["a", "b"])
    table.add_column("x", [0.504, 0.2])
    diff = golden_diff(table, golden)
    assert diff["within"].tolist() == [True, False]
    assert np.allclose(diff["tolerance"], [0.005, 0.05])


def within(diff, column):
    return diff[diff["column"] == column].set_index("node")["within"]


def test_reproduce_table1():
    table = reproduce_table(1, chunk_bits=18)
    diff = golden_diff(table, load_golden(1))
    for column in ("din", "closeness", "betweenness"):
        assert within(diff, column).all(), column
    for column in ("bz_C1", "bz_C3", "bz_C4", "ss_C1", "ss_C2", "ss_C3"):
        assert within(diff, column).all(), column
    for column in ("bz_C2", "ss_C4"):
        assert within(diff, column).sum() >= 18, column
    for label in ("2", "6", "16", "18", "19", "20"):
        for case in ("C1", "C2", "C3", "C4"):
            for measure in ("bz", "ss", "satisfaction"):
                assert within(diff, f"{measure}_{case}")[label]


def test_table2_classical_columns():
    study = load_case_study("dining")
    game = study.game("C1")
    columns = ["din", "dout", "closeness", "betweenness"]
    golden = load_golden(2)[columns]
    table = CentralityTable(study.graph.labels)
    for column in columns:
        table.add_column(column, classical_column(game, column))
    diff = golden_diff(table, golden)
    assert within(diff, "din").all()
    # girl 17 sends four arcs, 4/25 = 0.16
    dout = within(diff, "dout")
    assert not dout["17"] and dout.drop("17").all()
    closeness = within(diff, "closeness")
    assert closeness.drop(["6", "9", "13", "17"]).all()
    # sinks score only as targets: 9 girls reach girl 7, 16 reach girl 26
    betweenness = within(diff, "betweenness")
    assert betweenness["7"] and betweenness["26"]


def test_dining_c3_ignores_arc_weights():
    # every girl receives weights 1 and 2, a threshold of 3 needs both
    game = load_builtin("dining", "C3")
    graph = game.graph
    swapped = InfluenceGraph(
        graph.n, tuple((s, d, 3 - w) for s, d, w in graph.arcs),
        graph.thresholds, graph.labels
    )
    members = np.random.default_rng(3).random((4000, graph.n)) < 0.4
    assert np.array_equal(
        BatchSpread(graph)(members), BatchSpread(swapped)(members)
    )


def test_dining_single_girl_19_cannot_win_c1():
    game = load_builtin("dining", "C1")
    girl = game.graph.index_of("19")
    # her closeness matches the published 25/420, she reaches 10 girls
    assert np.isclose(classical_column(game, "closeness")[girl], 25 / 420)
    assert len(spread(game.graph, [girl])) == 11
    assert not is_winning(game, [girl])
    # a published effort of 0.96 = 25/26 would need her to win alone
    assert load_golden(2).loc["19", "effort_C1"] == "0.96"


@pytest.mark.slow
def test_dining_c3_full_enumeration():
    game = load_builtin("dining", "C3")
    table = compute_table(game, ["bz", "ss", "satisfaction"], partitions=4)
    assert np.isclose(table.column("bz").sum(), 1)
    assert np.isclose(table.column("ss").sum(), 1)
    assert np.all(table.column("satisfaction") >= 0.5)


def test_table3_effort_is_normalised_by_player_count():
    game = load_builtin("studentgov")
    report = enumerate_game(game)
    assert report.total_mass == 24
    golden = load_golden(3)["effort"]
    for node, label in enumerate(game.graph.labels):
        scaled = (game.n - report.min_win_mass[node]) / game.n
        assert format_half_even(scaled, 2) == golden[label]
