"""
Centrality tables: computing named measure columns for a game, formatting
them as CSV or markdown, and reproducing the three case-study tables with a
per-cell comparison against the stored published values.
"""
import io
import logging
import os
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from influence_games.core.game import InfluenceGame
from influence_games.dataset import DATA_DIR, load_case_study
from influence_games.measures import classical, power_indices, sampling
from influence_games.measures.exact import enumerate_game

logger = logging.getLogger(__name__)

CLASSICAL_MEASURES = ("din", "dout", "closeness", "betweenness")
GAME_MEASURES = ("bz", "ss", "effort", "satisfaction", "width")
FLAG_MEASURES = ("dummy", "vetoer", "dictator")
MEASURES = CLASSICAL_MEASURES + GAME_MEASURES + FLAG_MEASURES
SAMPLED_MEASURES = ("bz", "ss", "satisfaction")

# case study and column layout of every reproducible table
TABLES = {
    1: {
        "builtin": "monkeys",
        "classical": ("din", "closeness", "betweenness"),
        "measures": ("bz", "ss", "effort", "satisfaction")
    },
    2: {
        "builtin": "dining",
        "classical": ("din", "dout", "closeness", "betweenness"),
        "measures": ("bz", "ss", "effort", "satisfaction")
    },
    3: {
        "builtin": "studentgov",
        "classical": ("din", "dout", "closeness", "betweenness"),
        "measures": ("bz", "ss", "effort", "satisfaction")
    }
}


class UnknownMeasureError(ValueError):
    pass


def parse_measures(text: str) -> List[str]:
    measures = [m.strip() for m in text.split(",") if m.strip()]
    if not measures:
        raise UnknownMeasureError("The measure list is empty")
    for measure in measures:
        if measure not in MEASURES:
            raise UnknownMeasureError(
                "Measure must be one of " + ", ".join(MEASURES) +
                f", got {measure}"
            )
    return measures


def format_half_even(value: float, precision: int) -> str:
    quantum = Decimal(1).scaleb(-precision)
    rounded = Decimal(float(value)).quantize(quantum, rounding=ROUND_HALF_EVEN)
    if rounded.is_zero():
        # no "-0.00"
        rounded = abs(rounded)
    return f"{rounded:.{precision}f}"


class CentralityTable:
    """
    Measure columns over the nodes of one network. Rows are in node index
    order and keyed by node label.
    """

    def __init__(self, labels: Sequence[str], default_precision=3):
        self.frame = pd.DataFrame(index=pd.Index(list(labels), name="node"))
        self.precision: Dict[str, int] = {}
        self.default_precision = default_precision

    @property
    def n(self) -> int:
        return len(self.frame.index)

    @property
    def columns(self) -> List[str]:
        return list(self.frame.columns)

    def add_column(self, name: str, values, precision: Optional[int] = None):
        values = np.asarray([float(v) for v in values], dtype=np.float64)
        if len(values) != self.n:
            raise ValueError(
                f"Column {name} has {len(values)} values for {self.n} nodes"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError(f"Column {name} contains non-finite values")
        self.frame[name] = values
        self.precision[name] = (
            self.default_precision if precision is None else precision
        )

    def column(self, name: str) -> np.ndarray:
        return self.frame[name].to_numpy()

    def formatted(self) -> pd.DataFrame:
        text = pd.DataFrame(index=self.frame.index)
        for name in self.frame.columns:
            text[name] = [
                format_half_even(v, self.precision[name])
                for v in self.frame[name]
            ]
        return text.reset_index()

    def to_csv(self) -> str:
        buffer = io.StringIO()
        self.formatted().to_csv(buffer, index=False)
        return buffer.getvalue()

    def to_markdown(self) -> str:
        text = self.formatted()
        header = list(text.columns)
        rows = text.values.tolist()
        widths = [
            max(len(str(cell)) for cell in [name] + [r[k] for r in rows])
            for k, name in enumerate(header)
        ]

        def line(cells):
            return "| " + " | ".join(
                str(cell).rjust(width) for cell, width in zip(cells, widths)
            ) + " |"

        out = [line(header)]
        out.append("|" + "|".join("-" * (w + 1) + ":" for w in widths) + "|")
        out.extend(line(row) for row in rows)
        return "\n".join(out) + "\n"

    def render(self, fmt="csv") -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "md":
            return self.to_markdown()
        raise ValueError(f"Format must be one of csv, md, got {fmt}")


def classical_column(game: InfluenceGame, measure: str) -> np.ndarray:
    if measure == "din":
        return classical.degree_centrality(game.graph, "in")
    if measure == "dout":
        return classical.degree_centrality(game.graph, "out")
    if measure == "closeness":
        return classical.closeness_centrality(game.graph)
    if measure == "betweenness":
        return classical.betweenness_centrality(game.graph)
    raise UnknownMeasureError(f"{measure} is not a classical measure")


def exact_columns(game: InfluenceGame, measures: Iterable[str],
                  **engine_kwargs) -> Dict[str, list]:
    """
    Game measures from one enumeration sweep
    """
    report = enumerate_game(game, **engine_kwargs)
    columns = {}
    flags = None
    for measure in measures:
        if measure == "bz":
            columns[measure] = power_indices.banzhaf(report)
        elif measure == "ss":
            columns[measure] = power_indices.shapley_shubik(report)
        elif measure == "effort":
            columns[measure] = power_indices.effort_centrality(report)
        elif measure == "satisfaction":
            columns[measure] = power_indices.satisfaction(report)
        elif measure == "width":
            columns[measure] = power_indices.width_centrality(report)
        elif measure in FLAG_MEASURES:
            if flags is None:
                flags = power_indices.classify_players(game, report)
            columns[measure] = [int(getattr(f, measure)) for f in flags]
        else:
            raise UnknownMeasureError(f"{measure} is not a game measure")
    return columns


def sampled_columns(
    game: InfluenceGame,
    measures: Iterable[str],
    samples: int,
    seed: int,
    batch_size=sampling.DEFAULT_BATCH_SIZE,
    workers=1,
    progress=False,
    **kwargs
) -> Dict[str, np.ndarray]:
    options = dict(batch_size=batch_size, workers=workers, progress=progress)
    columns = {}
    for measure in measures:
        if measure == "bz":
            raw = sampling.estimate_banzhaf_raw(
                game, samples, seed, **options
            ).estimates
            total = raw.sum()
            columns[measure] = raw / total if total > 0 else np.zeros_like(raw)
        elif measure == "ss":
            columns[measure] = sampling.estimate_shapley(
                game, samples, seed, **options
            ).estimates
        elif measure == "satisfaction":
            columns[measure] = sampling.estimate_satisfaction(
                game, samples, seed, **options
            ).estimates
        else:
            raise UnknownMeasureError(
                f"Measure {measure} cannot be sampled, choose from " +
                ", ".join(SAMPLED_MEASURES)
            )
    return columns


def compute_table(
    game: InfluenceGame,
    measures: Sequence[str],
    precision=4,
    samples: Optional[int] = None,
    seed=0,
    **engine_kwargs
) -> CentralityTable:
    """
    Table of the requested measures, in the requested order. Game measures
    are exact unless a sample count is given.
    """
    game_measures = [m for m in measures if m not in CLASSICAL_MEASURES]
    if samples is None:
        values = exact_columns(game, game_measures, **engine_kwargs) \
            if game_measures else {}
    else:
        values = sampled_columns(
            game, game_measures, samples, seed, **engine_kwargs
        )
    table = CentralityTable(game.graph.labels, default_precision=precision)
    for measure in measures:
        if measure in CLASSICAL_MEASURES:
            table.add_column(measure, classical_column(game, measure))
        elif measure in FLAG_MEASURES:
            table.add_column(measure, values[measure], precision=0)
        else:
            table.add_column(measure, values[measure])
    return table


# ----------------------------------------------------------------------
# Published tables
# ----------------------------------------------------------------------


def load_golden(number: int) -> pd.DataFrame:
    """
    Published values of a table as strings, keeping their printed precision
    """
    if number not in TABLES:
        raise ValueError(f"Table must be one of 1, 2, 3, got {number}")
    path = os.path.join(DATA_DIR, "golden", f"table{number}.csv")
    return pd.read_csv(path, dtype=str).set_index("node")


def _decimals(text: str) -> int:
    return len(text.split(".", 1)[1]) if "." in text else 0


def golden_precision(golden: pd.DataFrame) -> Dict[str, int]:
    return {
        name: max(_decimals(v) for v in golden[name])
        for name in golden.columns
    }


def reproduce_table(number: int, **engine_kwargs) -> CentralityTable:
    """
    Recompute every column of a published table: the classical measures
    once, then each game measure per threshold case with the stored quota
    """
    layout = TABLES.get(number)
    if layout is None:
        raise ValueError(f"Table must be one of 1, 2, 3, got {number}")
    study = load_case_study(layout["builtin"])
    precision = golden_precision(load_golden(number))
    table = CentralityTable(study.graph.labels)
    logger.info(
        f"Reproducing table {number}: {layout['builtin']}, quota {study.quota}"
    )

    cases = study.case_names
    first_game = study.game(cases[0])
    for measure in layout["classical"]:
        table.add_column(
            measure, classical_column(first_game, measure), precision[measure]
        )

    per_case = {}
    for case in cases:
        per_case[case] = exact_columns(
            study.game(case), layout["measures"], **engine_kwargs
        )
    for measure in layout["measures"]:
        for case in cases:
            name = measure if len(cases) == 1 else f"{measure}_{case}"
            table.add_column(name, per_case[case][measure], precision[name])
    return table


def golden_diff(table: CentralityTable, golden: pd.DataFrame) -> pd.DataFrame:
    """
    One row per published cell with the absolute deviation of the computed
    value and the tolerance of half a unit in the last printed digit
    """
    rows = []
    for name in golden.columns:
        computed = table.column(name)
        for label, printed in zip(golden.index, golden[name]):
            value = computed[table.frame.index.get_loc(str(label))]
            published = float(printed)
            tolerance = 0.5 * 10**(-_decimals(printed))
            deviation = abs(value - published)
            rows.append(
                {
                    "node": str(label),
                    "column": name,
                    "computed": value,
                    "published": printed,
                    "deviation": deviation,
                    "tolerance": tolerance,
                    # float noise on exact half-ulp ties
                    "within": bool(deviation <= tolerance + 1e-12)
                }
            )
    return pd.DataFrame(rows)


def diff_summary(diff: pd.DataFrame) -> List[str]:
    lines = []
    for name, group in diff.groupby("column", sort=False):
        lines.append(
            f"# {name}: {int(group['within'].sum())}/{len(group)} within "
            f"tolerance, max deviation {group['deviation'].max():.6f}"
        )
    return lines


def render_diff(diff: pd.DataFrame) -> str:
    buffer = io.StringIO()
    out = diff.copy()
    out["computed"] = [f"{v:.6f}" for v in out["computed"]]
    out["deviation"] = [f"{v:.6f}" for v in out["deviation"]]
    out["tolerance"] = [f"{v:g}" for v in out["tolerance"]]
    out["within"] = out["within"].astype(int)
    out.to_csv(buffer, index=False)
    return buffer.getvalue() + "\n".join(diff_summary(diff)) + "\n"
