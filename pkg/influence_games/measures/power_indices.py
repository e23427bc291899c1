"""
Centrality measures derived from an exact GameReport.

All functions return one exact Fraction per player; callers convert to float
for display.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import List

import numpy as np
from scipy.special import factorial

from influence_games.core.game import InfluenceGame, is_winning
from influence_games.measures.exact import GameReport


def _require_complete(report: GameReport):
    if not report.complete:
        raise ValueError(
            f"Report covers {report.coalitions} of {2**report.n} coalitions"
        )


def banzhaf(report: GameReport) -> List[Fraction]:
    """
    Bz(i) = eta(i) / sum_j eta(j), all zero when no player is ever critical
    """
    _require_complete(report)
    eta = [int(e) for e in report.eta]
    total = sum(eta)
    if total == 0:
        return [Fraction(0)] * report.n
    return [Fraction(e, total) for e in eta]


def raw_banzhaf(report: GameReport) -> List[Fraction]:
    """
    Probability that i is critical for a uniform coalition of the others,
    eta(i) / 2^(n-1)
    """
    _require_complete(report)
    return [Fraction(int(e), 2**(report.n - 1)) for e in report.eta]


def shapley_weights(n: int) -> List[int]:
    """
    (s-1)! (n-s)! for s = 0..n, exact; index 0 is unused and set to 0
    """
    return [0] + [
        int(factorial(s - 1, exact=True)) * int(factorial(n - s, exact=True))
        for s in range(1, n + 1)
    ]


def kappa(report: GameReport) -> List[int]:
    """
    Shapley-Shubik value of every player as an exact integer
    """
    weights = shapley_weights(report.n)
    return [
        sum(
            int(count) * weights[s]
            for s, count in enumerate(report.crit_by_size[i]) if count
        ) for i in range(report.n)
    ]


def shapley_shubik(report: GameReport) -> List[Fraction]:
    _require_complete(report)
    n_factorial = int(factorial(report.n, exact=True))
    return [Fraction(k, n_factorial) for k in kappa(report)]


def satisfaction(report: GameReport) -> List[Fraction]:
    """
    Share of coalitions whose outcome agrees with the membership of i
    """
    _require_complete(report)
    return [
        Fraction(int(w) + int(l), 2**report.n)
        for w, l in zip(report.win_containing, report.lose_excluding)
    ]


def chow_parameters(report: GameReport) -> List[int]:
    return [int(w) for w in report.win_containing]


def effort(report: GameReport) -> list:
    """
    Minimal threshold mass of a winning coalition containing each player,
    inf when every such coalition contains an unconvincible node
    """
    return [report.tally(i).min_win_mass for i in range(report.n)]


def width(report: GameReport) -> list:
    return [report.tally(i).min_win_card for i in range(report.n)]


def effort_centrality(report: GameReport) -> List[Fraction]:
    """
    C_E(i) = (w(N) - Effort(i)) / w(N) with w(N) the sum of finite thresholds
    """
    _require_complete(report)
    total = report.total_mass
    values = []
    for value in effort(report):
        if total == 0 or np.isinf(value):
            values.append(Fraction(0))
        else:
            values.append(Fraction(total - value, total))
    return values


def width_centrality(report: GameReport) -> List[Fraction]:
    _require_complete(report)
    if report.n == 0:
        return []
    return [
        Fraction(0) if np.isinf(value) else Fraction(report.n - value, report.n)
        for value in width(report)
    ]


@dataclass(frozen=True)
class PlayerClass:
    dummy: bool
    vetoer: bool
    dictator: bool


def classify_player(
    game: InfluenceGame, report: GameReport, player: int
) -> PlayerClass:
    """
    dummy: never critical. vetoer: in every winning coalition.
    dictator: wins alone and is a vetoer.
    """
    _require_complete(report)
    if not 0 <= player < report.n:
        raise ValueError(f"Player {player} is not in the game")
    tally = report.tally(player)
    vetoer = tally.win_containing == report.total_winning
    return PlayerClass(
        dummy=tally.eta == 0,
        vetoer=vetoer,
        dictator=vetoer and is_winning(game, [player])
    )


def classify_players(game: InfluenceGame,
                     report: GameReport) -> List[PlayerClass]:
    return [classify_player(game, report, i) for i in range(report.n)]
