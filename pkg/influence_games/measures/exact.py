import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import reduce
from typing import List, Tuple

import numpy as np
from tqdm import tqdm

from influence_games.core.game import InfluenceGame
from influence_games.core.influence_graph import UNCONVINCIBLE
from influence_games.core.spread import BatchSpread, masks_to_members

logger = logging.getLogger(__name__)

DEFAULT_MAX_PLAYERS = 30


class CapacityError(ValueError):
    pass


@dataclass(frozen=True)
class PlayerTally:
    """
    Exact counts of one player gathered in the enumeration sweep
    """
    eta: int
    crit_by_size: Tuple[int, ...]  # index s - 1 holds coalitions of size s
    win_containing: int
    lose_excluding: int
    min_win_mass: float  # int valued, inf if no finite winning mass
    min_win_card: float  # int valued, inf if no winning coalition


@dataclass
class GameReport:
    """
    Per player tallies over a range of coalitions. A report covering all 2^n
    coalitions is complete; partial reports over disjoint ranges are merged
    with merge_reports.
    """
    n: int
    quota: int
    crit_by_size: np.ndarray  # (n, n + 1), column s counts size-s coalitions
    win_containing: np.ndarray
    lose_excluding: np.ndarray
    min_win_mass: np.ndarray
    min_win_card: np.ndarray
    total_winning: int
    total_mass: int  # sum of finite thresholds, w(N)
    coalitions: int

    @classmethod
    def empty(cls, n: int, quota: int, total_mass: int) -> "GameReport":
        return cls(
            n=n,
            quota=quota,
            crit_by_size=np.zeros((n, n + 1), dtype=np.int64),
            win_containing=np.zeros(n, dtype=np.int64),
            lose_excluding=np.zeros(n, dtype=np.int64),
            min_win_mass=np.full(n, np.inf),
            min_win_card=np.full(n, np.inf),
            total_winning=0,
            total_mass=total_mass,
            coalitions=0
        )

    @property
    def complete(self) -> bool:
        return self.coalitions == 2**self.n

    @property
    def eta(self) -> np.ndarray:
        return self.crit_by_size.sum(axis=1)

    def tally(self, player: int) -> PlayerTally:
        return PlayerTally(
            eta=int(self.crit_by_size[player].sum()),
            crit_by_size=tuple(int(c) for c in self.crit_by_size[player, 1:]),
            win_containing=int(self.win_containing[player]),
            lose_excluding=int(self.lose_excluding[player]),
            min_win_mass=_as_extended(self.min_win_mass[player]),
            min_win_card=_as_extended(self.min_win_card[player])
        )

    def tallies(self) -> List[PlayerTally]:
        return [self.tally(i) for i in range(self.n)]

    def check(self):
        """
        Raise if the report breaks one of the counting invariants
        """
        if not 0 <= self.total_winning <= self.coalitions:
            raise AssertionError(
                f"{self.total_winning} winning of {self.coalitions} coalitions"
            )
        if np.any(self.win_containing + self.lose_excluding > self.coalitions):
            raise AssertionError("More tallied coalitions than enumerated")
        if np.any(self.crit_by_size[:, 0] != 0):
            raise AssertionError("The empty coalition cannot be critical")


def _as_extended(value):
    return UNCONVINCIBLE if np.isinf(value) else int(value)


def merge_reports(first: GameReport, second: GameReport) -> GameReport:
    """
    Combine reports over disjoint coalition ranges
    """
    if (first.n, first.quota) != (second.n, second.quota):
        raise ValueError("Only reports of the same game can be merged")
    return GameReport(
        n=first.n,
        quota=first.quota,
        crit_by_size=first.crit_by_size + second.crit_by_size,
        win_containing=first.win_containing + second.win_containing,
        lose_excluding=first.lose_excluding + second.lose_excluding,
        min_win_mass=np.minimum(first.min_win_mass, second.min_win_mass),
        min_win_card=np.minimum(first.min_win_card, second.min_win_card),
        total_winning=first.total_winning + second.total_winning,
        total_mass=first.total_mass,
        coalitions=first.coalitions + second.coalitions
    )


class CoalitionSweep:
    """
    Enumerates all 2^n coalitions of an influence game in ascending index
    order. Bit i of a coalition index is set iff node i is a member.

    The sweep first stores the win status of every coalition, then tallies
    criticality by looking up the partner coalition X ^ (1 << i). The win
    status takes one byte per coalition, 2^n bytes in total: 64 MiB at 26
    players and 1 GiB at the default limit of 30.
    """

    def __init__(
        self,
        game: InfluenceGame,
        chunk_bits=16,
        workers=1,
        progress=False,
        max_players=DEFAULT_MAX_PLAYERS
    ):
        if game.n > max_players:
            raise CapacityError(
                f"Exact enumeration supports at most {max_players} players, "
                f"game has {game.n}"
            )
        if chunk_bits < 1:
            raise ValueError(f"chunk_bits must be >= 1, got {chunk_bits}")
        self.game = game
        self.n = game.n
        self.num_coalitions = 2**self.n
        self.chunk_size = min(2**chunk_bits, self.num_coalitions)
        self.workers = max(1, int(workers))
        self.progress = progress

        self.spreader = BatchSpread(game.graph)
        self.counted = game.counted_nodes()
        thresholds = game.graph.threshold_vector()
        self.finite = np.isfinite(thresholds)
        self.finite_thresholds = thresholds[self.finite]
        self.total_mass = game.graph.total_finite_threshold()
        self.win = None

    def _chunks(self, lo, hi):
        return [
            (start, min(start + self.chunk_size, hi))
            for start in range(lo, hi, self.chunk_size)
        ]

    def _map(self, func, items, desc):
        items = list(items)
        bar = tqdm(total=len(items), desc=desc, disable=not self.progress)
        results = []
        if self.workers == 1:
            for item in items:
                results.append(func(item))
                bar.update(1)
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                # map preserves the input order
                for result in executor.map(func, items):
                    results.append(result)
                    bar.update(1)
        bar.close()
        return results

    def _win_chunk(self, bounds):
        start, end = bounds
        members = masks_to_members(np.arange(start, end), self.n)
        sizes = self.spreader.sizes(members, self.counted)
        self.win[start:end] = sizes >= self.game.quota

    def compute_win_status(self) -> np.ndarray:
        if self.win is None:
            self.win = np.zeros(self.num_coalitions, dtype=bool)
            self._map(
                self._win_chunk, self._chunks(0, self.num_coalitions),
                "win status"
            )
        return self.win

    def _tally_chunk(self, start, end, report: GameReport):
        n = self.n
        masks = np.arange(start, end, dtype=np.int64)
        members = masks_to_members(masks, n)
        win = self.win[start:end]
        size = members.sum(axis=1)

        # X is critical for i iff i in X, X wins and X without i loses
        bits = np.int64(1) << np.arange(n, dtype=np.int64)
        crit = members & win[:, None] & ~self.win[masks[:, None] ^ bits]
        rows, players = np.nonzero(crit)
        report.crit_by_size += np.bincount(
            players * (n + 1) + size[rows], minlength=n * (n + 1)
        ).reshape(n, n + 1)

        win_members = members & win[:, None]
        report.win_containing += win_members.sum(axis=0)
        report.lose_excluding += (~members & ~win[:, None]).sum(axis=0)

        mass = members[:, self.finite].astype(np.float64) \
            @ self.finite_thresholds
        mass[members[:, ~self.finite].any(axis=1)] = np.inf
        for field, values in (("min_win_mass", mass), ("min_win_card", size)):
            smallest = np.where(win_members, values[:, None], np.inf).min(
                axis=0, initial=np.inf
            )
            setattr(
                report, field, np.minimum(getattr(report, field), smallest)
            )
        report.total_winning += int(win.sum())
        report.coalitions += end - start

    def tally_range(self, bounds) -> GameReport:
        """
        Partial report over the coalition indices [lo, hi)
        """
        lo, hi = bounds
        self.compute_win_status()
        report = GameReport.empty(self.n, self.game.quota, self.total_mass)
        for start, end in self._chunks(lo, hi):
            self._tally_chunk(start, end, report)
        return report

    def partition(self, partitions: int):
        partitions = max(1, min(int(partitions), self.num_coalitions))
        bounds = np.linspace(0, self.num_coalitions, partitions + 1)
        bounds = [int(round(b)) for b in bounds]
        return list(zip(bounds[:-1], bounds[1:]))

    def run(self, partitions=1) -> GameReport:
        self.compute_win_status()
        partials = self._map(
            self.tally_range, self.partition(partitions), "criticality"
        )
        if self.game.quota >= 1 and self.win[0]:
            raise AssertionError("Empty coalition wins with positive quota")
        report = reduce(merge_reports, partials)
        report.check()
        return report


def enumerate_game(
    game: InfluenceGame,
    max_players=DEFAULT_MAX_PLAYERS,
    chunk_bits=16,
    partitions=1,
    workers=1,
    progress=False,
    **kwargs
) -> GameReport:
    """
    Exact tallies of every player over all 2^n coalitions.

    The coalition space may be split into contiguous partitions whose partial
    reports are merged; the result does not depend on the partition or
    worker count.
    """
    logger.info(
        f"Enumerating 2^{game.n} coalitions (quota {game.quota}, "
        f"{partitions} partitions, {workers} workers)"
    )
    sweep = CoalitionSweep(
        game,
        chunk_bits=chunk_bits,
        workers=workers,
        progress=progress,
        max_players=max_players
    )
    report = sweep.run(partitions=partitions)
    logger.debug(
        f"{report.total_winning} winning coalitions of {report.coalitions}"
    )
    return report
