from dataclasses import dataclass
from typing import Iterable

import numpy as np

from influence_games.core.influence_graph import InfluenceGraph
from influence_games.core.spread import spread


@dataclass(frozen=True)
class InfluenceGame:
    """
    Influence graph together with a quota q: a coalition X wins iff the
    spread of influence from X activates at least q nodes.

    With count_unconvincible=False an unconvincible node placed in the seed
    is active but does not count toward the quota.
    """
    graph: InfluenceGraph
    quota: int
    count_unconvincible: bool = True

    def __post_init__(self):
        if not 0 <= self.quota <= self.graph.n + 1:
            raise ValueError(
                f"Quota must lie in [0, {self.graph.n + 1}], got {self.quota}"
            )

    @property
    def n(self) -> int:
        return self.graph.n

    def with_quota(self, quota: int) -> "InfluenceGame":
        return InfluenceGame(self.graph, quota, self.count_unconvincible)

    def counted_nodes(self) -> np.ndarray:
        """
        Boolean mask of the nodes whose activation counts toward the quota
        """
        if self.count_unconvincible:
            return np.ones(self.n, dtype=bool)
        return np.isfinite(self.graph.threshold_vector())


def is_winning(game: InfluenceGame, coalition: Iterable[int]) -> bool:
    counted = game.counted_nodes()
    active = spread(game.graph, coalition)
    return sum(1 for node in active if counted[node]) >= game.quota
