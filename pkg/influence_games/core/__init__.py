from influence_games.core.influence_graph import (
    UNCONVINCIBLE, Coalition, InfluenceGraph, SchemeKind, ThresholdScheme,
    apply_threshold_scheme, is_unconvincible, mark_isolated_unconvincible,
    reverse_with_weight_swap, threshold_mass
)
from influence_games.core.spread import (
    BatchSpread, masks_to_members, spread, spread_trace
)
from influence_games.core.game import InfluenceGame, is_winning
