from influence_games.measures.exact import (
    DEFAULT_MAX_PLAYERS, CapacityError, CoalitionSweep, GameReport,
    PlayerTally, enumerate_game, merge_reports
)
from influence_games.measures.power_indices import (
    PlayerClass, banzhaf, chow_parameters, classify_player, classify_players,
    effort, effort_centrality, kappa, raw_banzhaf, satisfaction,
    shapley_shubik, width, width_centrality
)
from influence_games.measures.sampling import (
    EstimateReport, estimate_banzhaf_raw, estimate_satisfaction,
    estimate_shapley
)
from influence_games.measures.classical import (
    betweenness_centrality, closeness_centrality, degree_centrality,
    distance_matrix
)
