"""Max-sum diversification over semi-metric spaces.

Pick a set ``S`` maximizing ``f(S) + lam * sum of d(u, v) over pairs in S``
for a monotone submodular ``f`` and a distance ``d`` that only satisfies a
relaxed triangle inequality ``d(u, v) <= alpha * (d(u, w) + d(w, v))``.
"""
from divmax.core import (
    CoverageObjective,
    Instance,
    ModularObjective,
    SemiMetric,
    SolveReport,
    SubmodularObjective,
    cross_sum,
    element_set,
    marginal_distance,
    marginal_f,
    objective_value,
    pairwise_sum,
    scaled_marginal,
    validate_semimetric,
)
from divmax.greedy import greedy_solve
from divmax.io import load_instance, save_instance
from divmax.localsearch import best_seed_pair, local_search_solve
from divmax.matroid import Matroid, PartitionMatroid, UniformMatroid

__all__ = [
    "CoverageObjective",
    "Instance",
    "Matroid",
    "ModularObjective",
    "PartitionMatroid",
    "SemiMetric",
    "SolveReport",
    "SubmodularObjective",
    "UniformMatroid",
    "best_seed_pair",
    "cross_sum",
    "element_set",
    "greedy_solve",
    "load_instance",
    "local_search_solve",
    "marginal_distance",
    "marginal_f",
    "objective_value",
    "pairwise_sum",
    "save_instance",
    "scaled_marginal",
    "validate_semimetric",
]
