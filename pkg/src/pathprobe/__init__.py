"""pathprobe: a simulation lab for adaptive adjacency-query algorithms
hunting long paths in sparse random graphs near the critical density."""

__version__ = "0.1.0"

from .oracle import LazyOracle, OracleConfig, RevealedGraph, new_oracle
from .pathfind import Path, SearchOutcome, dfs_long_path, discover_component
from .structure import (
    ComponentSummary,
    CoreResult,
    Forest,
    PathCoverResult,
    SimpleGraph,
    brute_force_path_cover,
    connected_components,
    forest_max_path_count,
    forest_max_path_cover,
    longest_path_in_component,
    split_path,
    two_core,
)
from .gw import (
    CalibrationConfig,
    DualParameter,
    RootedTree,
    TreeStatRecord,
    borel_pmf,
    estimate_p_t_ell,
    joyal_tree_from_map,
    map_union_bound,
    sample_gw_tree,
    sample_uniform_labeled_tree,
    solve_dual_mu,
    t_ell_statistic,
    tree_metrics,
)

__all__ = [name for name in dir() if not name.startswith("_")]
