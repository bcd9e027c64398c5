"""Similarity-guided vertical partitioning for frequent pattern mining."""

from .dataset import (
    DataError,
    Dataset,
    DatasetStats,
    load,
    min_significant_support,
    parse_csv,
    parse_fimi,
    project,
    stats,
)
from .merge import MergeInput, join, merge_stats, pattern_merge
from .miner import Pattern, PatternSet, apriori, closed_filter, is_dominated, mine_closed_oracle
from .partition import PartitionPlan, capped_agglomerative, random_partition, validate
from .similarity import SimilarityMatrix, build_matrix, jaccard, kendall_tau, pearson, sim_co, sim_or

__version__ = "0.1.0"
