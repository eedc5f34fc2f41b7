from src.metrics.external import (
    METRICS,
    PairConfusion,
    clustering_accuracy,
    contingency_matrix,
    fmi,
    jaccard_index,
    pair_confusion,
)
from src.metrics.friedman import (
    FriedmanResult,
    RankTable,
    aligned_ranks,
    chi2_upper_tail,
    friedman_aligned,
    rank_table_to_frame,
    read_metric_grid,
    write_metric_grid,
)

__all__ = [
    "METRICS",
    "FriedmanResult",
    "PairConfusion",
    "RankTable",
    "aligned_ranks",
    "chi2_upper_tail",
    "clustering_accuracy",
    "contingency_matrix",
    "fmi",
    "friedman_aligned",
    "jaccard_index",
    "pair_confusion",
    "rank_table_to_frame",
    "read_metric_grid",
    "write_metric_grid",
]
