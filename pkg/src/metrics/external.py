"""
External clustering metrics
Accuracy under the optimal cluster-to-class mapping, and pair-counting Jaccard / Fowlkes-Mallows
"""

from typing import NamedTuple, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment
from sklearn.metrics import fowlkes_mallows_score
from sklearn.metrics.cluster import contingency_matrix as _contingency, pair_confusion_matrix


class PairConfusion(NamedTuple):
    """Counts over the N(N-1)/2 unordered instance pairs"""

    TP: int
    FP: int
    FN: int
    TN: int

    @property
    def total(self) -> int:
        return self.TP + self.FP + self.FN + self.TN


def _label_pair(pred, truth) -> Tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.shape != truth.shape:
        raise ValueError(f"label length mismatch: pred={len(pred)}, truth={len(truth)}")
    return pred, truth


def contingency_matrix(pred, truth) -> np.ndarray:
    """n_clusters x n_classes co-occurrence counts (ids are opaque)"""
    pred, truth = _label_pair(pred, truth)
    return np.asarray(_contingency(pred, truth), dtype=np.int64)


def clustering_accuracy(pred, truth) -> float:
    """Fraction matched under the best one-to-one cluster/class mapping"""
    pred, truth = _label_pair(pred, truth)
    if pred.size == 0:
        raise ValueError("empty label sequences")
    table = contingency_matrix(pred, truth)
    size = max(table.shape)
    square = np.zeros((size, size), dtype=np.int64)
    square[:table.shape[0], :table.shape[1]] = table
    rows, cols = linear_sum_assignment(square, maximize=True)
    return float(square[rows, cols].sum()) / pred.size


def pair_confusion(pred, truth) -> PairConfusion:
    pred, truth = _label_pair(pred, truth)
    n = pred.size
    if n < 2:
        return PairConfusion(TP=0, FP=0, FN=0, TN=0)
    # ordered-pair counts laid out [[TN, FP], [FN, TP]]
    counts = np.asarray(pair_confusion_matrix(truth, pred), dtype=np.int64) // 2
    return PairConfusion(TP=int(counts[1, 1]), FP=int(counts[0, 1]),
                         FN=int(counts[1, 0]), TN=int(counts[0, 0]))


def jaccard_index(pred, truth) -> float:
    """TP / (TP + FP + FN); 1 when neither partition co-clusters any pair"""
    pc = pair_confusion(pred, truth)
    denominator = pc.TP + pc.FP + pc.FN
    if denominator == 0:
        return 1.0
    return pc.TP / denominator


def fmi(pred, truth) -> float:
    """sqrt(precision * recall) over pairs; 0 when TP = 0"""
    pred, truth = _label_pair(pred, truth)
    if pred.size < 2:
        return 0.0
    return float(fowlkes_mallows_score(truth, pred))


METRICS = {
    "accuracy": clustering_accuracy,
    "jaccard": jaccard_index,
    "fmi": fmi,
}
