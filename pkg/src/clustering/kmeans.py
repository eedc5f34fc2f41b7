"""
K-means clustering
Lloyd iterations from k-means++ seeds, best of n_init restarts
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from scipy.spatial.distance import cdist

from src.config import KMEANS_MAX_ITER, KMEANS_N_INIT, MAX_WORKERS
from src.seeds import derive_seed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClusterResult:
    labels: np.ndarray
    k: int
    inertia: Optional[float] = None
    iterations: int = 0
    inertia_history: Tuple[float, ...] = field(default=(), compare=False)
    degenerate: bool = False

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        if labels.ndim != 1:
            raise ValueError("labels must be one-dimensional")
        if labels.size and (labels.min() < 0 or labels.max() >= self.k):
            raise ValueError(f"cluster ids must lie in 0..{self.k - 1}")
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)


def export_labels(result: ClusterResult, path: str) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame({"row_index": np.arange(len(result.labels)), "label": result.labels})
    frame.to_csv(out, index=False)
    return out


def _as_points(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError(f"expected a non-empty N x D matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("points contain NaN or Inf")
    return X


def kmeans_plusplus(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """D^2-weighted seeding; falls back to uniform over unchosen points when all distances vanish"""
    n_samples = X.shape[0]
    chosen = [int(rng.integers(0, n_samples))]
    closest = cdist(X, X[chosen], "sqeuclidean")[:, 0]

    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            next_idx = int(rng.choice(n_samples, p=closest / total))
        else:
            remaining = np.setdiff1d(np.arange(n_samples), chosen)
            next_idx = int(rng.choice(remaining))
        chosen.append(next_idx)
        closest = np.minimum(closest, cdist(X, X[[next_idx]], "sqeuclidean")[:, 0])

    return X[chosen].copy()


def _repair_empty(X: np.ndarray, labels: np.ndarray, centroids: np.ndarray, k: int):
    """Move the point farthest from its centroid into each empty cluster"""
    counts = np.bincount(labels, minlength=k)
    for j in np.flatnonzero(counts == 0):
        dist = np.sum((X - centroids[labels]) ** 2, axis=1)
        # donors must keep at least one member
        dist[counts[labels] < 2] = -1.0
        donor = int(np.argmax(dist))
        counts[labels[donor]] -= 1
        labels[donor] = j
        counts[j] = 1
        centroids[j] = X[donor]


def _inertia(X: np.ndarray, labels: np.ndarray, centroids: np.ndarray) -> float:
    return float(np.sum((X - centroids[labels]) ** 2))


def lloyd(X: np.ndarray, k: int, seed: int, max_iter: int = KMEANS_MAX_ITER) -> ClusterResult:
    """Single run: assignments stop changing or max_iter is reached"""
    rng = np.random.default_rng(seed)
    centroids = kmeans_plusplus(X, k, rng)
    labels = None
    history = []

    iteration = 0
    for iteration in range(1, max_iter + 1):
        new_labels = np.argmin(cdist(X, centroids, "sqeuclidean"), axis=1)
        _repair_empty(X, new_labels, centroids, k)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        centroids = np.stack([X[labels == j].mean(axis=0) for j in range(k)])
        history.append(_inertia(X, labels, centroids))

    return ClusterResult(labels=labels, k=k, inertia=history[-1], iterations=iteration,
                         inertia_history=tuple(history))


def kmeans(
    X: np.ndarray,
    k: int,
    seed: int = 0,
    max_iter: int = KMEANS_MAX_ITER,
    n_init: int = KMEANS_N_INIT,
    max_workers: int = MAX_WORKERS,
) -> ClusterResult:
    """
    Best-of-n_init Lloyd clustering

    Restart i is seeded with derive_seed(seed, "kmeans.restart{i}"); the winner is the
    lowest (inertia, restart index), so the result does not depend on max_workers.
    """
    X = _as_points(X)
    N = X.shape[0]
    if not 1 <= k <= N:
        raise ValueError(f"k must be in [1, {N}], got {k}")
    if n_init < 1 or max_iter < 1:
        raise ValueError("n_init and max_iter must be >= 1")

    seeds = [derive_seed(seed, f"kmeans.restart{i}") for i in range(n_init)]
    if max_workers > 1 and n_init > 1:
        with ThreadPoolExecutor(max_workers=min(max_workers, n_init)) as executor:
            runs = list(executor.map(lambda s: lloyd(X, k, s, max_iter), seeds))
    else:
        runs = [lloyd(X, k, s, max_iter) for s in seeds]

    best_index = min(range(n_init), key=lambda i: (runs[i].inertia, i))
    best = runs[best_index]
    logger.debug(f"[KMeans] k={k}: restart {best_index} wins with inertia {best.inertia:.6f} "
                 f"after {best.iterations} iterations")
    return best
