"""
Spectral clustering
RBF affinity, symmetric normalization, leading eigenvectors, unit rows, then K-means
"""

import logging
from typing import Optional

import numpy as np
from scipy.linalg import eigh
from scipy.spatial.distance import pdist, squareform

from src.clustering.kmeans import ClusterResult, _as_points, kmeans
from src.config import KMEANS_N_INIT
from src.errors import DegenerateDataError

logger = logging.getLogger(__name__)


def median_sigma(X: np.ndarray) -> float:
    distances = pdist(X, "euclidean")
    return float(np.median(distances)) if distances.size else 0.0


def rbf_affinity(X: np.ndarray, sigma: float, zero_diagonal: bool = True) -> np.ndarray:
    """A_su = exp(-||x_s - x_u||^2 / (2 sigma^2))"""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    sq = squareform(pdist(X, "sqeuclidean"))
    A = np.exp(-sq / (2.0 * sigma ** 2))
    if zero_diagonal:
        np.fill_diagonal(A, 0.0)
    return A


def normalized_affinity(A: np.ndarray) -> np.ndarray:
    """D^-1/2 A D^-1/2; isolated points get a zero row and column"""
    degree = A.sum(axis=1)
    inv_sqrt = np.zeros_like(degree)
    nonzero = degree > 0
    inv_sqrt[nonzero] = 1.0 / np.sqrt(degree[nonzero])
    return inv_sqrt[:, None] * A * inv_sqrt[None, :]


def spectral_embedding(X: np.ndarray, k: int, sigma: float) -> np.ndarray:
    S = normalized_affinity(rbf_affinity(X, sigma))
    S = (S + S.T) / 2.0
    N = S.shape[0]
    _, vectors = eigh(S, subset_by_index=[N - k, N - 1])
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    return np.divide(vectors, norms, out=np.zeros_like(vectors), where=norms > 0)


def spectral(
    X: np.ndarray,
    k: int,
    sigma: Optional[float] = None,
    seed: int = 0,
    n_init: int = KMEANS_N_INIT,
) -> ClusterResult:
    """
    Spectral clustering on a fully connected RBF graph

    All-identical input has no spectral structure: every point gets label 0 and the
    result is flagged degenerate. A zero median distance on non-identical input
    leaves sigma undefined and raises DegenerateDataError.
    """
    X = _as_points(X)
    N = X.shape[0]
    if not 2 <= k <= N:
        raise ValueError(f"k must be in [2, {N}], got {k}")

    if np.all(X == X[0]):
        logger.warning(f"[Spectral] ⚠️ all {N} points identical, returning a single cluster")
        return ClusterResult(labels=np.zeros(N, dtype=np.int64), k=k, iterations=0, degenerate=True)

    if sigma is None:
        sigma = median_sigma(X)
        if sigma <= 0:
            raise DegenerateDataError(
                "median pairwise distance is zero (mostly duplicated points); pass sigma explicitly"
            )
    elif sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")

    embedding = spectral_embedding(X, k, sigma)
    inner = kmeans(embedding, k, seed=seed, n_init=n_init)
    logger.debug(f"[Spectral] k={k}, sigma={sigma:.4f}, embedding inertia={inner.inertia:.6f}")
    return ClusterResult(labels=inner.labels, k=k, iterations=inner.iterations)
