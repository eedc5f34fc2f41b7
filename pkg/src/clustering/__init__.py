from src.clustering.kmeans import ClusterResult, export_labels, kmeans, kmeans_plusplus, lloyd
from src.clustering.spectral import (
    median_sigma,
    normalized_affinity,
    rbf_affinity,
    spectral,
    spectral_embedding,
)

__all__ = [
    "ClusterResult",
    "export_labels",
    "kmeans",
    "kmeans_plusplus",
    "lloyd",
    "median_sigma",
    "normalized_affinity",
    "rbf_affinity",
    "spectral",
    "spectral_embedding",
]
