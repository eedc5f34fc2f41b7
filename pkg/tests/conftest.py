import numpy as np
import pytest
from scipy.special import expit

from src.dataio.dataset import Dataset, UNIT_INTERVAL


def make_blobs(n_per_blob: int, centers: np.ndarray, sigma: float, seed: int):
    rng = np.random.default_rng(seed)
    points, labels = [], []
    for label, center in enumerate(centers):
        points.append(center + sigma * rng.standard_normal((n_per_blob, len(center))))
        labels.append(np.full(n_per_blob, label))
    return np.vstack(points), np.concatenate(labels)


def block_binary_data(seed: int, n_rows: int = 200, n_cols: int = 32,
                      row_clusters: int = 4, col_groups: int = 4) -> Dataset:
    """Row clusters x feature groups, each block mostly on or mostly off"""
    rng = np.random.default_rng(seed)
    row_ids = np.arange(n_rows) % row_clusters
    col_ids = np.arange(n_cols) % col_groups
    pattern = rng.random((row_clusters, col_groups)) < 0.5
    prob = np.where(pattern[row_ids][:, col_ids], 0.9, 0.1)
    values = (rng.random((n_rows, n_cols)) < prob).astype(np.float64)
    return Dataset(values=values, labels=row_ids, preprocessing=UNIT_INTERVAL)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def three_blobs():
    centers = np.array([[0.0, 0, 0, 0, 0], [6.0, 0, 0, 0, 0], [0.0, 6, 0, 0, 0]])
    return make_blobs(100, centers, 0.1, seed=7)


@pytest.fixture
def write_text(tmp_path):
    def _write(name: str, text: str):
        path = tmp_path / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        return path
    return _write


def plain_cd1(W, a, b, V, lr, rng):
    """Textbook CD-1 step on binary units, same expression order as the trainer"""
    H = expit(V @ W + b)
    H_sample = (rng.random(H.shape) < H).astype(np.float64)
    V_r = expit(H_sample @ W.T + a)
    H_r = expit(V_r @ W + b)
    n = V.shape[0]
    step = 1.0 * lr
    W = W + step * (V.T @ H / n - V_r.T @ H_r / n)
    a = a + step * (V.mean(axis=0) - V_r.mean(axis=0))
    b = b + step * (H.mean(axis=0) - H_r.mean(axis=0))
    return W, a, b


def plain_train(X, epochs, batch_size, lr, seed):
    rng = np.random.default_rng(seed)
    N, M = X.shape
    W, a, b = rng.normal(0.0, 0.01, size=(M, M)), np.zeros(M), np.zeros(M)
    for _ in range(epochs):
        order = rng.permutation(N)
        for start in range(0, N, batch_size):
            W, a, b = plain_cd1(W, a, b, X[order[start:start + batch_size]], lr, rng)
    return W, a, b
