"""
Signature schemes for block discovery
MinHash over set-valued rows (binary data) and sign random projections (real-valued data)
"""

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from datasketch import MinHash

MINHASH = "minhash"
SIGN_PROJECTION = "sign_projection"


@dataclass(frozen=True)
class Signature:
    values: np.ndarray
    scheme: str

    def __len__(self) -> int:
        return len(self.values)

    def agreement(self, other: "Signature") -> float:
        """Fraction of positions where both signatures collide"""
        if len(self) != len(other):
            raise ValueError("signatures of different length")
        return float(np.mean(self.values == other.values))


def _check_n_hashes(n_hashes: int):
    if n_hashes < 1:
        raise ValueError(f"n_hashes must be >= 1, got {n_hashes}")


def binarize_for_hash(values: np.ndarray) -> np.ndarray:
    """1 where an entry strictly exceeds its column median"""
    values = np.asarray(values, dtype=np.float64)
    median = np.median(values, axis=0)
    return (values > median).astype(np.uint8)


def minhash_signature(item_set: Iterable[int], n_hashes: int, seed: int) -> Signature:
    """
    Seeded MinHash of a set of integer indices
    An empty set keeps datasketch's max-hash initial values as its sentinel signature
    """
    _check_n_hashes(n_hashes)
    mh = MinHash(num_perm=n_hashes, seed=seed)
    items = sorted(int(i) for i in item_set)
    if items:
        mh.update_batch([str(i).encode("utf8") for i in items])
    return Signature(values=np.array(mh.hashvalues, dtype=np.uint64), scheme=MINHASH)


def minhash_matrix(binary: np.ndarray, n_hashes: int, seed: int) -> np.ndarray:
    """Row-wise MinHash signatures of a 0/1 matrix, shape (N, n_hashes)"""
    _check_n_hashes(n_hashes)
    rows = [np.flatnonzero(row) for row in np.asarray(binary)]
    return np.stack([minhash_signature(r, n_hashes, seed).values for r in rows])


def sign_projection_matrix(values: np.ndarray, n_hashes: int, seed: int) -> np.ndarray:
    """Row-wise sign bits against seeded random unit directions, shape (N, n_hashes)"""
    _check_n_hashes(n_hashes)
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((n_hashes, values.shape[1]))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    return (values @ directions.T > 0).astype(np.uint64)


def sign_projection_signature(row: np.ndarray, n_hashes: int, seed: int) -> Signature:
    bits = sign_projection_matrix(np.asarray(row, dtype=np.float64)[None, :], n_hashes, seed)[0]
    return Signature(values=bits, scheme=SIGN_PROJECTION)


def jaccard_similarity(a: Iterable, b: Iterable) -> float:
    """|a ∩ b| / |a ∪ b|, defined as 1 for two empty sets"""
    a, b = set(a), set(b)
    union = a | b
    if not union:
        return 1.0
    return len(a & b) / len(union)
