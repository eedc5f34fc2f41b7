"""
Block partition of an instance matrix
K row groups of similar instances x L column groups of similar features, built from
LSH signature buckets and then merged / split deterministically to the exact counts
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple

import numpy as np

from src.dataio.dataset import UNIT_INTERVAL, Dataset
from src.lsh.hashing import (
    binarize_for_hash,
    minhash_matrix,
    sign_projection_matrix,
)

logger = logging.getLogger(__name__)

MAX_SPLIT_ATTEMPTS = 8


def _as_groups(groups: Sequence[Sequence[int]]) -> Tuple[np.ndarray, ...]:
    out = []
    for g in groups:
        arr = np.array(sorted(int(i) for i in g), dtype=np.int64)
        arr.flags.writeable = False
        out.append(arr)
    return tuple(out)


def _check_cover(groups: Tuple[np.ndarray, ...], n: int, axis: str):
    if not groups:
        raise ValueError(f"{axis} partition has no groups")
    if any(len(g) == 0 for g in groups):
        raise ValueError(f"{axis} partition contains an empty group")
    merged = np.concatenate(groups)
    if len(merged) != n or not np.array_equal(np.sort(merged), np.arange(n)):
        raise ValueError(f"{axis} groups must be disjoint and cover 0..{n - 1}")


@dataclass(frozen=True)
class BlockPartition:
    """Disjoint row groups and column groups; blocks are their cross product"""

    row_groups: Tuple[np.ndarray, ...]
    col_groups: Tuple[np.ndarray, ...]
    n_rows: int
    n_cols: int

    def __post_init__(self):
        object.__setattr__(self, "row_groups", _as_groups(self.row_groups))
        object.__setattr__(self, "col_groups", _as_groups(self.col_groups))
        _check_cover(self.row_groups, self.n_rows, "row")
        _check_cover(self.col_groups, self.n_cols, "column")

    @classmethod
    def from_groups(cls, row_groups, col_groups) -> "BlockPartition":
        n_rows = sum(len(g) for g in row_groups)
        n_cols = sum(len(g) for g in col_groups)
        return cls(row_groups=tuple(row_groups), col_groups=tuple(col_groups),
                   n_rows=n_rows, n_cols=n_cols)

    @property
    def K(self) -> int:
        return len(self.row_groups)

    @property
    def L(self) -> int:
        return len(self.col_groups)

    def row_labels(self) -> np.ndarray:
        labels = np.empty(self.n_rows, dtype=np.int64)
        for k, g in enumerate(self.row_groups):
            labels[g] = k
        return labels

    def col_labels(self) -> np.ndarray:
        labels = np.empty(self.n_cols, dtype=np.int64)
        for l, g in enumerate(self.col_groups):
            labels[g] = l
        return labels

    def restrict_rows(self, indices: Sequence[int]) -> "BlockPartition":
        """
        Partition over the positions 0..len(indices)-1 of a batch
        Row groups with no member in the batch are dropped
        """
        indices = np.asarray(indices, dtype=np.int64)
        batch_labels = self.row_labels()[indices]
        groups = [np.flatnonzero(batch_labels == k) for k in range(self.K)]
        groups = [g for g in groups if len(g)]
        return BlockPartition(row_groups=tuple(groups), col_groups=self.col_groups,
                              n_rows=len(indices), n_cols=self.n_cols)


def default_group_count(n: int) -> int:
    return max(1, math.ceil(math.sqrt(n)))


# ============================================
# Signature bucketing -> exact group count
# ============================================

def _signatures(matrix: np.ndarray, binary_mode: bool, n_hashes: int, seed: int) -> np.ndarray:
    if binary_mode:
        return minhash_matrix(binarize_for_hash(matrix), n_hashes, seed)
    return sign_projection_matrix(matrix, n_hashes, seed)


def _secondary_bits(matrix: np.ndarray, binary_mode: bool, seed: int) -> np.ndarray:
    if binary_mode:
        return (minhash_matrix(binarize_for_hash(matrix), 1, seed)[:, 0] & 1).astype(np.uint8)
    return sign_projection_matrix(matrix, 1, seed)[:, 0].astype(np.uint8)


def _bucket(signatures: np.ndarray) -> List[List[int]]:
    """Group rows sharing a full signature, buckets ordered by first member"""
    buckets = {}
    for idx, sig in enumerate(signatures):
        buckets.setdefault(sig.tobytes(), []).append(idx)
    return list(buckets.values())


def _merge_to(buckets: List[List[int]], signatures: np.ndarray, target: int) -> List[List[int]]:
    """Average-linkage merging on signature agreement; ties go to the lowest index pair"""
    n_buckets = len(buckets)
    reps = np.stack([signatures[b[0]] for b in buckets])
    agreement_sum = np.zeros((n_buckets, n_buckets))
    for t in range(reps.shape[1]):
        col = reps[:, t]
        agreement_sum += col[:, None] == col[None, :]
    agreement_sum /= reps.shape[1]
    sizes = np.array([len(b) for b in buckets], dtype=np.float64)
    agreement_sum *= np.outer(sizes, sizes)

    alive = np.ones(n_buckets, dtype=bool)
    members = [list(b) for b in buckets]
    upper = np.triu(np.ones((n_buckets, n_buckets), dtype=bool), k=1)

    while alive.sum() > target:
        mean = agreement_sum / np.outer(sizes, sizes)
        valid = upper & alive[:, None] & alive[None, :]
        mean = np.where(valid, mean, -np.inf)
        i, j = np.unravel_index(int(np.argmax(mean)), mean.shape)
        members[i].extend(members[j])
        members[j] = []
        agreement_sum[i, :] += agreement_sum[j, :]
        agreement_sum[:, i] += agreement_sum[:, j]
        sizes[i] += sizes[j]
        alive[j] = False

    return [sorted(members[b]) for b in range(n_buckets) if alive[b]]


def _split_to(buckets: List[List[int]], matrix: np.ndarray, binary_mode: bool,
              target: int, seed: int) -> List[List[int]]:
    """Split the largest bucket until the target count is reached"""
    buckets = [list(b) for b in buckets]
    split_round = 0
    while len(buckets) < target:
        largest = max(range(len(buckets)), key=lambda b: (len(buckets[b]), -b))
        members = np.array(buckets[largest])

        part_a, part_b = None, None
        for attempt in range(MAX_SPLIT_ATTEMPTS):
            fresh = int(np.random.SeedSequence([seed, split_round, attempt]).generate_state(1)[0])
            bits = _secondary_bits(matrix[members], binary_mode, fresh)
            if 0 < bits.sum() < len(members):
                part_a = members[bits == 0].tolist()
                part_b = members[bits == 1].tolist()
                break

        if part_a is None:
            # Round-robin fallback (identical rows cannot be told apart by any hash)
            part_a = members[0::2].tolist()
            part_b = members[1::2].tolist()

        buckets[largest] = part_a
        buckets.append(part_b)
        split_round += 1
    return buckets


def _partition_axis(matrix: np.ndarray, binary_mode: bool, n_groups: int,
                    n_hashes: int, seed: int, axis: str) -> List[np.ndarray]:
    n = matrix.shape[0]
    if not 1 <= n_groups <= n:
        raise ValueError(f"{axis} group count must be in [1, {n}], got {n_groups}")

    signatures = _signatures(matrix, binary_mode, n_hashes, seed)
    buckets = _bucket(signatures)
    n_initial = len(buckets)
    if len(buckets) > n_groups:
        buckets = _merge_to(buckets, signatures, n_groups)
    elif len(buckets) < n_groups:
        buckets = _split_to(buckets, matrix, binary_mode, n_groups, seed)

    logger.debug(f"[LSH] {axis}: {n_initial} signature buckets -> {n_groups} groups")
    groups = sorted((sorted(b) for b in buckets), key=lambda g: g[0])
    return [np.array(g, dtype=np.int64) for g in groups]


def _binary_mode(d: Dataset) -> bool:
    return d.preprocessing == UNIT_INTERVAL


def partition_rows(d: Dataset, K: int, n_hashes: int, seed: int) -> List[np.ndarray]:
    """K row groups of similar instances"""
    return _partition_axis(d.values, _binary_mode(d), K, n_hashes, seed, "row")


def partition_cols(d: Dataset, L: int, n_hashes: int, seed: int) -> List[np.ndarray]:
    """L column groups of similar features (row procedure on the transpose)"""
    return _partition_axis(np.ascontiguousarray(d.values.T), _binary_mode(d), L, n_hashes, seed, "column")


def build_partition(d: Dataset, K: int, L: int, n_hashes: int,
                    row_seed: int, col_seed: int) -> BlockPartition:
    row_groups = partition_rows(d, K, n_hashes, row_seed)
    col_groups = partition_cols(d, L, n_hashes, col_seed)
    part = BlockPartition(row_groups=tuple(row_groups), col_groups=tuple(col_groups),
                          n_rows=d.n_instances, n_cols=d.n_features)
    logger.info(f"[LSH] ✅ Block partition ready: K={part.K} x L={part.L} "
                f"(N={d.n_instances}, M={d.n_features})")
    return part


# ============================================
# Export for reproducibility audits
# ============================================

def export_partition(part: BlockPartition, path: str) -> Path:
    """One `row <index> <group>` / `col <index> <group>` pair per line"""
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"row {i} {g}" for i, g in enumerate(part.row_labels())]
    lines += [f"col {j} {g}" for j, g in enumerate(part.col_labels())]
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out


def load_partition(path: str) -> BlockPartition:
    rows, cols = {}, {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            kind, index, group = line.split()
            target = {"row": rows, "col": cols}[kind]
            target[int(index)] = int(group)
        except (ValueError, KeyError):
            raise ValueError(f"malformed partition line {line_no}: '{line}'")

    def groups(labels: dict) -> List[List[int]]:
        out = {}
        for idx in sorted(labels):
            out.setdefault(labels[idx], []).append(idx)
        return [out[g] for g in sorted(out)]

    return BlockPartition(row_groups=tuple(groups(rows)), col_groups=tuple(groups(cols)),
                          n_rows=len(rows), n_cols=len(cols))
