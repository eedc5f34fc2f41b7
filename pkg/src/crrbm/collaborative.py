"""
Block-center collaborative cost and its gradients

Two cost readings are provided:
- C (block cost): squared distance of every hidden activation to the mean of its
  (row group, column group) block.
- C~ (surrogate): squared distance to the per-column mean inside the row group.
  The published gradient formulas are exactly the gradient of C~.

gradient_mode selects which one the W / b gradients differentiate:
"paper_printed" -> C~, "exact_blockcost" -> C. The visible bias has no collaborative term.
"""

from typing import NamedTuple

import numpy as np

from src.errors import DimensionMismatchError
from src.lsh.partition import BlockPartition

PAPER_PRINTED = "paper_printed"
EXACT_BLOCKCOST = "exact_blockcost"


class CollaborativeCost(NamedTuple):
    data: float
    recon: float
    surrogate_data: float
    surrogate_recon: float


def _check(H: np.ndarray, part: BlockPartition):
    if H.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-D activation matrix, got shape {H.shape}")
    if H.shape != (part.n_rows, part.n_cols):
        raise DimensionMismatchError(
            f"activations {H.shape} do not match partition ({part.n_rows}, {part.n_cols}); "
            "collaborative layers need as many hidden units as visible units"
        )


def _check_mode(mode: str):
    if mode not in (PAPER_PRINTED, EXACT_BLOCKCOST):
        raise ValueError(f"unknown gradient mode '{mode}'")


def block_centers(H: np.ndarray, part: BlockPartition) -> np.ndarray:
    """U[k, l] = mean of H over rows in group k and columns in group l"""
    H = np.asarray(H, dtype=np.float64)
    _check(H, part)
    U = np.empty((part.K, part.L))
    for k, rows in enumerate(part.row_groups):
        for l, cols in enumerate(part.col_groups):
            U[k, l] = H[np.ix_(rows, cols)].mean()
    return U


def _center_map(H: np.ndarray, part: BlockPartition) -> np.ndarray:
    """Each entry replaced by its block center"""
    U = block_centers(H, part)
    return U[part.row_labels()][:, part.col_labels()]


def _row_group_means(H: np.ndarray, part: BlockPartition) -> np.ndarray:
    """Each entry replaced by its column mean inside the row group"""
    means = np.empty_like(H)
    for rows in part.row_groups:
        means[rows] = H[rows].mean(axis=0)
    return means


def block_cost(H: np.ndarray, part: BlockPartition) -> float:
    H = np.asarray(H, dtype=np.float64)
    return float(np.sum((H - _center_map(H, part)) ** 2))


def surrogate_cost(H: np.ndarray, part: BlockPartition) -> float:
    H = np.asarray(H, dtype=np.float64)
    _check(H, part)
    return float(np.sum((H - _row_group_means(H, part)) ** 2))


def collaborative_cost(H: np.ndarray, H_r: np.ndarray, part: BlockPartition) -> CollaborativeCost:
    """(C_data, C_recon, C~_data, C~_recon) for data-side and reconstruction-side activations"""
    H = np.asarray(H, dtype=np.float64)
    H_r = np.asarray(H_r, dtype=np.float64)
    if H.shape != H_r.shape:
        raise DimensionMismatchError(f"H {H.shape} and H_r {H_r.shape} differ")
    return CollaborativeCost(
        data=block_cost(H, part),
        recon=block_cost(H_r, part),
        surrogate_data=surrogate_cost(H, part),
        surrogate_recon=surrogate_cost(H_r, part),
    )


# ============================================
# Gradients (one side = data or reconstruction)
# ============================================

def _printed_side(V: np.ndarray, H: np.ndarray, part: BlockPartition):
    """
    Published form, summed over row groups:
      2 sum_s (h_sj - mean_k h_j) [ (1-h_sj) h_sj v_si - mean_k((1-h) h v)_ij ]
    The subtracted mean multiplies the within-group sum of centered h, which is zero
    up to rounding; it is kept so the result follows the formula term by term.
    """
    D = H * (1.0 - H)
    centered = H - _row_group_means(H, part)
    grad_w = V.T @ (centered * D)
    grad_b = np.sum(centered * D, axis=0)
    for rows in part.row_groups:
        centered_sum = centered[rows].sum(axis=0)
        grad_w -= (V[rows].T @ D[rows] / len(rows)) * centered_sum[None, :]
        grad_b -= D[rows].mean(axis=0) * centered_sum
    return 2.0 * grad_w, 2.0 * grad_b


def _blockcost_side(V: np.ndarray, H: np.ndarray, part: BlockPartition):
    """
    Chain rule through the block centers: dC/dh_st = 2 (r_st - mean_block r) with
    r = h - u; the center-sensitivity term mean_block r vanishes but is evaluated.
    """
    D = H * (1.0 - H)
    residual = H - _center_map(H, part)
    dC_dh = 2.0 * (residual - _center_map(residual, part))
    delta = dC_dh * D
    return V.T @ delta, np.sum(delta, axis=0)


def _side(V: np.ndarray, H: np.ndarray, part: BlockPartition, mode: str):
    V = np.asarray(V, dtype=np.float64)
    H = np.asarray(H, dtype=np.float64)
    _check(H, part)
    if V.shape[0] != H.shape[0]:
        raise DimensionMismatchError(f"V has {V.shape[0]} rows, H has {H.shape[0]}")
    if mode == PAPER_PRINTED:
        return _printed_side(V, H, part)
    return _blockcost_side(V, H, part)


def grad_collab_w(V: np.ndarray, H: np.ndarray, V_r: np.ndarray, H_r: np.ndarray,
                  part: BlockPartition, mode: str = PAPER_PRINTED) -> np.ndarray:
    """dC_data/dW + dC_recon/dW, shape M x M' (V_r held fixed on the reconstruction side)"""
    _check_mode(mode)
    data_w, _ = _side(V, H, part, mode)
    recon_w, _ = _side(V_r, H_r, part, mode)
    return data_w + recon_w


def grad_collab_b(H: np.ndarray, H_r: np.ndarray, part: BlockPartition,
                  mode: str = PAPER_PRINTED) -> np.ndarray:
    """dC_data/db + dC_recon/db, length M'"""
    _check_mode(mode)
    H = np.asarray(H, dtype=np.float64)
    H_r = np.asarray(H_r, dtype=np.float64)
    # b does not depend on V, any matrix with the right row count works
    _, data_b = _side(np.zeros((H.shape[0], 1)), H, part, mode)
    _, recon_b = _side(np.zeros((H_r.shape[0], 1)), H_r, part, mode)
    return data_b + recon_b


def collaborative_gradients(V, H, V_r, H_r, part: BlockPartition, mode: str = PAPER_PRINTED):
    """Both gradients from a single pass per side"""
    _check_mode(mode)
    data_w, data_b = _side(V, H, part, mode)
    recon_w, recon_b = _side(V_r, H_r, part, mode)
    return data_w + recon_w, data_b + recon_b
