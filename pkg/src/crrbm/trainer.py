"""
Layer trainer
CD-1 with the block-center collaborative term, mini-batch loop over seeded shuffles
"""

import logging
from dataclasses import asdict, dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.config import (
    BATCH_SIZE,
    COLLABORATIVE_SIGN,
    COLLABORATIVE_SIGNS,
    EPOCHS,
    ETA,
    GRADIENT_MODE,
    GRADIENT_MODES,
    LEARNING_RATE,
    N_HASHES,
)
from src.crrbm.collaborative import collaborative_cost, collaborative_gradients
from src.crrbm.layer import (
    BINARY,
    GAUSSIAN,
    RbmParams,
    hidden_probs,
    reconstruct_visible,
    sample_bernoulli,
)
from src.dataio.dataset import STANDARDIZED, UNIT_INTERVAL, Dataset
from src.errors import ConfigError, DimensionMismatchError, PreprocessingStateError, UcrdError
from src.lsh.partition import BlockPartition

logger = logging.getLogger(__name__)

VISIBLE_KIND_FOR = {STANDARDIZED: GAUSSIAN, UNIT_INTERVAL: BINARY}


class TrainingDivergedError(UcrdError, FloatingPointError):
    """Parameters or monitored costs stopped being finite"""


@dataclass(frozen=True)
class TrainConfig:
    eta: float = ETA
    lr: float = LEARNING_RATE
    epochs: int = EPOCHS
    batch_size: int = BATCH_SIZE
    K: Optional[int] = None
    L: Optional[int] = None
    n_hashes: int = N_HASHES
    seed: int = 0
    gradient_mode: str = GRADIENT_MODE
    collaborative_sign: str = COLLABORATIVE_SIGN

    def validate(self, n_instances: Optional[int] = None, n_features: Optional[int] = None):
        """Raise ConfigError naming the first offending field"""
        if not 0.0 <= self.eta <= 1.0:
            raise ConfigError("eta", f"must be in [0, 1], got {self.eta}")
        # lr = 0 is accepted: it freezes the parameters (used to check initialization)
        if not np.isfinite(self.lr) or self.lr < 0:
            raise ConfigError("lr", f"must be a finite value >= 0, got {self.lr}")
        if self.epochs < 1:
            raise ConfigError("epochs", f"must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigError("batch_size", f"must be >= 1, got {self.batch_size}")
        if n_instances is not None and self.batch_size > n_instances:
            raise ConfigError("batch_size", f"must not exceed N={n_instances}, got {self.batch_size}")
        if self.n_hashes < 1:
            raise ConfigError("n_hashes", f"must be >= 1, got {self.n_hashes}")
        if self.K is not None and not (1 <= self.K <= (n_instances or self.K)):
            raise ConfigError("K", f"must be in [1, N], got {self.K}")
        if self.L is not None and not (1 <= self.L <= (n_features or self.L)):
            raise ConfigError("L", f"must be in [1, M], got {self.L}")
        if self.gradient_mode not in GRADIENT_MODES:
            raise ConfigError("gradient_mode", f"must be one of {GRADIENT_MODES}")
        if self.collaborative_sign not in COLLABORATIVE_SIGNS:
            raise ConfigError("collaborative_sign", f"must be one of {COLLABORATIVE_SIGNS}")


@dataclass
class OperationCounter:
    """Work done in one epoch, counted in loop visits rather than wall time"""

    batches: int = 0
    encoder_rows: int = 0
    decoder_rows: int = 0
    block_visits: int = 0
    updates: int = 0

    def add_batch(self, n_rows: int, n_blocks: int, collaborative: bool):
        self.batches += 1
        # data-side and reconstruction-side encodes, one decode
        self.encoder_rows += 2 * n_rows
        self.decoder_rows += n_rows
        if collaborative:
            self.block_visits += n_blocks
        self.updates += 1


@dataclass(frozen=True)
class BatchStats:
    recon_error: float
    n_rows: int


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    recon_error: float
    c_data: float
    c_recon: float
    c_tilde_data: float
    c_tilde_recon: float
    operations: OperationCounter = field(compare=False)


@dataclass
class TrainReport:
    epochs: List[EpochRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.epochs)

    def __getitem__(self, index: int) -> EpochRecord:
        return self.epochs[index]

    @property
    def final(self) -> EpochRecord:
        return self.epochs[-1]

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for record in self.epochs:
            row = {k: v for k, v in asdict(record).items() if k != "operations"}
            row.update({f"ops_{k}": v for k, v in asdict(record.operations).items()})
            rows.append(row)
        return pd.DataFrame(rows)


def _collaborative_step(cfg: TrainConfig, part: BlockPartition) -> float:
    K = cfg.K if cfg.K is not None else part.K
    L = cfg.L if cfg.L is not None else part.L
    sign = -1.0 if cfg.collaborative_sign == "descent" else 1.0
    return sign * 2.0 * (1.0 - cfg.eta) / (K * L)


def cd1_update(
    p: RbmParams,
    batch: np.ndarray,
    part: BlockPartition,
    cfg: TrainConfig,
    rng: np.random.Generator,
    counter: Optional[OperationCounter] = None,
) -> Tuple[RbmParams, BatchStats]:
    """
    One Gibbs step and parameter update on a mini-batch

    part must already be restricted to the batch rows. With eta == 1 the collaborative
    branch is skipped, so the update is plain CD-1 bit for bit.
    """
    V = np.asarray(batch, dtype=np.float64)
    if V.ndim != 2 or V.shape[0] == 0:
        raise ValueError("cd1_update needs a non-empty 2-D batch")
    if V.shape[1] != p.n_visible:
        raise DimensionMismatchError(f"batch has {V.shape[1]} columns, layer expects {p.n_visible}")
    if part.n_rows != V.shape[0]:
        raise DimensionMismatchError(
            f"partition covers {part.n_rows} rows, batch has {V.shape[0]}"
        )

    H = hidden_probs(p, V)
    H_sample = sample_bernoulli(H, rng)
    V_r = reconstruct_visible(p, H_sample)
    H_r = hidden_probs(p, V_r)

    n = V.shape[0]
    step = cfg.eta * cfg.lr
    W = p.W + step * (V.T @ H / n - V_r.T @ H_r / n)
    a = p.a + step * (V.mean(axis=0) - V_r.mean(axis=0))
    b = p.b + step * (H.mean(axis=0) - H_r.mean(axis=0))

    collaborative = cfg.eta < 1.0
    if collaborative:
        grad_w, grad_b = collaborative_gradients(V, H, V_r, H_r, part, cfg.gradient_mode)
        coeff = _collaborative_step(cfg, part)
        W = W + coeff * grad_w / 2.0
        b = b + coeff * grad_b / 2.0

    if counter is not None:
        # blocks present in this batch, not the full K x L grid
        counter.add_batch(n, part.K * part.L, collaborative)

    if not (np.all(np.isfinite(W)) and np.all(np.isfinite(b)) and np.all(np.isfinite(a))):
        raise TrainingDivergedError("non-finite parameters after update; lower lr")

    updated = RbmParams(W=W, a=a, b=b, visible_kind=p.visible_kind)
    return updated, BatchStats(recon_error=float(np.mean((V - V_r) ** 2)), n_rows=n)


def visible_kind_for(d: Dataset) -> str:
    try:
        return VISIBLE_KIND_FOR[d.preprocessing]
    except KeyError:
        raise PreprocessingStateError(
            f"training needs a standardized or unit_interval dataset, got {d.preprocessing}"
        )


def evaluate_epoch(p: RbmParams, X: np.ndarray, part: BlockPartition) -> Tuple[float, tuple]:
    """Mean-field pass over the full data: reconstruction error and the four costs"""
    H = hidden_probs(p, X)
    V_r = reconstruct_visible(p, H)
    H_r = hidden_probs(p, V_r)
    return float(np.mean((X - V_r) ** 2)), collaborative_cost(H, H_r, part)


def train(
    d: Dataset,
    cfg: TrainConfig,
    part: BlockPartition,
    visible_kind: Optional[str] = None,
    verbose: bool = False,
) -> Tuple[RbmParams, TrainReport]:
    """
    Train one collaborative layer with M' = M hidden units

    Rng contract: W init draws, then per epoch one permutation of the rows,
    then per batch the Bernoulli draws of the hidden sample.
    """
    kind = visible_kind_for(d)
    if visible_kind is not None and visible_kind != kind:
        raise ConfigError("visible_kind", f"'{visible_kind}' does not match {d.preprocessing} input")

    N, M = d.n_instances, d.n_features
    cfg.validate(N, M)
    if (part.n_rows, part.n_cols) != (N, M):
        raise DimensionMismatchError(
            f"partition is {part.n_rows}x{part.n_cols}, dataset is {N}x{M}"
        )
    cfg = replace(cfg, K=part.K, L=part.L)

    rng = np.random.default_rng(cfg.seed)
    params = RbmParams.initialize(M, M, kind, rng)
    X = d.values
    report = TrainReport()

    epochs = tqdm(range(1, cfg.epochs + 1), desc="[Trainer] epochs", disable=not verbose)
    for epoch in epochs:
        counter = OperationCounter()
        order = rng.permutation(N)
        for start in range(0, N, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            params, _ = cd1_update(params, X[idx], part.restrict_rows(idx), cfg, rng, counter)

        recon_error, costs = evaluate_epoch(params, X, part)
        record = EpochRecord(
            epoch=epoch,
            recon_error=recon_error,
            c_data=costs.data,
            c_recon=costs.recon,
            c_tilde_data=costs.surrogate_data,
            c_tilde_recon=costs.surrogate_recon,
            operations=counter,
        )
        if not np.all(np.isfinite([recon_error, *costs])):
            raise TrainingDivergedError(f"non-finite monitoring values at epoch {epoch}")
        report.epochs.append(record)
        if verbose:
            epochs.set_postfix(recon=f"{recon_error:.4f}", c_tilde=f"{costs.surrogate_data:.4f}")

    logger.info(
        f"[Trainer] ✅ {kind} layer {M}x{M} trained: {cfg.epochs} epochs, eta={cfg.eta}, "
        f"K={part.K}, L={part.L}, final recon={report.final.recon_error:.5f}"
    )
    return params, report
