from src.crrbm.collaborative import (
    EXACT_BLOCKCOST,
    PAPER_PRINTED,
    CollaborativeCost,
    block_centers,
    block_cost,
    collaborative_cost,
    collaborative_gradients,
    grad_collab_b,
    grad_collab_w,
    surrogate_cost,
)
from src.crrbm.layer import BINARY, GAUSSIAN, RbmParams, hidden_probs, reconstruct_visible, sample_bernoulli
from src.crrbm.trainer import (
    EpochRecord,
    OperationCounter,
    TrainConfig,
    TrainingDivergedError,
    TrainReport,
    cd1_update,
    train,
)

__all__ = [
    "BINARY",
    "GAUSSIAN",
    "EXACT_BLOCKCOST",
    "PAPER_PRINTED",
    "CollaborativeCost",
    "EpochRecord",
    "OperationCounter",
    "RbmParams",
    "TrainConfig",
    "TrainReport",
    "TrainingDivergedError",
    "block_centers",
    "block_cost",
    "cd1_update",
    "collaborative_cost",
    "collaborative_gradients",
    "grad_collab_b",
    "grad_collab_w",
    "hidden_probs",
    "reconstruct_visible",
    "sample_bernoulli",
    "surrogate_cost",
    "train",
]
