from src.network.model_io import from_bytes, load, save, to_bytes
from src.network.ucrdnet import (
    BINARY_INPUT,
    REAL_VALUED,
    TrainedNetwork,
    UcrdNet,
    input_mode_for,
    layer_partition,
    train_network,
    transform,
)

__all__ = [
    "BINARY_INPUT",
    "REAL_VALUED",
    "TrainedNetwork",
    "UcrdNet",
    "from_bytes",
    "input_mode_for",
    "layer_partition",
    "load",
    "save",
    "to_bytes",
    "train_network",
    "transform",
]
