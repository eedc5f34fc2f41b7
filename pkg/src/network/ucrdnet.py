"""
UCRDNet - Deep Collaborative Feature Extractor
Greedy layer-wise stacking of collaborative layers and the deterministic forward pass
"""

import logging
import time
from dataclasses import dataclass, replace
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from src.crrbm.layer import BINARY, GAUSSIAN, RbmParams, hidden_probs
from src.crrbm.trainer import TrainConfig, TrainReport, train
from src.dataio.dataset import STANDARDIZED, UNIT_INTERVAL, Dataset
from src.errors import ConfigError, DimensionMismatchError, PreprocessingStateError
from src.lsh.partition import BlockPartition, build_partition, default_group_count
from src.seeds import derive_seed

logger = logging.getLogger(__name__)

REAL_VALUED = "real_valued"
BINARY_INPUT = "binary"
INPUT_MODES = (REAL_VALUED, BINARY_INPUT)


def input_mode_for(d: Dataset) -> str:
    if d.preprocessing == STANDARDIZED:
        return REAL_VALUED
    if d.preprocessing == UNIT_INTERVAL:
        return BINARY_INPUT
    raise PreprocessingStateError(
        f"network input must be standardized or unit_interval, got {d.preprocessing}"
    )


@dataclass(frozen=True)
class UcrdNet:
    """Gaussian-visible first layer for real-valued input, binary layers everywhere else"""

    layers: Tuple[RbmParams, ...]
    input_mode: str = REAL_VALUED

    def __post_init__(self):
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        if self.input_mode not in INPUT_MODES:
            raise ValueError(f"unknown input mode '{self.input_mode}'")
        if not layers:
            raise ValueError("a network needs at least one layer")

        expected_first = GAUSSIAN if self.input_mode == REAL_VALUED else BINARY
        for t, layer in enumerate(layers):
            expected = expected_first if t == 0 else BINARY
            if layer.visible_kind != expected:
                raise ValueError(
                    f"layer {t} has {layer.visible_kind} visible units, "
                    f"{self.input_mode} networks need {expected}"
                )
        for t in range(1, len(layers)):
            if layers[t - 1].n_hidden != layers[t].n_visible:
                raise DimensionMismatchError(
                    f"layer {t - 1} has {layers[t - 1].n_hidden} hidden units, "
                    f"layer {t} expects {layers[t].n_visible} inputs"
                )

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    @property
    def layer_sizes(self) -> List[int]:
        """[M, M'_1, M'_2, ...] from input to top layer"""
        return [self.layers[0].n_visible] + [layer.n_hidden for layer in self.layers]


class TrainedNetwork(NamedTuple):
    net: UcrdNet
    reports: List[TrainReport]
    partitions: List[BlockPartition]


def layer_partition(d: Dataset, cfg: TrainConfig, master_seed: int, layer: int) -> BlockPartition:
    """LSH blocks of one layer's input, K / L defaulting to ceil(sqrt(N)) / ceil(sqrt(M))"""
    K = cfg.K if cfg.K is not None else default_group_count(d.n_instances)
    L = cfg.L if cfg.L is not None else default_group_count(d.n_features)
    return build_partition(
        d, K, L, cfg.n_hashes,
        row_seed=derive_seed(master_seed, f"lsh.rows.layer{layer}"),
        col_seed=derive_seed(master_seed, f"lsh.cols.layer{layer}"),
    )


def train_network(
    d: Dataset,
    cfgs: Sequence[TrainConfig],
    seed: Optional[int] = None,
    reuse_partition: bool = False,
    verbose: bool = False,
) -> TrainedNetwork:
    """
    Greedy layer-wise training

    Args:
        d: standardized (real_valued net) or unit_interval (binary net) dataset
        cfgs: one TrainConfig per layer
        seed: master seed for the LSH partitions (defaults to cfgs[0].seed)
        reuse_partition: keep the input-space blocks for every layer instead of
            rehashing each layer's own input

    Returns:
        TrainedNetwork(net, reports, partitions)
    """
    if not cfgs:
        raise ConfigError("layers", "at least one layer config is required")
    input_mode = input_mode_for(d)
    master = cfgs[0].seed if seed is None else seed

    layers: List[RbmParams] = []
    reports: List[TrainReport] = []
    partitions: List[BlockPartition] = []
    current = d
    start_time = time.time()

    for t, cfg in enumerate(cfgs):
        if reuse_partition and partitions:
            part = partitions[0]
        else:
            part = layer_partition(current, cfg, master, t)
        if reuse_partition:
            cfg = replace(cfg, K=part.K, L=part.L)

        if verbose:
            logger.info(f"[Network] Layer {t + 1}/{len(cfgs)}: {current.n_features} units, "
                        f"K={part.K}, L={part.L}")
        params, report = train(current, cfg, part, verbose=verbose)
        layers.append(params)
        reports.append(report)
        partitions.append(part)

        if t + 1 < len(cfgs):
            current = current.with_values(hidden_probs(params, current.values), UNIT_INTERVAL)

    net = UcrdNet(layers=tuple(layers), input_mode=input_mode)
    logger.info(f"[Network] ✅ {input_mode} UCRDNet trained: sizes={net.layer_sizes} "
                f"({time.time() - start_time:.2f}s)")
    return TrainedNetwork(net=net, reports=reports, partitions=partitions)


def transform(net: UcrdNet, d: Union[Dataset, np.ndarray]) -> np.ndarray:
    """Top-layer hidden probabilities, no sampling"""
    X = d.values if isinstance(d, Dataset) else np.asarray(d, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != net.layers[0].n_visible:
        raise DimensionMismatchError(
            f"input has shape {X.shape}, network expects {net.layers[0].n_visible} columns"
        )
    features = X
    for layer in net.layers:
        features = hidden_probs(layer, features)
    return features
