"""
UCRD Pipeline - Pure Orchestrator
Coordinate load -> preprocess -> train -> transform -> cluster -> score without business logic
"""

import logging
import time
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.clustering.kmeans import ClusterResult, kmeans
from src.clustering.spectral import spectral
from src.dataio.dataset import Dataset, load_csv, scale_unit_interval, standardize
from src.metrics.external import METRICS
from src.network.ucrdnet import REAL_VALUED, TrainedNetwork, UcrdNet, train_network, transform
from src.seeds import derive_seed
from src.validation.validator import RunConfig

logger = logging.getLogger(__name__)

METRIC_COLUMNS = ("accuracy", "jaccard", "fmi")


def preprocess(d: Dataset, input_mode: str) -> Dataset:
    """Standardize for a Gaussian-visible first layer, min-max for a binary one"""
    return standardize(d) if input_mode == REAL_VALUED else scale_unit_interval(d)


def cluster(X: np.ndarray, algorithm: str, k: int, seed: int, n_init: int,
            max_iter: int, sigma: Optional[float] = None) -> ClusterResult:
    if algorithm == "kmeans":
        return kmeans(X, k, seed=seed, max_iter=max_iter, n_init=n_init)
    if algorithm == "spectral":
        return spectral(X, k, sigma=sigma, seed=seed, n_init=n_init)
    raise ValueError(f"unknown clustering algorithm '{algorithm}'")


def score(pred: np.ndarray, truth: np.ndarray) -> Dict[str, float]:
    return {name: METRICS[name](pred, truth) for name in METRIC_COLUMNS}


def summarize(scores: List[Dict[str, float]]) -> Dict[str, float]:
    """mean and population std per metric over the repeats"""
    frame = pd.DataFrame(scores, columns=list(METRIC_COLUMNS))
    row = {}
    for name in METRIC_COLUMNS:
        row[f"{name}_mean"] = float(frame[name].mean())
        row[f"{name}_std"] = float(frame[name].std(ddof=0))
    return row


class UCRDPipeline:
    def __init__(self, config: RunConfig, verbose: bool = True):
        self.config = config
        self.verbose = verbose

    def load(self) -> Dataset:
        cfg = self.config
        raw = load_csv(cfg.data_path, label_column=cfg.label_column,
                       delimiter=cfg.delimiter, has_header=cfg.has_header)
        return preprocess(raw, cfg.input_mode)

    def train(self, d: Dataset, eta: Optional[float] = None) -> TrainedNetwork:
        cfg = self.config
        return train_network(d, cfg.layer_configs(eta=eta), seed=cfg.seed,
                             reuse_partition=cfg.reuse_partition, verbose=self.verbose)

    def features(self, d: Dataset, feature_set: str,
                 trained: Optional[TrainedNetwork] = None) -> np.ndarray:
        """raw = preprocessed input, rbm = eta=1 stack, ucrdnet = collaborative stack"""
        if feature_set == "raw":
            return d.values
        if feature_set == "rbm":
            return transform(self.train(d, eta=1.0).net, d)
        if feature_set == "ucrdnet":
            net = trained.net if trained is not None else self.train(d).net
            return transform(net, d)
        raise ValueError(f"unknown feature set '{feature_set}'")

    def evaluate(self, features: np.ndarray, truth: np.ndarray, k: int,
                 algorithms: Optional[Tuple[str, ...]] = None) -> pd.DataFrame:
        """Per algorithm: mean/std of accuracy, Jaccard and FMI over seeded repeats"""
        cfg = self.config
        rows = []
        for algorithm in algorithms or cfg.algorithms:
            scores = []
            for r in range(cfg.repeats):
                seed = derive_seed(cfg.seed, f"{algorithm}.repeat{r}")
                result = cluster(features, algorithm, k, seed, cfg.n_init, cfg.max_iter, cfg.sigma)
                scores.append(score(result.labels, truth))
            rows.append({"algorithm": algorithm, **summarize(scores)})
        return pd.DataFrame(rows, columns=["algorithm"] + [
            f"{name}_{stat}" for name in METRIC_COLUMNS for stat in ("mean", "std")
        ])

    def run(self) -> Dict[str, Any]:
        """Every configured feature set x algorithm on the config's dataset"""
        cfg = self.config
        start_time = time.time()

        load_start = time.time()
        d = self.load()
        load_time = time.time() - load_start
        if not d.is_labeled:
            raise ValueError("benchmark datasets need ground-truth labels")
        k = cfg.k if cfg.k is not None else d.n_classes

        if self.verbose:
            logger.info(f"[Pipeline] 🔎 {cfg.dataset_name}: N={d.n_instances}, M={d.n_features}, k={k}")

        feature_time = 0.0
        cluster_time = 0.0
        tables = []
        for feature_set in cfg.feature_sets:
            feature_start = time.time()
            X = self.features(d, feature_set)
            feature_time += time.time() - feature_start

            cluster_start = time.time()
            table = self.evaluate(X, d.labels, k)
            cluster_time += time.time() - cluster_start
            table.insert(0, "feature_set", feature_set)
            tables.append(table)

        results = pd.concat(tables, ignore_index=True)
        total_time = time.time() - start_time
        if self.verbose:
            logger.info(f"[Pipeline] ⏱️ {cfg.dataset_name}: load {load_time:.3f}s, "
                        f"features {feature_time:.3f}s, clustering {cluster_time:.3f}s, "
                        f"total {total_time:.3f}s")

        return {
            "dataset": cfg.dataset_name,
            "results": results,
            "timing": {
                "load": load_time,
                "features": feature_time,
                "clustering": cluster_time,
                "total": total_time,
            },
        }

    def metric_row(self, results: pd.DataFrame, metric: Optional[str] = None) -> pd.Series:
        """One benchmark grid row: mean of `metric` per `<feature_set>-<algorithm>` column"""
        metric = metric or self.config.metric
        values = {
            f"{row.feature_set}-{row.algorithm}": getattr(row, f"{metric}_mean")
            for row in results.itertuples(index=False)
        }
        return pd.Series(values, name=self.config.dataset_name)


def evaluate_model(net: UcrdNet, d: Dataset, config: RunConfig, verbose: bool = False) -> pd.DataFrame:
    """Cluster a trained network's features of an already-preprocessed labeled dataset"""
    pipeline = UCRDPipeline(config, verbose=verbose)
    k = config.k if config.k is not None else d.n_classes
    return pipeline.evaluate(transform(net, d), d.labels, k)
