"""
Run configuration
INI run configs parsed into RunConfig, checked by ConfigValidator before any work starts
"""

import configparser
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from src.config import (
    ALGORITHMS,
    BATCH_SIZE,
    BENCHMARK_METRIC,
    COLLABORATIVE_SIGN,
    EPOCHS,
    ETA,
    FEATURE_SETS,
    GRADIENT_MODE,
    KMEANS_MAX_ITER,
    KMEANS_N_INIT,
    LEARNING_RATE,
    N_HASHES,
    N_LAYERS,
    OUTPUT_DIR,
    REPEATS,
    REUSE_PARTITION,
    SEED,
)
from src.crrbm.trainer import TrainConfig
from src.dataio.dataset import Dataset
from src.errors import ConfigError
from src.metrics.external import METRICS
from src.network.ucrdnet import INPUT_MODES, REAL_VALUED
from src.seeds import derive_seed

logger = logging.getLogger(__name__)

KNOWN_FEATURE_SETS = ("raw", "rbm", "ucrdnet")
LAYER_KEYS = ("eta", "lr", "epochs", "batch_size", "K", "L")


def _split_list(text: str) -> Tuple[str, ...]:
    return tuple(item.strip() for item in text.split(",") if item.strip())


class _Section:
    """Typed getters that report the offending `section.key`"""

    def __init__(self, parser: configparser.ConfigParser, name: str):
        self.name = name
        self.section = parser[name] if parser.has_section(name) else {}

    def _raw(self, key: str) -> Optional[str]:
        value = self.section.get(key)
        if value is None or not str(value).strip():
            return None
        return str(value).strip()

    def get(self, key: str, default=None) -> Optional[str]:
        value = self._raw(key)
        return default if value is None else value

    def get_int(self, key: str, default=None) -> Optional[int]:
        value = self._raw(key)
        if value is None:
            return default
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{self.name}.{key}", f"expected an integer, got '{value}'")

    def get_float(self, key: str, default=None) -> Optional[float]:
        value = self._raw(key)
        if value is None:
            return default
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"{self.name}.{key}", f"expected a number, got '{value}'")

    def get_bool(self, key: str, default: bool) -> bool:
        value = self._raw(key)
        if value is None:
            return default
        lowered = value.lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{self.name}.{key}", f"expected true/false, got '{value}'")


@dataclass
class RunConfig:
    data_path: str
    label_column: Optional[int] = -1
    delimiter: str = ","
    has_header: bool = False
    input_mode: str = REAL_VALUED
    dataset_name: str = ""

    n_layers: int = N_LAYERS
    eta: float = ETA
    lr: float = LEARNING_RATE
    epochs: int = EPOCHS
    batch_size: int = BATCH_SIZE
    gradient_mode: str = GRADIENT_MODE
    collaborative_sign: str = COLLABORATIVE_SIGN
    reuse_partition: bool = REUSE_PARTITION
    layer_overrides: Dict[int, Dict[str, float]] = field(default_factory=dict)

    K: Optional[int] = None
    L: Optional[int] = None
    n_hashes: int = N_HASHES

    algorithms: Tuple[str, ...] = ALGORITHMS
    k: Optional[int] = None
    n_init: int = KMEANS_N_INIT
    max_iter: int = KMEANS_MAX_ITER
    sigma: Optional[float] = None
    repeats: int = REPEATS

    feature_sets: Tuple[str, ...] = FEATURE_SETS
    metric: str = BENCHMARK_METRIC

    output_dir: str = OUTPUT_DIR
    seed: int = SEED
    source: Optional[str] = None

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        """Relative paths in [data] and [output] resolve against the config's own directory"""
        config_path = Path(path)
        if not config_path.is_file():
            raise ConfigError("config", f"file not found: {path}")
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        try:
            parser.read(config_path, encoding="utf-8")
        except configparser.Error as e:
            raise ConfigError("config", f"cannot parse {path}: {e}")
        base = config_path.resolve().parent

        def resolve(value: Optional[str]) -> Optional[str]:
            if value is None:
                return None
            candidate = Path(value)
            return str(candidate if candidate.is_absolute() else base / candidate)

        data = _Section(parser, "data")
        train = _Section(parser, "train")
        lsh = _Section(parser, "lsh")
        clustering = _Section(parser, "clustering")
        benchmark = _Section(parser, "benchmark")
        output = _Section(parser, "output")

        data_path = data.get("path")
        if data_path is None:
            raise ConfigError("data.path", "missing dataset path")

        label_text = data.get("label_column", "-1")
        label_column = None if label_text.lower() == "none" else data.get_int("label_column", -1)

        overrides: Dict[int, Dict[str, float]] = {}
        for section_name in parser.sections():
            if not section_name.startswith("layer."):
                continue
            try:
                index = int(section_name.split(".", 1)[1])
            except ValueError:
                raise ConfigError(section_name, "layer sections are named [layer.N] with N >= 1")
            section = _Section(parser, section_name)
            values = {}
            for key in section.section:
                if key not in LAYER_KEYS:
                    raise ConfigError(f"{section_name}.{key}", f"unknown key, allowed: {LAYER_KEYS}")
                getter = section.get_float if key in ("eta", "lr") else section.get_int
                value = getter(key)
                if value is not None:
                    values[key] = value
            overrides[index] = values

        return cls(
            data_path=resolve(data_path),
            label_column=label_column,
            delimiter=data.get("delimiter", ","),
            has_header=data.get_bool("has_header", False),
            input_mode=data.get("mode", REAL_VALUED),
            dataset_name=data.get("name", Path(data_path).stem),
            n_layers=train.get_int("layers", N_LAYERS),
            eta=train.get_float("eta", ETA),
            lr=train.get_float("lr", LEARNING_RATE),
            epochs=train.get_int("epochs", EPOCHS),
            batch_size=train.get_int("batch_size", BATCH_SIZE),
            gradient_mode=train.get("gradient_mode", GRADIENT_MODE),
            collaborative_sign=train.get("collaborative_sign", COLLABORATIVE_SIGN),
            reuse_partition=train.get_bool("reuse_partition", REUSE_PARTITION),
            layer_overrides=overrides,
            K=lsh.get_int("K"),
            L=lsh.get_int("L"),
            n_hashes=lsh.get_int("n_hashes", N_HASHES),
            algorithms=_split_list(clustering.get("algorithms", ",".join(ALGORITHMS))),
            k=clustering.get_int("k"),
            n_init=clustering.get_int("n_init", KMEANS_N_INIT),
            max_iter=clustering.get_int("max_iter", KMEANS_MAX_ITER),
            sigma=clustering.get_float("sigma"),
            repeats=clustering.get_int("repeats", REPEATS),
            feature_sets=_split_list(benchmark.get("feature_sets", ",".join(FEATURE_SETS))),
            metric=benchmark.get("metric", BENCHMARK_METRIC),
            output_dir=resolve(output.get("dir")) or OUTPUT_DIR,
            seed=train.get_int("seed", SEED),
            source=str(config_path),
        )

    def layer_configs(self, eta: Optional[float] = None) -> List[TrainConfig]:
        """One TrainConfig per layer; `eta` forces every layer (eta=1 gives the plain stack)"""
        cfgs = []
        for t in range(self.n_layers):
            values = {
                "eta": self.eta, "lr": self.lr, "epochs": self.epochs,
                "batch_size": self.batch_size, "K": self.K, "L": self.L,
            }
            values.update(self.layer_overrides.get(t + 1, {}))
            if eta is not None:
                values["eta"] = eta
            cfgs.append(TrainConfig(
                eta=float(values["eta"]),
                lr=float(values["lr"]),
                epochs=int(values["epochs"]),
                batch_size=int(values["batch_size"]),
                K=None if values["K"] is None else int(values["K"]),
                L=None if values["L"] is None else int(values["L"]),
                n_hashes=self.n_hashes,
                seed=derive_seed(self.seed, f"train.layer{t}"),
                gradient_mode=self.gradient_mode,
                collaborative_sign=self.collaborative_sign,
            ))
        return cfgs

    def with_overrides(self, seed: Optional[int] = None, repeats: Optional[int] = None,
                       output_dir: Optional[str] = None) -> "RunConfig":
        """CLI flags win over file values"""
        changes = {}
        if seed is not None:
            changes["seed"] = seed
        if repeats is not None:
            changes["repeats"] = repeats
        if output_dir is not None:
            changes["output_dir"] = output_dir
        return replace(self, **changes)


class ConfigValidator:
    """Collects every config problem instead of stopping at the first"""

    def __init__(self, check_files: bool = True):
        self.check_files = check_files

    def validate(self, cfg: RunConfig) -> Tuple[bool, List[str]]:
        """
        Static checks that need no data

        Returns:
            (is_valid, errors) with every error prefixed by its field name
        """
        errors: List[str] = []

        if self.check_files and not Path(cfg.data_path).is_file():
            errors.append(f"data.path: file not found: {cfg.data_path}")
        if cfg.input_mode not in INPUT_MODES:
            errors.append(f"data.mode: must be one of {INPUT_MODES}, got '{cfg.input_mode}'")
        if len(cfg.delimiter) != 1:
            errors.append(f"data.delimiter: must be a single character, got '{cfg.delimiter}'")

        if cfg.n_layers < 1:
            errors.append(f"train.layers: must be >= 1, got {cfg.n_layers}")
        for index in cfg.layer_overrides:
            if not 1 <= index <= max(cfg.n_layers, 0):
                errors.append(f"layer.{index}: no such layer (train.layers = {cfg.n_layers})")
        if cfg.n_layers >= 1:
            for t, layer_cfg in enumerate(cfg.layer_configs()):
                try:
                    layer_cfg.validate()
                except ConfigError as e:
                    errors.append(f"layer.{t + 1}.{e.field}: {str(e).split(': ', 1)[1]}")

        if cfg.n_hashes < 1:
            errors.append(f"lsh.n_hashes: must be >= 1, got {cfg.n_hashes}")

        unknown = [a for a in cfg.algorithms if a not in ALGORITHMS]
        if not cfg.algorithms or unknown:
            errors.append(f"clustering.algorithms: choose from {ALGORITHMS}, got {list(cfg.algorithms)}")
        if cfg.k is not None and cfg.k < 1:
            errors.append(f"clustering.k: must be >= 1, got {cfg.k}")
        if cfg.k is not None and cfg.k < 2 and "spectral" in cfg.algorithms:
            errors.append("clustering.k: spectral clustering needs k >= 2")
        if cfg.n_init < 1:
            errors.append(f"clustering.n_init: must be >= 1, got {cfg.n_init}")
        if cfg.max_iter < 1:
            errors.append(f"clustering.max_iter: must be >= 1, got {cfg.max_iter}")
        if cfg.sigma is not None and cfg.sigma <= 0:
            errors.append(f"clustering.sigma: must be positive, got {cfg.sigma}")
        if cfg.repeats < 1:
            errors.append(f"clustering.repeats: must be >= 1, got {cfg.repeats}")

        unknown = [f for f in cfg.feature_sets if f not in KNOWN_FEATURE_SETS]
        if not cfg.feature_sets or unknown:
            errors.append(f"benchmark.feature_sets: choose from {KNOWN_FEATURE_SETS}, "
                          f"got {list(cfg.feature_sets)}")
        if cfg.metric not in METRICS:
            errors.append(f"benchmark.metric: choose from {tuple(METRICS)}, got '{cfg.metric}'")

        for error in errors:
            logger.error(f"[Config] ❌ {error}")
        return len(errors) == 0, errors

    def validate_dataset(self, cfg: RunConfig, d: Dataset,
                         require_labels: bool = False) -> Tuple[bool, List[str]]:
        """Checks that depend on N, M and the labels"""
        errors: List[str] = []
        N, M = d.n_instances, d.n_features
        for t, layer_cfg in enumerate(cfg.layer_configs()):
            try:
                layer_cfg.validate(N, M)
            except ConfigError as e:
                errors.append(f"layer.{t + 1}.{e.field}: {str(e).split(': ', 1)[1]}")
        if require_labels and not d.is_labeled:
            errors.append("data.label_column: dataset has no labels to evaluate against")
        # unlabeled data without [clustering] k is fine for training alone
        k = cfg.k if cfg.k is not None else d.n_classes
        if k is not None and not 1 <= k <= N:
            errors.append(f"clustering.k: must be in [1, {N}], got {k}")

        for error in errors:
            logger.error(f"[Config] ❌ {error}")
        return len(errors) == 0, errors
