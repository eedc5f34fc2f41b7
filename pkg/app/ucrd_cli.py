"""
UCRD command line
train / evaluate / benchmark, exit codes: 0 success, 1 runtime failure, 2 validation failure
"""

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import pandas as pd
from tqdm import tqdm

from src.config import ALGORITHMS, KMEANS_MAX_ITER, KMEANS_N_INIT, LOG_LEVEL, MAX_WORKERS, OUTPUT_DIR, REPEATS, SEED
from src.dataio.dataset import load_csv
from src.errors import ConfigError
from src.lsh.partition import export_partition
from src.metrics.friedman import (
    aligned_ranks,
    friedman_aligned,
    rank_table_to_frame,
    read_metric_grid,
    write_metric_grid,
)
from src.network.model_io import load, save
from src.pipeline import UCRDPipeline, evaluate_model, preprocess
from src.validation.validator import ConfigValidator, RunConfig

logger = logging.getLogger("ucrd")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2

MODEL_FILE = "model.ucrd"
REPORT_FILE = "train_report.csv"
EVALUATION_FILE = "evaluation.csv"


def _invalid(errors: Sequence[str]) -> int:
    for error in errors:
        logger.error(f"[CLI] ❌ {error}")
    return EXIT_INVALID


def _load_config(config_path: str, seed: Optional[int], repeats: Optional[int],
                 out: Optional[str]) -> Tuple[Optional[RunConfig], List[str]]:
    try:
        cfg = RunConfig.from_file(config_path).with_overrides(seed=seed, repeats=repeats, output_dir=out)
    except ConfigError as e:
        return None, [str(e)]
    is_valid, errors = ConfigValidator().validate(cfg)
    return (cfg if is_valid else None), errors


# ============================================
# train
# ============================================

def cmd_train(config_path: str, seed: Optional[int] = None, out: Optional[str] = None,
              verbose: bool = False) -> int:
    cfg, errors = _load_config(config_path, seed, None, out)
    if cfg is None:
        return _invalid(errors)

    pipeline = UCRDPipeline(cfg, verbose=verbose)
    d = pipeline.load()
    is_valid, errors = ConfigValidator().validate_dataset(cfg, d)
    if not is_valid:
        return _invalid(errors)

    trained = pipeline.train(d)
    out_dir = Path(cfg.output_dir)
    model_path = save(trained.net, str(out_dir / MODEL_FILE))

    frames = []
    for t, report in enumerate(trained.reports):
        frame = report.to_frame()
        frame.insert(0, "layer", t + 1)
        frames.append(frame)
    pd.concat(frames, ignore_index=True).to_csv(out_dir / REPORT_FILE, index=False)

    for t, part in enumerate(trained.partitions):
        export_partition(part, str(out_dir / "partitions" / f"layer{t + 1}.txt"))

    logger.info(f"[CLI] ✅ Model written to {model_path}")
    return EXIT_OK


# ============================================
# evaluate
# ============================================

@dataclass
class EvaluateOptions:
    out_dir: Optional[str] = None
    config: Optional[str] = None
    seed: Optional[int] = None
    repeats: Optional[int] = None
    label_column: Optional[int] = -1
    delimiter: str = ","
    has_header: bool = False
    verbose: bool = False


def _evaluation_config(data_path: str, options: EvaluateOptions) -> RunConfig:
    if options.config:
        cfg = RunConfig.from_file(options.config)
    else:
        cfg = RunConfig(data_path=data_path, label_column=options.label_column,
                        delimiter=options.delimiter, has_header=options.has_header,
                        algorithms=ALGORITHMS, n_init=KMEANS_N_INIT, max_iter=KMEANS_MAX_ITER,
                        repeats=REPEATS, seed=SEED)
    return cfg.with_overrides(seed=options.seed, repeats=options.repeats, output_dir=options.out_dir)


def cmd_evaluate(model_path: str, data_path: str, options: Optional[EvaluateOptions] = None) -> int:
    options = options or EvaluateOptions()
    try:
        cfg = _evaluation_config(data_path, options)
    except ConfigError as e:
        return _invalid([str(e)])
    is_valid, errors = ConfigValidator(check_files=False).validate(cfg)
    if not is_valid:
        return _invalid(errors)
    for label, path in (("--model", model_path), ("--data", data_path)):
        if not Path(path).is_file():
            return _invalid([f"{label}: file not found: {path}"])

    net = load(model_path)
    raw = load_csv(data_path, label_column=cfg.label_column, delimiter=cfg.delimiter,
                   has_header=cfg.has_header)
    if not raw.is_labeled:
        return _invalid(["--data: evaluation needs a labeled dataset (set label_column)"])
    d = preprocess(raw, net.input_mode)
    k = cfg.k if cfg.k is not None else d.n_classes
    if not 1 <= k <= d.n_instances:
        return _invalid([f"clustering.k: must be in [1, {d.n_instances}], got {k}"])

    table = evaluate_model(net, d, cfg, verbose=options.verbose)
    out = Path(cfg.output_dir) / EVALUATION_FILE
    out.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(out, index=False)
    logger.info(f"[CLI] ✅ Evaluation of {len(table)} algorithm(s) written to {out}")
    return EXIT_OK


# ============================================
# benchmark
# ============================================

def _benchmark_row(cfg: RunConfig, verbose: bool) -> pd.Series:
    pipeline = UCRDPipeline(cfg, verbose=verbose)
    return pipeline.metric_row(pipeline.run()["results"])


def cmd_benchmark(configs_dir: str, out: Optional[str] = None, seed: Optional[int] = None,
                  repeats: Optional[int] = None, verbose: bool = False) -> int:
    """
    Aggregate a metric grid from run configs (*.ini) and precomputed grids (*.csv),
    then rank it and run the Friedman aligned-ranks test
    """
    directory = Path(configs_dir)
    if not directory.is_dir():
        return _invalid([f"--config: not a directory: {configs_dir}"])
    ini_files = sorted(directory.glob("*.ini"))
    csv_files = sorted(directory.glob("*.csv"))
    if not ini_files and not csv_files:
        return _invalid([f"--config: no *.ini or *.csv files in {configs_dir}"])

    configs = []
    for path in ini_files:
        cfg, errors = _load_config(str(path), seed, repeats, None)
        if cfg is None:
            return _invalid([f"{path.name}: {e}" for e in errors])
        configs.append(cfg)

    rows: List[Optional[pd.Series]] = [None] * len(configs)
    if configs:
        with ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
            futures = {executor.submit(_benchmark_row, cfg, False): i for i, cfg in enumerate(configs)}
            for future in tqdm(as_completed(futures), total=len(futures),
                               desc="[Benchmark] datasets", disable=not verbose):
                rows[futures[future]] = future.result()

    frames = []
    if rows:
        frames.append(pd.DataFrame(rows))
    for path in csv_files:
        try:
            frames.append(read_metric_grid(str(path)))
        except ValueError as e:
            return _invalid([str(e)])

    columns = list(frames[0].columns)
    if any(list(f.columns) != columns for f in frames[1:]):
        return _invalid(["benchmark: grids disagree on the algorithm columns"])
    grid = pd.concat(frames)
    grid.index = grid.index.astype(str)
    if grid.shape[0] < 2 or grid.shape[1] < 2:
        return _invalid([f"benchmark: need >= 2 datasets x >= 2 algorithms, got {grid.shape}"])
    if grid.isna().to_numpy().any():
        return _invalid(["benchmark: metric grid has missing cells"])

    rt = aligned_ranks(grid)
    result = friedman_aligned(rt)

    out_dir = Path(out) if out else Path(OUTPUT_DIR) / "benchmark"
    write_metric_grid(grid, str(out_dir / "metric_matrix.csv"))
    rank_table_to_frame(rt).to_csv(out_dir / "aligned_ranks.csv")
    summary = pd.DataFrame([{
        "n_datasets": rt.n_datasets,
        "n_algorithms": rt.n_algorithms,
        "T": result.T,
        "dof": result.dof,
        "p": result.p,
        "degenerate": result.degenerate,
        "best_algorithm": rt.algorithms[int(rt.average_ranks.argmin())],
    }])
    summary.to_csv(out_dir / "friedman_summary.csv", index=False)

    logger.info(f"[CLI] ✅ Friedman aligned ranks over {rt.n_datasets}x{rt.n_algorithms}: "
                f"T={result.T:.4f}, p={result.p:.4g}" + (" (degenerate)" if result.degenerate else ""))
    return EXIT_OK


# ============================================
# entry point
# ============================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ucrd", description="Collaborative deep features + clustering evaluation")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (overrides [output] dir)")
    common.add_argument("--seed", type=int, help="master seed (overrides the config)")
    common.add_argument("--repeats", type=int, help="clustering repeats per algorithm")
    common.add_argument("--verbose", action="store_true")

    sub = parser.add_subparsers(dest="command", required=True)

    train_p = sub.add_parser("train", parents=[common], help="train a UCRDNet from a run config")
    train_p.add_argument("--config", required=True)

    eval_p = sub.add_parser("evaluate", parents=[common], help="cluster a model's features")
    eval_p.add_argument("--model", required=True)
    eval_p.add_argument("--data", required=True)
    eval_p.add_argument("--config", help="run config supplying [data] and [clustering] options")
    eval_p.add_argument("--label-column", type=int, default=-1)
    eval_p.add_argument("--delimiter", default=",")

    bench_p = sub.add_parser("benchmark", parents=[common], help="Friedman aligned ranks over a grid")
    bench_p.add_argument("--config", required=True, help="directory of *.ini run configs / *.csv grids")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else LOG_LEVEL, format="%(message)s")

    try:
        if args.command == "train":
            return cmd_train(args.config, seed=args.seed, out=args.out, verbose=args.verbose)
        if args.command == "evaluate":
            options = EvaluateOptions(
                out_dir=args.out, config=args.config, seed=args.seed,
                repeats=args.repeats, label_column=args.label_column,
                delimiter=args.delimiter, verbose=args.verbose,
            )
            return cmd_evaluate(args.model, args.data, options)
        return cmd_benchmark(args.config, out=args.out, seed=args.seed,
                             repeats=args.repeats, verbose=args.verbose)
    except ConfigError as e:
        return _invalid([str(e)])
    except Exception as e:
        logger.error(f"[CLI] ❌ {args.command} failed: {type(e).__name__}: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
