import numpy as np
import pandas as pd
import pytest

from app.ucrd_cli import (
    EVALUATION_FILE,
    EXIT_INVALID,
    EXIT_OK,
    MODEL_FILE,
    REPORT_FILE,
    EvaluateOptions,
    cmd_benchmark,
    cmd_evaluate,
    cmd_train,
    main,
)
from src.metrics.friedman import aligned_ranks, friedman_aligned, write_metric_grid
from src.network.model_io import load
from tests.conftest import make_blobs
from tests.test_metrics import REAL_VALUED_MEANS


def blobs_csv(write_text, name="blobs.csv", seed=0):
    centers = np.array([[0.0, 0, 0, 0], [4.0, 0, 0, 0], [0.0, 4, 0, 0]])
    X, labels = make_blobs(12, centers, 0.3, seed=seed)
    lines = [",".join(repr(float(v)) for v in row) + f",c{label}" for row, label in zip(X, labels)]
    return write_text(name, "\n".join(lines) + "\n")


def run_config(write_text, name="run.ini", data="blobs.csv", algorithms="kmeans", extra=""):
    return write_text(name, f"""
[data]
path = {data}
label_column = -1
mode = real_valued

[train]
layers = 2
eta = 0.5
lr = 0.01
epochs = 2
batch_size = 9
seed = 3

[clustering]
algorithms = {algorithms}
n_init = 2
repeats = 1
{extra}
""")


class TestTrain:
    def test_writes_model_report_and_partitions(self, write_text, tmp_path):
        blobs_csv(write_text)
        config = run_config(write_text)
        out = tmp_path / "run"
        assert cmd_train(str(config), out=str(out)) == EXIT_OK

        net = load(str(out / MODEL_FILE))
        assert net.layer_sizes == [4, 4, 4]
        report = pd.read_csv(out / REPORT_FILE)
        assert report["layer"].tolist() == [1, 1, 2, 2]
        assert (out / "partitions" / "layer1.txt").is_file()
        assert (out / "partitions" / "layer2.txt").is_file()

    def test_reproducible_model_bytes(self, write_text, tmp_path):
        blobs_csv(write_text)
        config = run_config(write_text)
        assert cmd_train(str(config), out=str(tmp_path / "a")) == EXIT_OK
        assert cmd_train(str(config), out=str(tmp_path / "b")) == EXIT_OK
        assert (tmp_path / "a" / MODEL_FILE).read_bytes() == (tmp_path / "b" / MODEL_FILE).read_bytes()

    def test_missing_data_file(self, write_text, tmp_path):
        config = run_config(write_text, data="absent.csv")
        assert cmd_train(str(config), out=str(tmp_path / "run")) == EXIT_INVALID

    def test_batch_larger_than_dataset(self, write_text, tmp_path):
        blobs_csv(write_text)
        config = run_config(write_text, extra="[layer.2]\nbatch_size = 100\n")
        assert cmd_train(str(config), out=str(tmp_path / "run")) == EXIT_INVALID

    def test_missing_config(self, tmp_path):
        assert cmd_train(str(tmp_path / "absent.ini")) == EXIT_INVALID


class TestEvaluate:
    @pytest.fixture
    def trained(self, write_text, tmp_path):
        data = blobs_csv(write_text)
        config = run_config(write_text)
        assert cmd_train(str(config), out=str(tmp_path / "run")) == EXIT_OK
        return tmp_path / "run" / MODEL_FILE, data

    def test_single_repeat(self, trained, tmp_path):
        model, data = trained
        options = EvaluateOptions(out_dir=str(tmp_path / "eval"), repeats=1, seed=4)
        assert cmd_evaluate(str(model), str(data), options) == EXIT_OK
        table = pd.read_csv(tmp_path / "eval" / EVALUATION_FILE)
        assert set(table["algorithm"]) == {"kmeans", "spectral"}
        assert np.all(table["accuracy_std"] == 0.0)
        assert np.all((table["accuracy_mean"] >= 1 / 3) & (table["accuracy_mean"] <= 1.0))

    def test_reproducible(self, trained, tmp_path):
        model, data = trained
        for name in ("a", "b"):
            options = EvaluateOptions(out_dir=str(tmp_path / name), repeats=2, seed=4)
            assert cmd_evaluate(str(model), str(data), options) == EXIT_OK
        assert (tmp_path / "a" / EVALUATION_FILE).read_bytes() == (tmp_path / "b" / EVALUATION_FILE).read_bytes()

    def test_unlabeled_data(self, trained, write_text, tmp_path):
        model, _ = trained
        rows = np.random.default_rng(1).normal(size=(10, 4))
        data = write_text("unlabeled.csv", "\n".join(",".join(repr(float(v)) for v in row) for row in rows))
        options = EvaluateOptions(out_dir=str(tmp_path / "eval"), label_column=None)
        assert cmd_evaluate(str(model), str(data), options) == EXIT_INVALID

    def test_missing_model(self, trained, tmp_path):
        _, data = trained
        options = EvaluateOptions(out_dir=str(tmp_path / "eval"))
        assert cmd_evaluate(str(tmp_path / "absent.ucrd"), str(data), options) == EXIT_INVALID


class TestBenchmark:
    def summary(self, out):
        return pd.read_csv(out / "friedman_summary.csv").iloc[0]

    def test_precomputed_grid(self, tmp_path):
        write_metric_grid(REAL_VALUED_MEANS, str(tmp_path / "grids" / "real_valued.csv"))
        out = tmp_path / "bench"
        assert cmd_benchmark(str(tmp_path / "grids"), out=str(out)) == EXIT_OK

        expected = friedman_aligned(aligned_ranks(REAL_VALUED_MEANS))
        summary = self.summary(out)
        assert summary["T"] == pytest.approx(expected.T, rel=1e-9)
        assert summary["T"] == pytest.approx(67.5391, abs=1e-4)
        assert summary["p"] == pytest.approx(4.636e-12, rel=0.01)
        assert summary["dof"] == 7
        assert not summary["degenerate"]
        ranks = pd.read_csv(out / "aligned_ranks.csv", index_col=0)
        assert list(ranks.index[-2:]) == ["total", "average"]
        assert ranks.loc["total", "total"] == pytest.approx(96 * 97 / 2)

    def test_random_grid(self, tmp_path, rng):
        grid = pd.DataFrame(rng.random((3, 4)), index=["d1", "d2", "d3"], columns=["a", "b", "c", "e"])
        write_metric_grid(grid, str(tmp_path / "grids" / "random.csv"))
        out = tmp_path / "bench"
        assert cmd_benchmark(str(tmp_path / "grids"), out=str(out)) == EXIT_OK
        expected = friedman_aligned(aligned_ranks(grid))
        summary = self.summary(out)
        assert summary["T"] == pytest.approx(expected.T, rel=1e-9)
        assert summary["p"] == pytest.approx(expected.p, rel=1e-6)

    def test_all_tied_grid(self, tmp_path):
        grid = pd.DataFrame(np.full((2, 2), 0.5), index=["d1", "d2"], columns=["a", "b"])
        write_metric_grid(grid, str(tmp_path / "grids" / "tied.csv"))
        out = tmp_path / "bench"
        assert cmd_benchmark(str(tmp_path / "grids"), out=str(out)) == EXIT_OK
        summary = self.summary(out)
        assert summary["T"] == 0.0
        assert summary["degenerate"]

    def test_too_small_grid(self, tmp_path):
        grid = pd.DataFrame([[0.1, 0.2, 0.3]], index=["d1"], columns=["a", "b", "c"])
        write_metric_grid(grid, str(tmp_path / "grids" / "small.csv"))
        assert cmd_benchmark(str(tmp_path / "grids"), out=str(tmp_path / "bench")) == EXIT_INVALID

    def test_empty_directory(self, tmp_path):
        (tmp_path / "empty").mkdir()
        assert cmd_benchmark(str(tmp_path / "empty")) == EXIT_INVALID

    def test_run_configs(self, write_text, tmp_path):
        for i in range(2):
            blobs_csv(write_text, name=f"configs/blobs{i}.csv", seed=i)
            run_config(write_text, name=f"configs/run{i}.ini", data=f"blobs{i}.csv",
                       algorithms="kmeans,spectral", extra="[benchmark]\nfeature_sets = raw\n")
        out = tmp_path / "bench"
        assert cmd_benchmark(str(tmp_path / "configs"), out=str(out), repeats=1) == EXIT_OK

        grid = pd.read_csv(out / "metric_matrix.csv", index_col=0)
        assert list(grid.index) == ["blobs0", "blobs1"]
        assert list(grid.columns) == ["raw-kmeans", "raw-spectral"]
        assert np.all((grid.to_numpy() >= 1 / 3) & (grid.to_numpy() <= 1.0))
        assert self.summary(out)["n_datasets"] == 2


class TestMain:
    def test_train_command(self, write_text, tmp_path):
        blobs_csv(write_text)
        config = run_config(write_text)
        out = tmp_path / "run"
        assert main(["train", "--config", str(config), "--out", str(out), "--seed", "5"]) == EXIT_OK
        assert (out / MODEL_FILE).is_file()

    def test_invalid_config_value(self, write_text, tmp_path):
        blobs_csv(write_text)
        config = run_config(write_text, extra="[lsh]\nn_hashes = many\n")
        assert main(["train", "--config", str(config), "--out", str(tmp_path / "run")]) == EXIT_INVALID
