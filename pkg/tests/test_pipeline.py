import numpy as np
import pandas as pd
import pytest

from src.dataio.dataset import STANDARDIZED, UNIT_INTERVAL, Dataset
from src.network.ucrdnet import BINARY_INPUT, REAL_VALUED
from src.pipeline import UCRDPipeline, cluster, preprocess, score, summarize
from src.validation.validator import RunConfig
from tests.conftest import make_blobs


def blobs_config(write_text, feature_sets="raw,rbm,ucrdnet"):
    centers = np.array([[0.0, 0, 0], [5.0, 0, 0]])
    X, labels = make_blobs(10, centers, 0.3, seed=2)
    write_text("blobs.csv", "\n".join(",".join(repr(float(v)) for v in row) + f",{label}"
                                      for row, label in zip(X, labels)))
    config = write_text("run.ini", f"""
[data]
path = blobs.csv
[train]
layers = 1
epochs = 2
batch_size = 5
[clustering]
algorithms = kmeans
n_init = 2
repeats = 2
[benchmark]
feature_sets = {feature_sets}
""")
    return RunConfig.from_file(str(config))


class TestHelpers:
    def test_preprocess_follows_input_mode(self, rng):
        d = Dataset(values=rng.normal(size=(6, 2)))
        assert preprocess(d, REAL_VALUED).preprocessing == STANDARDIZED
        assert preprocess(d, BINARY_INPUT).preprocessing == UNIT_INTERVAL

    def test_summarize_population_std(self):
        row = summarize([{"accuracy": 1.0, "jaccard": 0.5, "fmi": 0.2},
                         {"accuracy": 0.5, "jaccard": 0.5, "fmi": 0.4}])
        assert row["accuracy_mean"] == 0.75
        assert row["accuracy_std"] == 0.25
        assert row["jaccard_std"] == 0.0
        assert row["fmi_mean"] == pytest.approx(0.3)

    def test_score_perfect(self):
        labels = np.array([0, 0, 1, 1])
        assert score(labels[::-1], labels) == {"accuracy": 1.0, "jaccard": 1.0, "fmi": 1.0}

    def test_unknown_algorithm(self, rng):
        with pytest.raises(ValueError):
            cluster(rng.normal(size=(5, 2)), "dbscan", 2, seed=0, n_init=1, max_iter=10)


class TestUCRDPipeline:
    def test_run(self, write_text):
        result = UCRDPipeline(blobs_config(write_text), verbose=False).run()
        assert result["dataset"] == "blobs"
        assert set(result["timing"]) == {"load", "features", "clustering", "total"}
        table = result["results"]
        assert table["feature_set"].tolist() == ["raw", "rbm", "ucrdnet"]
        assert table.loc[0, "accuracy_mean"] == 1.0

    def test_metric_row(self, write_text):
        cfg = blobs_config(write_text, feature_sets="raw")
        pipeline = UCRDPipeline(cfg, verbose=False)
        row = pipeline.metric_row(pipeline.run()["results"], metric="fmi")
        assert row.name == "blobs"
        assert list(row.index) == ["raw-kmeans"]
        assert row["raw-kmeans"] == 1.0

    def test_rbm_and_ucrdnet_features_differ(self, write_text):
        pipeline = UCRDPipeline(blobs_config(write_text), verbose=False)
        d = pipeline.load()
        rbm = pipeline.features(d, "rbm")
        ucrd = pipeline.features(d, "ucrdnet")
        assert rbm.shape == ucrd.shape == (20, 3)
        assert not np.array_equal(rbm, ucrd)

    def test_unlabeled_run(self, write_text):
        cfg = blobs_config(write_text)
        cfg.label_column = None
        write_text("blobs.csv", "1.0,2.0\n3.0,4.0\n5.0,6.0\n")
        with pytest.raises(ValueError):
            UCRDPipeline(cfg, verbose=False).run()

    def test_evaluate_columns(self, write_text, rng):
        pipeline = UCRDPipeline(blobs_config(write_text), verbose=False)
        table = pipeline.evaluate(rng.normal(size=(8, 2)), np.array([0, 1] * 4), 2)
        assert isinstance(table, pd.DataFrame)
        assert list(table.columns) == ["algorithm", "accuracy_mean", "accuracy_std", "jaccard_mean",
                                       "jaccard_std", "fmi_mean", "fmi_std"]
