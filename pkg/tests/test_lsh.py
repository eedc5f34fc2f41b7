import numpy as np
import pytest

from src.dataio.dataset import Dataset, RAW, STANDARDIZED, UNIT_INTERVAL
from src.lsh.hashing import (
    MINHASH,
    binarize_for_hash,
    jaccard_similarity,
    minhash_signature,
    sign_projection_signature,
)
from src.lsh.partition import (
    BlockPartition,
    _bucket,
    _merge_to,
    build_partition,
    default_group_count,
    export_partition,
    load_partition,
    partition_cols,
    partition_rows,
)


def _covers(groups, n):
    merged = np.sort(np.concatenate(groups))
    return np.array_equal(merged, np.arange(n)) and all(len(g) for g in groups)


class TestBinarize:
    def test_definition(self):
        out = binarize_for_hash(np.array([[1.0], [2.0], [3.0]]))
        np.testing.assert_array_equal(out[:, 0], [0, 0, 1])

    def test_constant_column(self):
        np.testing.assert_array_equal(binarize_for_hash(np.full((4, 1), 3.0))[:, 0], [0, 0, 0, 0])

    def test_against_sorted_median(self, rng):
        values = rng.normal(size=(10, 4))
        out = binarize_for_hash(values)
        for j in range(4):
            col = sorted(values[:, j])
            median = (col[4] + col[5]) / 2
            np.testing.assert_array_equal(out[:, j], (values[:, j] > median).astype(np.uint8))


class TestMinhash:
    def test_deterministic(self):
        a = minhash_signature({1, 5, 9}, 32, seed=3)
        b = minhash_signature({9, 1, 5}, 32, seed=3)
        np.testing.assert_array_equal(a.values, b.values)
        assert a.scheme == MINHASH
        assert len(a) == 32

    def test_empty_set_sentinel(self):
        sig = minhash_signature(set(), 8, seed=0)
        assert np.all(sig.values == sig.values.max())

    def test_disjoint_sets_rarely_collide(self):
        a, b = set(range(20)), set(range(100, 120))
        fractions = [
            minhash_signature(a, 128, seed).agreement(minhash_signature(b, 128, seed))
            for seed in range(100)
        ]
        assert np.mean(fractions) <= 0.02

    def test_collision_tracks_jaccard(self):
        a, b = set(range(0, 30)), set(range(10, 40))  # |a & b| = 20, |a | b| = 40
        assert jaccard_similarity(a, b) == 0.5
        fraction = minhash_signature(a, 512, seed=11).agreement(minhash_signature(b, 512, seed=11))
        assert abs(fraction - 0.5) <= 0.07

    def test_rejects_zero_hashes(self):
        with pytest.raises(ValueError):
            minhash_signature({1}, 0, seed=0)


class TestSignProjection:
    def test_scale_invariant(self, rng):
        v = rng.normal(size=6)
        np.testing.assert_array_equal(sign_projection_signature(v, 64, 5).values,
                                      sign_projection_signature(2 * v, 64, 5).values)

    def test_antisymmetric(self, rng):
        v = rng.normal(size=6)
        a = sign_projection_signature(v, 64, 5).values
        b = sign_projection_signature(-v, 64, 5).values
        np.testing.assert_array_equal(a + b, np.ones(64))

    def test_angle_agreement(self):
        u = np.array([1.0, 0.0])
        v = np.array([np.cos(np.pi / 3), np.sin(np.pi / 3)])
        fraction = sign_projection_signature(u, 1024, 9).agreement(sign_projection_signature(v, 1024, 9))
        assert abs(fraction - (1 - 60 / 180)) <= 0.05


class TestJaccardSimilarity:
    def test_cases(self):
        assert jaccard_similarity({1, 2}, {1, 2}) == 1.0
        assert jaccard_similarity({1}, {2}) == 0.0
        assert jaccard_similarity({1, 2, 3}, {2, 3, 4}) == 0.5
        assert jaccard_similarity(set(), set()) == 1.0


class TestPartitionRows:
    def test_single_group(self, rng):
        d = Dataset(values=rng.normal(size=(9, 3)), preprocessing=STANDARDIZED)
        groups = partition_rows(d, 1, 16, seed=0)
        assert len(groups) == 1
        np.testing.assert_array_equal(groups[0], np.arange(9))

    def test_singletons(self, rng):
        d = Dataset(values=rng.random((7, 4)), preprocessing=UNIT_INTERVAL)
        groups = partition_rows(d, 7, 16, seed=0)
        assert sorted(len(g) for g in groups) == [1] * 7
        assert _covers(groups, 7)

    def test_duplicate_families_stay_together(self, rng):
        base = rng.random((2, 12))
        values = np.vstack([np.repeat(base[:1], 5, axis=0), np.repeat(base[1:], 4, axis=0)])
        for mode in (UNIT_INTERVAL, STANDARDIZED):
            d = Dataset(values=values, preprocessing=mode)
            groups = partition_rows(d, 2, 32, seed=4)
            as_sets = sorted(tuple(g) for g in groups)
            assert as_sets == [(0, 1, 2, 3, 4), (5, 6, 7, 8)]

    def test_near_duplicates_share_a_group(self, rng):
        # three families of four rows; members differ from their family base in one
        # distinct position, so any two members agree on 18 of 20 positions
        n_families, n_members, n_positions = 3, 4, 20
        family_of = rng.permutation(np.repeat(np.arange(n_families), n_members))
        signatures = np.zeros((len(family_of), n_positions), dtype=np.uint64)
        seen = {f: 0 for f in range(n_families)}
        for row, family in enumerate(family_of):
            signatures[row] = family * 1000 + np.arange(n_positions)
            signatures[row, seen[family]] = 999_999 - row
            seen[family] += 1

        buckets = _bucket(signatures)
        assert len(buckets) == len(family_of)
        for K in (1, 2, n_families):
            for group in _merge_to(buckets, signatures, K):
                families = set(family_of[group].tolist())
                assert all(set(np.flatnonzero(family_of == f)) <= set(group) for f in families)
        groups = _merge_to(buckets, signatures, n_families)
        assert sorted(tuple(g) for g in groups) == sorted(
            tuple(np.flatnonzero(family_of == f)) for f in range(n_families))

    def test_out_of_range(self, rng):
        d = Dataset(values=rng.random((5, 2)), preprocessing=UNIT_INTERVAL)
        with pytest.raises(ValueError):
            partition_rows(d, 6, 8, seed=0)
        with pytest.raises(ValueError):
            partition_rows(d, 0, 8, seed=0)

    def test_seed_reproducible(self, rng):
        d = Dataset(values=rng.normal(size=(30, 6)), preprocessing=STANDARDIZED)
        a = partition_rows(d, 5, 16, seed=21)
        b = partition_rows(d, 5, 16, seed=21)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))

    def test_invariants_on_random_matrices(self):
        rng = np.random.default_rng(99)
        for trial in range(25):
            N, M = rng.integers(2, 15), rng.integers(2, 8)
            K, L = rng.integers(1, N + 1), rng.integers(1, M + 1)
            mode = (UNIT_INTERVAL, STANDARDIZED)[trial % 2]
            values = rng.random((N, M)) if mode == UNIT_INTERVAL else rng.normal(size=(N, M))
            d = Dataset(values=values, preprocessing=mode)
            part = build_partition(d, int(K), int(L), 8, row_seed=trial, col_seed=trial + 1)
            assert (part.K, part.L) == (K, L)
            assert _covers(part.row_groups, N)
            assert _covers(part.col_groups, M)

    def test_identical_rows_split_round_robin(self):
        d = Dataset(values=np.ones((6, 3)), preprocessing=UNIT_INTERVAL)
        groups = partition_rows(d, 3, 8, seed=0)
        assert len(groups) == 3
        assert _covers(groups, 6)


class TestPartitionCols:
    def test_trivial_counts(self, rng):
        d = Dataset(values=rng.random((6, 5)), preprocessing=UNIT_INTERVAL)
        assert len(partition_cols(d, 1, 8, seed=0)) == 1
        assert len(partition_cols(d, 5, 8, seed=0)) == 5

    def test_duplicate_column_families(self, rng):
        base = rng.normal(size=(10, 2))
        values = np.hstack([np.repeat(base[:, :1], 3, axis=1), np.repeat(base[:, 1:], 3, axis=1)])
        d = Dataset(values=values, preprocessing=STANDARDIZED)
        groups = partition_cols(d, 2, 32, seed=2)
        assert sorted(tuple(g) for g in groups) == [(0, 1, 2), (3, 4, 5)]


class TestBlockPartition:
    def test_rejects_overlap(self):
        with pytest.raises(ValueError):
            BlockPartition(row_groups=([0, 1], [1, 2]), col_groups=([0],), n_rows=3, n_cols=1)

    def test_rejects_empty_group(self):
        with pytest.raises(ValueError):
            BlockPartition(row_groups=([0, 1], []), col_groups=([0],), n_rows=2, n_cols=1)

    def test_restrict_rows(self):
        part = BlockPartition.from_groups([[0, 2], [1, 3], [4]], [[0], [1]])
        batch = part.restrict_rows([4, 2, 0])
        assert batch.n_rows == 3
        assert [list(g) for g in batch.row_groups] == [[1, 2], [0]]
        assert batch.L == 2

    def test_default_group_count(self):
        assert default_group_count(1) == 1
        assert default_group_count(10) == 4
        assert default_group_count(16) == 4

    def test_export_round_trip(self, tmp_path):
        part = BlockPartition.from_groups([[0, 3], [1, 2]], [[0, 2], [1]])
        path = export_partition(part, str(tmp_path / "p" / "layer1.txt"))
        assert path.read_text().splitlines()[0] == "row 0 0"
        back = load_partition(str(path))
        assert [list(g) for g in back.row_groups] == [[0, 3], [1, 2]]
        assert [list(g) for g in back.col_groups] == [[0, 2], [1]]

    def test_raw_dataset_uses_projection(self, rng):
        d = Dataset(values=rng.normal(size=(8, 3)), preprocessing=RAW)
        part = build_partition(d, 2, 2, 16, row_seed=1, col_seed=2)
        assert (part.K, part.L) == (2, 2)
