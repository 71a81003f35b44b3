import numpy as np
import pytest

from pufc import dataset as ds


class TestLoadCsv:
    def test_label_mapping(self, csv_file):
        path = csv_file([("f1", "label"), (1.0, "a"), (2.0, "b"), (3.0, "a")])
        d = ds.load_csv(path, "label", "a")
        assert d.labels.tolist() == [1, -1, 1]
        assert d.features[:, 0].tolist() == [1.0, 2.0, 3.0]

    def test_label_column_by_index(self, csv_file):
        path = csv_file([("label", "f1"), ("y", 0.5), ("n", 1.5)])
        d = ds.load_csv(path, 0, "y")
        assert d.labels.tolist() == [1, -1]
        assert d.feature_names == ("f1",)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ds.DataError, match="cannot read"):
            ds.load_csv(str(tmp_path / "absent.csv"), "label", "a")

    def test_bad_cell_reports_row_and_column(self, csv_file):
        path = csv_file([("f1", "label"), (1.0, "a"), ("oops", "b")])
        with pytest.raises(ds.DataError, match=r"row 3, column 'f1'"):
            ds.load_csv(path, "label", "a")

    def test_single_class_after_mapping(self, csv_file):
        path = csv_file([("f1", "label"), (1.0, "a"), (2.0, "a")])
        with pytest.raises(ds.DataError, match="single class"):
            ds.load_csv(path, "label", "a")

    def test_drop_columns(self, csv_file):
        path = csv_file([("f1", "f2", "label"), (1.0, 9.0, "a"), (2.0, 9.0, "b")])
        d = ds.load_csv(path, "label", "a", drop_columns=["f2"])
        assert d.feature_names == ("f1",)


class TestStandardize:
    def test_hand_zscore(self):
        d = ds.Dataset("t", np.array([[0.0], [2.0], [4.0]]),
                       np.array([1, -1, 1]), ("x",))
        z = ds.standardize(d, [0, 1, 2])
        np.testing.assert_allclose(z.features[:, 0], [-1.2247, 0.0, 1.2247], atol=1e-4)

    def test_constant_feature_centered(self):
        d = ds.Dataset("t", np.array([[5.0, 1.0], [5.0, 2.0]]),
                       np.array([1, -1]), ("a", "b"))
        z = ds.standardize(d, [0, 1])
        assert np.all(z.features[:, 0] == 0.0)

    def test_single_row_source_maps_to_zero(self):
        d = ds.Dataset("t", np.array([[3.0], [7.0]]), np.array([1, -1]), ("x",))
        z = ds.standardize(d, [0])
        assert np.all(z.features[0] == 0.0)

    def test_idempotent(self, two_gaussians):
        d = two_gaussians()
        idx = np.arange(d.n)
        once = ds.standardize(d, idx)
        twice = ds.standardize(once, idx)
        np.testing.assert_allclose(twice.features, once.features, atol=1e-12)

    def test_test_rows_do_not_influence_stats(self, two_gaussians):
        # protocol isolation: perturbing a held-out row leaves the transform
        # of training rows unchanged
        d = two_gaussians()
        train = np.arange(0, 350)
        feats = d.features.copy()
        feats[390] += 100.0
        perturbed = ds.Dataset(d.name, feats, d.labels, d.feature_names)
        a = ds.standardize(d, train)
        b = ds.standardize(perturbed, train)
        np.testing.assert_array_equal(a.features[train], b.features[train])


class TestStratifiedKFold:
    def test_exact_divisibility(self, two_gaussians):
        d = two_gaussians(n=50)   # 100 rows balanced
        plan = ds.stratified_k_fold(d, 10, 0)
        for t in plan.test_sets:
            assert t.size == 10
            assert np.sum(d.labels[t] == 1) == 5

    def test_partition_properties(self, two_gaussians):
        d = two_gaussians(n=171)
        plan = ds.stratified_k_fold(d, 10, 3)
        all_idx = np.concatenate(plan.test_sets)
        assert sorted(all_idx.tolist()) == list(range(d.n))
        for cls in (1, -1):
            n_cls = int(np.sum(d.labels == cls))
            for t in plan.test_sets:
                cnt = int(np.sum(d.labels[t] == cls))
                assert abs(cnt - n_cls / 10) <= 1

    def test_uneven_sizes_near_90_10(self):
        # 1372 rows with the 762/610 class split of the banknote corpus
        rng = np.random.default_rng(0)
        X = rng.normal(size=(1372, 2))
        y = np.array([1] * 762 + [-1] * 610)
        d = ds.Dataset("t", X, y, ("a", "b"))
        plan = ds.stratified_k_fold(d, 10, 0)
        sizes = {t.size for t in plan.test_sets}
        assert sizes <= {137, 138}
        for j in range(10):
            assert plan.train_indices(j).size in (1234, 1235)

    def test_deterministic(self, two_gaussians):
        d = two_gaussians()
        a = ds.stratified_k_fold(d, 10, 42)
        b = ds.stratified_k_fold(d, 10, 42)
        for ta, tb in zip(a.test_sets, b.test_sets):
            np.testing.assert_array_equal(ta, tb)

    def test_class_smaller_than_k(self):
        X = np.arange(10, dtype=float)[:, None]
        y = np.array([1] * 7 + [-1] * 3)
        d = ds.Dataset("t", X, y, ("x",))
        with pytest.raises(ds.DataError, match="fewer than k"):
            ds.stratified_k_fold(d, 5, 0)


class TestMakePuView:
    def test_count_rule(self, two_gaussians):
        d = two_gaussians(n=10)
        pu = ds.make_pu_view(d, np.arange(d.n), 0.5, 0)
        assert pu.positive_indices.size == 5
        hidden_pos = [i for i in pu.unlabeled_indices if d.labels[i] == 1]
        assert len(hidden_pos) == 5

    def test_full_fraction(self, two_gaussians):
        d = two_gaussians(n=20)
        pu = ds.make_pu_view(d, np.arange(d.n), 1.0, 0)
        assert np.all(d.labels[pu.positive_indices] == 1)
        assert np.all(d.labels[pu.unlabeled_indices] == -1)

    def test_deterministic(self, two_gaussians):
        d = two_gaussians()
        a = ds.make_pu_view(d, np.arange(d.n), 0.3, 9)
        b = ds.make_pu_view(d, np.arange(d.n), 0.3, 9)
        np.testing.assert_array_equal(a.positive_indices, b.positive_indices)

    def test_partition_and_purity(self, two_gaussians):
        d = two_gaussians()
        train = np.arange(0, 300)
        pu = ds.make_pu_view(d, train, 0.4, 1)
        assert np.all(d.labels[pu.positive_indices] == 1)
        merged = sorted(pu.positive_indices.tolist() + pu.unlabeled_indices.tolist())
        assert merged == sorted(train.tolist())

    def test_rounding_half_up(self, two_gaussians):
        d = two_gaussians(n=5)   # 5 positives
        pu = ds.make_pu_view(d, np.arange(d.n), 0.3, 0)   # 1.5 rounds up
        assert pu.positive_indices.size == 2

    def test_bad_fraction(self, two_gaussians):
        d = two_gaussians()
        with pytest.raises(ds.DataError):
            ds.make_pu_view(d, np.arange(d.n), 0.0, 0)


class TestBinarize:
    def _d(self):
        X = np.array([[1.0, 10.0], [2.0, 20.0], [3.0, 30.0], [4.0, 40.0]])
        y = np.array([1, -1, 1, -1])
        return ds.Dataset("t", X, y, ("a", "rings"))

    def test_threshold_and_drop(self):
        d = ds.binarize(self._d(), "rings", 20.0)
        assert d.labels.tolist() == [1, 1, -1, -1]
        assert d.feature_names == ("a",)

    def test_keep_column(self):
        d = ds.binarize(self._d(), "rings", 20.0, drop_column=False)
        assert d.d == 2

    def test_degenerate_threshold_reported(self):
        with pytest.raises(ds.DataError, match="each class"):
            ds.binarize(self._d(), "rings", 5.0)

    def test_missing_column(self):
        with pytest.raises(ds.DataError, match="not found"):
            ds.binarize(self._d(), "nope", 1.0)


class TestManifests:
    def test_round_trip_text(self, two_gaussians):
        d = two_gaussians(n=10)
        plan = ds.stratified_k_fold(d, 2, 0)
        text = ds.fold_plan_manifest(plan)
        assert text.startswith("# folds=2 seed=0\n")
        assert len(text.strip().splitlines()) == 3
        pu = ds.make_pu_view(d, np.arange(d.n), 0.5, 0)
        m = ds.pu_view_manifest(pu)
        assert m.splitlines()[1].startswith("P ")
        assert m.splitlines()[2].startswith("U ")
