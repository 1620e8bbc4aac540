import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone

from qocc.datasets import load_dataset, select_features_and_classes
from qocc.exceptions import BalanceError, BatchError, ScalingError, SplitError
from qocc.preprocessing import (
    ScalerStats,
    StandardNormalizer,
    interpolate,
    make_batches,
    smote_oversample,
    standardize_and_normalize,
    train_val_split,
)


@pytest.fixture(scope="module")
def haberman():
    return select_features_and_classes(load_dataset("haberman"))


def test_interpolate_midpoint():
    assert interpolate([0, 0], [1, 1], 0.5).tolist() == [0.5, 0.5]
    assert interpolate([2, 3], [4, 5], 0.0).tolist() == [2, 3]


def test_smote_balanced_input_unchanged():
    X = np.arange(8.0).reshape(4, 2)
    y = np.array([0, 1, 0, 1])
    Xs, ys = smote_oversample(X, y, seed=0)
    assert np.array_equal(Xs, X) and np.array_equal(ys, y)


def test_smote_reaches_parity(haberman):
    Xs, ys = smote_oversample(haberman.X, haberman.y, k=5, seed=0)
    assert np.sum(ys == 1) == np.sum(ys == 2) == 225
    # originals are kept in front, untouched
    assert np.array_equal(Xs[:306], haberman.X)


def test_smote_deterministic(haberman):
    a = smote_oversample(haberman.X, haberman.y, seed=3)
    b = smote_oversample(haberman.X, haberman.y, seed=3)
    assert np.array_equal(a[0], b[0])


def test_smote_errors():
    with pytest.raises(BalanceError):
        smote_oversample([[0, 0], [1, 1], [2, 2]], [0, 0, 1])
    with pytest.raises(BalanceError):
        smote_oversample([[0, 0], [1, 1]], [0, 1], k=0)


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 12), st.integers(13, 30), st.integers(0, 2**31))
def test_smote_synthetic_points_lie_between_minority_samples(n_min, n_maj, seed):
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal(size=(n_min, 2)), rng.normal(5, 1, size=(n_maj, 2))])
    y = np.array([0] * n_min + [1] * n_maj)
    Xs, ys = smote_oversample(X, y, k=5, seed=seed)
    minority = X[:n_min]
    synth = Xs[n_min + n_maj:]
    assert np.all(ys[n_min + n_maj:] == 0)
    for p in synth:
        # p = a + g (b - a) with a, b minority samples and g in [0, 1)
        ok = False
        for a in minority:
            for b in minority:
                d = b - a
                denom = d @ d
                if denom == 0:
                    continue
                g = (p - a) @ d / denom
                if -1e-12 <= g <= 1 and np.allclose(a + g * d, p, atol=1e-9):
                    ok = True
                    break
            if ok:
                break
        assert ok


def test_batches_shape_and_balance(haberman):
    Xs, ys = smote_oversample(haberman.X, haberman.y, seed=0)
    batches = make_batches(Xs, ys, seed=1)
    assert len(batches) == 4
    for b in batches:
        assert len(b) == 100
        assert np.sum(ys[b] == 1) == np.sum(ys[b] == 2) == 50
    flat = np.concatenate(batches)
    assert len(np.unique(flat)) == 400
    again = make_batches(Xs, ys, seed=1)
    assert all(np.array_equal(a, b) for a, b in zip(batches, again))


def test_batch_errors():
    y = np.array([0] * 10 + [1] * 10)
    with pytest.raises(BatchError):
        make_batches(np.zeros((20, 2)), y, batch_size=100)
    with pytest.raises(BatchError):
        make_batches(np.zeros((20, 2)), y, batch_size=5, count=1)


def test_zscore_example():
    s = StandardNormalizer().fit([[1.0], [2.0], [3.0]])
    np.testing.assert_allclose(s.standardize([[1.0], [2.0], [3.0]]).ravel(),
                               [-1.2247449, 0.0, 1.2247449], atol=1e-6)


def test_unit_normalize_example():
    s = StandardNormalizer()
    s.mean_, s.scale_, s.n_features_in_ = np.zeros(2), np.ones(2), 2
    np.testing.assert_allclose(s.transform([[3.0, 4.0]]), [[0.6, 0.8]])


def test_normalizer_errors():
    with pytest.raises(ScalingError):
        StandardNormalizer().fit([[1.0, 2.0], [1.0, 3.0]])
    s = StandardNormalizer().fit([[0.0, 0.0], [2.0, 2.0]])
    with pytest.raises(ScalingError):
        s.transform([[1.0, 1.0]])
    with pytest.raises(ScalingError):
        standardize_and_normalize([[1.0, 2.0]], [0], ScalerStats(np.zeros(2), np.array([1.0, 0.0])))


def test_normalizer_is_sklearn_clonable():
    s = StandardNormalizer()
    assert clone(s).get_params() == {}


def test_scaler_uses_given_stats():
    stats = ScalerStats(np.array([1.0, 1.0]), np.array([2.0, 2.0]))
    out = standardize_and_normalize([[7.0, 9.0]], [0], stats)
    np.testing.assert_allclose(out.X, [[0.6, 0.8]])
    assert out.scaler_stats.to_dict() == {"mean": [1.0, 1.0], "std": [2.0, 2.0]}


def test_split_proportions_and_stratification():
    y = np.array([0] * 50 + [1] * 50)
    tr, va = train_val_split(y, 0.7, seed=4)
    assert len(tr) == 70 and len(va) == 30
    assert not set(tr) & set(va)
    assert abs(np.sum(y[va] == 0) - np.sum(y[va] == 1)) <= 1
    tr2, va2 = train_val_split(y, 0.7, seed=4)
    assert np.array_equal(tr, tr2) and np.array_equal(va, va2)


@settings(max_examples=50, deadline=None)
@given(st.integers(5, 60), st.integers(5, 60), st.floats(0.3, 0.8), st.integers(0, 2**31))
def test_split_disjoint_and_complete(n0, n1, frac, seed):
    y = np.array([0] * n0 + [1] * n1)
    tr, va = train_val_split(y, frac, seed)
    assert not set(tr.tolist()) & set(va.tolist())
    assert sorted([*tr, *va]) == list(range(n0 + n1))


def test_split_errors():
    with pytest.raises(SplitError):
        train_val_split([0, 1] * 3)
    with pytest.raises(SplitError):
        train_val_split([0, 1] * 10, 1.0)
    # one validation row cannot hold both classes
    with pytest.raises(SplitError):
        train_val_split([0, 1] * 5, 0.9)


def test_export_round_trip(tmp_path):
    data = standardize_and_normalize([[1.0, 2.0], [3.0, 1.0], [0.0, 0.0]], [0, 1, 1])
    path = tmp_path / "prepared.csv"
    data.export(path)
    rows = [line.split(",") for line in path.read_text().splitlines()]
    np.testing.assert_array_equal(np.array([r[:2] for r in rows], dtype=float), data.X)
    assert [int(r[2]) for r in rows] == [0, 1, 1]
    assert data.class_pair == (0, 1)
    assert len(data.samples) == 3
