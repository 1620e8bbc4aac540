"""SMOTE balancing, batching, scaling and splitting for the experiment pipeline."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.model_selection import train_test_split
from sklearn.neighbors import NearestNeighbors
from sklearn.utils.validation import check_array, check_is_fitted

from .circuits import PreparedSample
from .exceptions import BalanceError, BatchError, ScalingError, SplitError


def interpolate(base, neighbor, gap):
    """SMOTE synthetic point ``base + gap * (neighbor - base)``."""
    base = np.asarray(base, dtype=float)
    return base + np.asarray(gap, dtype=float) * (np.asarray(neighbor, dtype=float) - base)


def smote_oversample(X, y, k=5, seed=None):
    """Append synthetic minority samples until every class matches the majority count.

    Each synthetic sample interpolates a uniformly drawn minority sample
    towards one of its ``k`` nearest minority neighbours (Euclidean) with a
    gap drawn uniformly from [0, 1). Already balanced input is returned as is.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if k < 1:
        raise BalanceError(f"k must be >= 1, got {k}")
    classes, counts = np.unique(y, return_counts=True)
    target = counts.max()
    if np.all(counts == target):
        return X.copy(), y.copy()

    rng = np.random.default_rng(seed)
    new_X, new_y = [X], [y]
    for cls, count in zip(classes, counts):
        need = target - count
        if need == 0:
            continue
        if count < 2:
            raise BalanceError(f"class {cls!r} has {count} sample(s); SMOTE needs at least 2")
        minority = X[y == cls]
        kk = min(k, count - 1)
        nn = NearestNeighbors(n_neighbors=kk + 1).fit(minority)
        neighbors = nn.kneighbors(minority, return_distance=False)[:, 1:]
        base = rng.integers(count, size=need)
        pick = neighbors[base, rng.integers(kk, size=need)]
        gap = rng.random(need)[:, None]
        new_X.append(interpolate(minority[base], minority[pick], gap))
        new_y.append(np.full(need, cls, dtype=y.dtype))
    return np.vstack(new_X), np.concatenate(new_y)


def make_batches(X, y, batch_size=100, count=4, seed=None):
    """Draw ``count`` disjoint, class-balanced batches without replacement.

    Returns a list of index arrays into ``X``/``y``.
    """
    y = np.asarray(y)
    classes = np.unique(y)
    if batch_size % len(classes):
        raise BatchError(f"batch size {batch_size} does not split evenly over {len(classes)} classes")
    per_class = batch_size // len(classes)
    rng = np.random.default_rng(seed)
    pools = []
    for cls in classes:
        idx = np.flatnonzero(y == cls)
        if idx.size < per_class * count:
            raise BatchError(
                f"class {cls!r} has {idx.size} rows, {count} batches need {per_class * count}"
            )
        pools.append(rng.permutation(idx)[: per_class * count].reshape(count, per_class))
    batches = []
    for b in range(count):
        batch = np.concatenate([pool[b] for pool in pools])
        batches.append(rng.permutation(batch))
    return batches


class StandardNormalizer(BaseEstimator, TransformerMixin):
    """Z-score each feature (population std), then scale each row to unit length.

    Raises ``ScalingError`` on a constant feature or on a row that lands
    exactly on the fitted mean, since neither can be amplitude-encoded.
    """

    def fit(self, X, y=None):
        X = check_array(X, dtype=float)
        self.mean_ = X.mean(axis=0)
        self.scale_ = X.std(axis=0)
        if np.any(self.scale_ == 0.0):
            bad = np.flatnonzero(self.scale_ == 0.0).tolist()
            raise ScalingError(f"zero-variance feature(s) at column(s) {bad}")
        self.n_features_in_ = X.shape[1]
        return self

    def standardize(self, X):
        check_is_fitted(self, "mean_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ScalingError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return (X - self.mean_) / self.scale_

    def transform(self, X):
        Z = self.standardize(X)
        norms = np.linalg.norm(Z, axis=1)
        if np.any(norms == 0.0):
            raise ScalingError(f"row(s) {np.flatnonzero(norms == 0.0).tolist()} standardize to zero")
        return Z / norms[:, None]


@dataclass
class ScalerStats:
    mean: np.ndarray
    std: np.ndarray

    def to_dict(self):
        return {"mean": [float(v) for v in self.mean], "std": [float(v) for v in self.std]}


@dataclass
class PreparedDataset:
    X: np.ndarray  # unit-norm rows
    y: np.ndarray
    scaler_stats: ScalerStats

    @property
    def class_pair(self) -> tuple:
        return tuple(np.unique(self.y).tolist())

    @property
    def samples(self) -> list:
        return [PreparedSample(x, label) for x, label in zip(self.X, self.y.tolist())]

    def to_lines(self) -> list:
        return [",".join([*(repr(float(v)) for v in x), str(label)]) for x, label in zip(self.X, self.y.tolist())]

    def export(self, path):
        Path(path).write_text("\n".join(self.to_lines()) + "\n")


def standardize_and_normalize(X, y, scaler_stats: ScalerStats | None = None) -> PreparedDataset:
    """Standardize with the given stats (or stats fitted on ``X``) and unit-normalize rows."""
    scaler = StandardNormalizer()
    if scaler_stats is None:
        scaler.fit(X)
    else:
        if np.any(np.asarray(scaler_stats.std) == 0.0):
            raise ScalingError("scaler stats contain a zero standard deviation")
        scaler.mean_ = np.asarray(scaler_stats.mean, dtype=float)
        scaler.scale_ = np.asarray(scaler_stats.std, dtype=float)
        scaler.n_features_in_ = scaler.mean_.size
    Xn = scaler.transform(X)
    return PreparedDataset(Xn, np.asarray(y).copy(), ScalerStats(scaler.mean_.copy(), scaler.scale_.copy()))


def train_val_split(y, train_fraction=0.7, seed=None):
    """Stratified split; returns ``(train_indices, validation_indices)``."""
    y = np.asarray(y)
    if not 0.0 < train_fraction < 1.0:
        raise SplitError(f"train fraction must lie in (0, 1), got {train_fraction}")
    if y.size < 10:
        raise SplitError(f"need at least 10 samples to split, got {y.size}")
    try:
        train, val = train_test_split(
            np.arange(y.size), train_size=train_fraction, stratify=y, random_state=seed
        )
    except ValueError as exc:
        raise SplitError(str(exc)) from exc
    return np.sort(train), np.sort(val)
