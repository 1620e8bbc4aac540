"""Loaders for the Iris, Haberman's Survival and Skin Segmentation files.

Expected formats (no header line in any of them):

* iris: ``sepal_length,sepal_width,petal_length,petal_width,Iris-<name>``
* haberman: ``age,year,nodes,class`` with class in {1, 2}
* skin: tab separated ``B<TAB>G<TAB>R<TAB>class`` with class in {1, 2}

Iris and Haberman ship with the package; the Skin file (``Skin_NonSkin.txt``
from the UCI repository) must be supplied by path.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from ..exceptions import ConfigError, DatasetParseError

IRIS_CLASSES = ("Iris-setosa", "Iris-versicolor", "Iris-virginica")

# name -> (n_features, n_classes, n_instances)
SCHEMAS = {
    "iris": (4, 3, 150),
    "haberman": (3, 2, 306),
    "skin": (3, 2, 245057),
}
FEATURE_NAMES = {
    "iris": ("sepal_length", "sepal_width", "petal_length", "petal_width"),
    "haberman": ("age", "year", "nodes"),
    "skin": ("B", "G", "R"),
}
# two features per dataset, so a sample fits on one data qubit
SELECTED_FEATURES = {
    "iris": ("sepal_width", "petal_length"),
    "haberman": ("age", "nodes"),
    "skin": ("R", "B"),
}
BUNDLED = {"iris": "iris.data", "haberman": "haberman.data"}


@dataclass
class RawDataset:
    name: str
    X: np.ndarray
    y: np.ndarray
    feature_names: tuple

    def __len__(self):
        return len(self.y)

    @property
    def classes(self) -> np.ndarray:
        return np.unique(self.y)


def _check_name(name):
    if name not in SCHEMAS:
        raise ConfigError(f"unknown dataset {name!r}; expected one of {sorted(SCHEMAS)}")


def _parse_label(name, token, lineno):
    if name == "iris":
        try:
            return IRIS_CLASSES.index(token)
        except ValueError:
            raise DatasetParseError(f"unknown iris class {token!r}", lineno) from None
    try:
        label = int(token)
    except ValueError:
        raise DatasetParseError(f"class {token!r} is not an integer", lineno) from None
    if label not in (1, 2):
        raise DatasetParseError(f"class {label} not in {{1, 2}}", lineno)
    return label


def parse_dataset(name: str, text: str) -> RawDataset:
    _check_name(name)
    n_features = SCHEMAS[name][0]
    sep = "\t" if name == "skin" else ","
    rows, labels = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        tokens = [t.strip() for t in line.split(sep)]
        if len(tokens) != n_features + 1:
            raise DatasetParseError(
                f"expected {n_features + 1} fields separated by {sep!r}, got {len(tokens)}", lineno
            )
        try:
            rows.append([float(t) for t in tokens[:n_features]])
        except ValueError:
            raise DatasetParseError(f"non-numeric feature in {line!r}", lineno) from None
        labels.append(_parse_label(name, tokens[-1], lineno))
    data = RawDataset(name, np.array(rows, dtype=float), np.array(labels), FEATURE_NAMES[name])

    _, n_classes, n_rows = SCHEMAS[name]
    if len(data) != n_rows or len(data.classes) != n_classes:
        warnings.warn(
            f"{name}: read {len(data)} rows / {len(data.classes)} classes, "
            f"expected {n_rows} / {n_classes}",
            stacklevel=2,
        )
    return data


def load_dataset(name: str, path=None) -> RawDataset:
    """Read a dataset file; ``path=None`` uses the bundled copy when there is one."""
    _check_name(name)
    if path is None:
        if name not in BUNDLED:
            raise ConfigError(f"no bundled copy of {name!r}; pass the data file path")
        text = resources.files(__name__).joinpath(BUNDLED[name]).read_text()
    else:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_dataset(name, text)


def select_features_and_classes(raw: RawDataset) -> RawDataset:
    """Reduce a dataset to the two features and two classes used in the experiments.

    Iris keeps its first two classes (setosa, versicolor) and the sepal width
    and petal length columns. Haberman drops the year of operation. Skin keeps
    the red and blue channels, in that order.
    """
    _check_name(raw.name)
    keep = SELECTED_FEATURES[raw.name]
    cols = [raw.feature_names.index(f) for f in keep]
    mask = np.ones(len(raw.y), dtype=bool)
    if raw.name == "iris":
        mask = np.isin(raw.y, [0, 1])
    return RawDataset(raw.name, raw.X[mask][:, cols].copy(), raw.y[mask].copy(), keep)
