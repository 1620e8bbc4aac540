"""scikit-learn compatible wrappers around the interference classifiers.

Both estimators expect unit-norm rows (see
:class:`qocc.preprocessing.StandardNormalizer`) and a binary target. ``fit``
runs the prototype candidate search on the training data, so the estimators
drop straight into a ``Pipeline``::

    make_pipeline(StandardNormalizer(), QuantumOneClassClassifier(random_state=0))
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.multiclass import unique_labels
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .circuits import hc_label, hc_outcome, membership_score, qocc_decide
from .encoding import NORM_TOL
from .exceptions import ConfigError, PostselectionError
from .training import select_candidates, training_stage

_MODES = ("exact", "shots")


def _check_unit_rows(X):
    norms = np.linalg.norm(X, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > NORM_TOL)
    if bad.size:
        raise ValueError(
            f"rows {bad[:5].tolist()} are not unit-norm; normalize the data first "
            "(e.g. with StandardNormalizer)"
        )


def _sample_seeds(random_state, n):
    # one independent 32-bit seed per sample, reproducible for a fixed random_state
    return np.random.SeedSequence(random_state).generate_state(n).tolist()


class _InterferenceClassifier(ClassifierMixin, BaseEstimator):
    _kind = None

    def _validate_params(self):
        if self.mode not in _MODES:
            raise ConfigError(f"mode must be one of {_MODES}, got {self.mode!r}")
        if self.mode == "shots" and (not isinstance(self.shots, (int, np.integer)) or self.shots < 1):
            raise ConfigError(f"shots must be a positive integer, got {self.shots!r}")
        if self.n_candidates < 1:
            raise ConfigError(f"n_candidates must be >= 1, got {self.n_candidates}")

    def _fit(self, X, y, kind, stored_class=None):
        self._validate_params()
        X, y = check_X_y(X, y, dtype=float)
        _check_unit_rows(X)
        self.classes_ = unique_labels(y)
        if len(self.classes_) != 2:
            raise ValueError(f"a binary target is required, got classes {self.classes_.tolist()}")
        self.n_features_in_ = X.shape[1]

        other = None
        if kind != "hc":
            other = [c for c in self.classes_.tolist() if c != stored_class][0]
        cand_seed = np.random.SeedSequence(self.random_state).spawn(1)[0]
        candidates = select_candidates(y, kind, stored_class, self.n_candidates, cand_seed)
        result = training_stage(candidates, X, y, kind, other_class=other)
        self.model_ = result.model
        self.prototype_indices_ = result.candidate
        self.training_accuracy_ = result.accuracy
        self.candidates_ = result.candidates
        self.candidate_accuracies_ = np.array(result.accuracies)
        return self

    def _check_X(self, X):
        check_is_fitted(self, "model_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        _check_unit_rows(X)
        return X

    def _shot_args(self, n):
        if self.mode == "exact":
            return [(None, None)] * n
        return [(self.shots, s) for s in _sample_seeds(self.random_state, n)]


class QuantumOneClassClassifier(_InterferenceClassifier):
    """One-class interference classifier storing one or two prototypes of one class.

    The degree of membership of a sample is the probability of reading 0 on
    the ancilla; samples scoring above 0.5 get ``stored_class``, the rest the
    other class of the binary problem.

    Parameters
    ----------
    n_prototypes : {1, 2}
        Number of stored samples (1 drops the index qubit).
    stored_class : label or None
        Class whose samples are stored. Defaults to the smallest label.
    n_candidates : int
        Prototype candidates scored during ``fit``.
    mode : {"exact", "shots"}
        How membership is read at prediction time. ``fit`` always uses exact
        simulation.
    shots : int
        Measurements per sample in shot mode.
    random_state : int or None
        Seeds candidate sampling and shot sampling.
    """

    def __init__(self, n_prototypes=1, stored_class=None, n_candidates=30, mode="exact", shots=1024,
                 random_state=None):
        self.n_prototypes = n_prototypes
        self.stored_class = stored_class
        self.n_candidates = n_candidates
        self.mode = mode
        self.shots = shots
        self.random_state = random_state

    def fit(self, X, y):
        if self.n_prototypes not in (1, 2):
            raise ConfigError(f"n_prototypes must be 1 or 2, got {self.n_prototypes!r}")
        labels = unique_labels(y)
        stored = labels[0] if self.stored_class is None else self.stored_class
        if stored not in labels:
            raise ConfigError(f"stored class {stored!r} not among {labels.tolist()}")
        self.stored_class_ = stored
        return self._fit(X, y, f"qocc{self.n_prototypes}", stored)

    def score_samples(self, X):
        """Degree of membership of each row in the stored class."""
        X = self._check_X(X)
        return np.array([membership_score(x, self.model_, shots, seed)
                         for x, (shots, seed) in zip(X, self._shot_args(len(X)))])

    def decision_function(self, X):
        return self.score_samples(X) - 0.5

    def predict(self, X):
        scores = self.score_samples(X)
        m = self.model_
        return np.array([qocc_decide(s, m.stored_class, m.other_class) for s in scores])


class HadamardClassifier(_InterferenceClassifier):
    """Distance-based classifier with one prototype per class and ancilla postselection.

    ``predict_proba`` gives the class-qubit distribution after postselecting
    the ancilla on 0; rows where postselection cannot succeed come back as
    NaN and make ``predict`` raise :class:`~qocc.exceptions.PostselectionError`.
    """

    def __init__(self, n_candidates=30, mode="exact", shots=1024, random_state=None):
        self.n_candidates = n_candidates
        self.mode = mode
        self.shots = shots
        self.random_state = random_state

    def fit(self, X, y):
        return self._fit(X, y, "hc")

    def _outcomes(self, X):
        X = self._check_X(X)
        outs = []
        for x, (shots, seed) in zip(X, self._shot_args(len(X))):
            try:
                outs.append(hc_outcome(x, self.model_, shots, seed))
            except PostselectionError as exc:
                outs.append(exc)
        return outs

    def predict_proba(self, X):
        rows = []
        for out in self._outcomes(X):
            rows.append([np.nan, np.nan] if isinstance(out, Exception) else list(out.distribution))
        return np.array(rows)

    def postselection_probability(self, X):
        """Exact probability that the ancilla reads 0, per row."""
        return np.array([o.postselection_probability for o in self._outcomes(X)])

    def predict(self, X):
        outs = self._outcomes(X)
        failed = [i for i, o in enumerate(outs) if isinstance(o, Exception)]
        if failed:
            raise PostselectionError(f"postselection failed for rows {failed}")
        return np.array([hc_label(o, self.model_) for o in outs])
