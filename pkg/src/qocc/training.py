"""Prototype candidate search: sample candidates, score each on the training set, keep the best."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .circuits import TrainedModel, PreparedSample, hc_label, hc_outcome, membership_score, qocc_decide
from .exceptions import ConfigError, PostselectionError


@dataclass
class SampleRecord:
    index: int
    truth: object
    prediction: object  # None when HC postselection failed
    score: float | None = None  # QOCC membership
    distribution: tuple | None = None  # HC class distribution after postselection
    postselection_probability: float | None = None  # HC, exact
    surviving_shots: int | None = None  # HC, shot mode
    failed: bool = False
    run: int = 0

    @property
    def correct(self) -> bool:
        return not self.failed and self.prediction == self.truth

    def to_dict(self) -> dict:
        d = {
            "run": self.run,
            "index": self.index,
            "truth": _plain(self.truth),
            "prediction": _plain(self.prediction),
            "correct": self.correct,
        }
        if self.score is not None:
            d["score"] = self.score
        if self.distribution is not None:
            d["distribution"] = list(self.distribution)
            d["postselection_probability"] = self.postselection_probability
            d["surviving_shots"] = self.surviving_shots
            d["postselection_failed"] = self.failed
        return d


def _plain(v):
    return v.item() if isinstance(v, np.generic) else v


def classify(model: TrainedModel, features, truth=None, index=0, shots=None, seed=None, run=0) -> SampleRecord:
    """Classify one sample with ``model``; HC postselection failures are recorded, not raised."""
    test = PreparedSample(features)
    if model.is_qocc:
        score = membership_score(test, model, shots, seed)
        pred = qocc_decide(score, model.stored_class, model.other_class)
        return SampleRecord(index, truth, pred, score=score, run=run)
    try:
        out = hc_outcome(test, model, shots, seed)
    except PostselectionError as exc:
        return SampleRecord(index, truth, None, distribution=(float("nan"), float("nan")),
                            postselection_probability=exc.postselection_probability,
                            surviving_shots=0 if shots else None, failed=True, run=run)
    return SampleRecord(index, truth, hc_label(out, model), distribution=out.distribution,
                        postselection_probability=out.postselection_probability,
                        surviving_shots=out.surviving_shots, run=run)


def accuracy(records) -> float:
    records = list(records)
    if not records:
        return float("nan")
    return sum(r.correct for r in records) / len(records)


def select_candidates(y_train, kind, stored_class=None, count=30, seed=None) -> list:
    """Draw ``count`` distinct prototype candidates (tuples of training indices).

    QOCC1 candidates are single stored-class samples, QOCC2 candidates are
    unordered pairs of distinct stored-class samples, and HC candidates pair
    one sample of each class (lower class first).
    """
    y_train = np.asarray(y_train)
    if count < 1:
        raise ConfigError(f"candidate count must be >= 1, got {count}")
    classes = np.unique(y_train).tolist()
    if kind == "hc":
        if len(classes) != 2:
            raise ConfigError(f"HC needs exactly two classes in the training set, got {classes}")
        a = np.flatnonzero(y_train == classes[0])
        b = np.flatnonzero(y_train == classes[1])
        pool = list(itertools.product(a.tolist(), b.tolist()))
    elif kind in ("qocc1", "qocc2"):
        own = np.flatnonzero(y_train == stored_class).tolist()
        if kind == "qocc1":
            pool = [(i,) for i in own]
        else:
            pool = list(itertools.combinations(own, 2))
    else:
        raise ConfigError(f"unknown classifier kind {kind!r}")

    if not pool:
        raise ConfigError(f"no eligible {kind} candidates (stored class {stored_class!r})")
    if len(pool) < count:
        warnings.warn(f"only {len(pool)} {kind} candidates available, using all of them", stacklevel=2)
        count = len(pool)
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(pool), size=count, replace=False)
    return [pool[i] for i in picks]


def make_model(kind, candidate, X, y, other_class=None) -> TrainedModel:
    protos = tuple(PreparedSample(X[i], _plain(y[i])) for i in candidate)
    return TrainedModel(kind, protos, other_class=other_class if kind != "hc" else None)


@dataclass
class TrainingResult:
    model: TrainedModel
    candidate: tuple
    accuracy: float
    candidates: list
    accuracies: list


def training_stage(candidates, X_train, y_train, kind, other_class=None) -> TrainingResult:
    """Score every candidate on the training set minus its own samples (exact simulation).

    The candidate with the highest accuracy wins; on ties the one evaluated
    later wins.
    """
    if not candidates:
        raise ConfigError("no candidates to evaluate")
    X_train = np.asarray(X_train, dtype=float)
    y_train = np.asarray(y_train)
    best, best_acc, accs = None, -1.0, []
    for cand in candidates:
        model = make_model(kind, cand, X_train, y_train, other_class)
        held = set(cand)
        records = [
            classify(model, X_train[i], _plain(y_train[i]), i)
            for i in range(len(y_train))
            if i not in held
        ]
        if not records:
            raise ConfigError(f"candidate {tuple(cand)} leaves no training samples to score it on")
        acc = accuracy(records)
        accs.append(acc)
        if acc >= best_acc:
            best, best_acc = (cand, model), acc
    return TrainingResult(best[1], tuple(best[0]), best_acc, list(candidates), accs)
