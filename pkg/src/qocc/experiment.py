"""End-to-end experiment protocol.

For every seed: filter features/classes, balance with SMOTE and cut
class-balanced batches (Haberman and Skin only), split 70/30 stratified, fit
the scaler on the training split, run the candidate search in exact
simulation, then classify the validation split in exact or shot mode.

All randomness for one seed is derived from ``numpy.random.SeedSequence(seed)``
and the derived integer seeds are written into the report.
"""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .datasets import load_dataset, select_features_and_classes
from .estimators import HadamardClassifier, QuantumOneClassClassifier
from .exceptions import ConfigError, StageError
from .preprocessing import make_batches, smote_oversample, standardize_and_normalize, train_val_split
from .training import accuracy, classify

SCHEMA_VERSION = "1.0"
BATCHED = ("haberman", "skin")
CLASSIFIERS = ("hc", "qocc2", "qocc1")
SEED_STREAMS = ("smote", "batches", "split", "candidates", "shots")

SETTINGS = {
    "scaler_fit_scope": "train split",
    "std_estimator": "population (ddof=0)",
    "smote_k": 5,
    "batch_balance": "50/50 per class",
    "pipeline_order": "filter -> smote -> batch -> split -> scale(train) -> unit-normalize",
    "qocc_tie_rule": "score == 0.5 -> non-stored class",
    "hc_tie_rule": "50/50 -> higher class index",
    "hc_shot_protocol": "discard ancilla=1 shots, majority vote on class qubit",
    "hc_postselection_failure": "counted as misclassification",
    "training_tie_rule": "later candidate wins (>=)",
    "candidate_sampling": "uniform without replacement",
    "exact_mode_runs": "collapsed to 1",
    "prng": "numpy PCG64 via SeedSequence",
}


@dataclass
class ExperimentConfig:
    dataset: str
    classifier: str
    stored_class: object = None
    candidates: int = 30
    shots: int = 1024
    runs: int = 5
    mode: str = "exact"
    seeds: tuple = (0,)
    batch: object = None  # None/"all" -> every batch; int -> that batch (Haberman/Skin only)
    train_fraction: float = 0.7
    data_path: str | None = None
    smote_k: int = 5
    batch_size: int = 100
    n_batches: int = 4

    def __post_init__(self):
        self.seeds = tuple(int(s) for s in self.seeds)
        if self.classifier not in CLASSIFIERS:
            raise ConfigError(f"classifier must be one of {CLASSIFIERS}, got {self.classifier!r}")
        if self.mode not in ("exact", "shots"):
            raise ConfigError(f"mode must be 'exact' or 'shots', got {self.mode!r}")
        if self.candidates < 1 or self.shots < 1 or self.runs < 1:
            raise ConfigError("candidates, shots and runs must all be >= 1")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if self.classifier == "hc" and self.stored_class is not None:
            raise ConfigError("HC does not take a stored class")
        if self.batch == "all":
            self.batch = None
        if self.batch is not None:
            if self.dataset not in BATCHED:
                raise ConfigError(f"{self.dataset} is used whole; batches apply to {BATCHED}")
            if not 0 <= int(self.batch) < self.n_batches:
                raise ConfigError(f"batch index must be in 0..{self.n_batches - 1}")
            self.batch = int(self.batch)

    def to_dict(self):
        d = asdict(self)
        d["seeds"] = list(self.seeds)
        return d


def derive_seeds(seed: int) -> dict:
    children = np.random.SeedSequence(seed).spawn(len(SEED_STREAMS))
    return {name: int(c.generate_state(1)[0]) for name, c in zip(SEED_STREAMS, children)}


@dataclass
class ValidationResult:
    run_accuracies: list
    records: list

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.run_accuracies))


def validate_model(model, X_val, y_val, mode="exact", runs=5, shots=1024, seed=None) -> ValidationResult:
    """Classify every validation sample ``runs`` times (once in exact mode)."""
    X_val = np.asarray(X_val, dtype=float)
    y_val = np.asarray(y_val)
    if len(y_val) == 0:
        raise ConfigError("validation set is empty")
    if mode == "exact":
        recs = [classify(model, x, t.item(), i) for i, (x, t) in enumerate(zip(X_val, y_val))]
        return ValidationResult([accuracy(recs)], recs)

    records, accs = [], []
    for run, child in enumerate(np.random.SeedSequence(seed).spawn(runs)):
        seeds = child.generate_state(len(y_val)).tolist()
        recs = [
            classify(model, x, t.item(), i, shots=shots, seed=s, run=run)
            for i, (x, t, s) in enumerate(zip(X_val, y_val, seeds))
        ]
        records.extend(recs)
        accs.append(accuracy(recs))
    return ValidationResult(accs, records)


@dataclass
class ExperimentReport:
    dataset: str
    classifier: str
    stored_class: object
    mode: str
    seed: int
    derived_seeds: dict
    batch: int | None
    n_train: int
    n_validation: int
    scaler_stats: dict
    prototypes: list
    training_accuracy: float
    candidate_accuracies: list
    run_accuracies: list
    mean_accuracy: float
    records: list = field(repr=False)

    def to_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k != "records"}
        d["records"] = [r.to_dict() for r in self.records]
        return d


def postselection_statistics(report: ExperimentReport) -> dict:
    """Spread of the exact postselection probability over the validation samples (HC only)."""
    if report.classifier != "hc":
        raise TypeError(f"postselection statistics need an HC report, got {report.classifier!r}")
    recs = [r for r in report.records if r.run == 0]
    probs = np.array([r.postselection_probability for r in recs], dtype=float)
    return {
        "fraction_above_half": float(np.mean(probs > 0.5)),
        "min": float(probs.min()),
        "mean": float(probs.mean()),
        "max": float(probs.max()),
        "failures": int(sum(r.failed for r in report.records)),
    }


@dataclass
class ExperimentSummary:
    config: ExperimentConfig
    reports: list
    seed_accuracies: list  # batch-averaged where batches apply
    batch_accuracies: dict  # batch index -> mean over seeds
    mean_accuracy: float
    std_accuracy: float

    def to_dict(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "package_version": __version__,
            "config": self.config.to_dict(),
            "settings": SETTINGS,
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "seed_accuracies": self.seed_accuracies,
            "batch_accuracies": {str(k): v for k, v in self.batch_accuracies.items()},
            "reports": [r.to_dict() for r in self.reports],
        }
        if self.config.classifier == "hc":
            d["postselection"] = [postselection_statistics(r) for r in self.reports]
        return d


@contextmanager
def _stage(name):
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def _make_estimator(config, stored, random_state):
    if config.classifier == "hc":
        return HadamardClassifier(n_candidates=config.candidates, random_state=random_state)
    return QuantumOneClassClassifier(
        n_prototypes=int(config.classifier[-1]),
        stored_class=stored,
        n_candidates=config.candidates,
        random_state=random_state,
    )


def _run_one(config, X, y, seed, seeds, batch) -> ExperimentReport:
    with _stage("split"):
        tr, va = train_val_split(y, config.train_fraction, seeds["split"])
    with _stage("scaling"):
        train = standardize_and_normalize(X[tr], y[tr])
        val = standardize_and_normalize(X[va], y[va], train.scaler_stats)
    with _stage("training"):
        stored = config.stored_class
        if config.classifier != "hc" and stored is None:
            stored = train.class_pair[0]
        est = _make_estimator(config, stored, seeds["candidates"]).fit(train.X, train.y)
        model = est.model_
    with _stage("validation"):
        result = validate_model(model, val.X, val.y, config.mode, config.runs, config.shots, seeds["shots"])
    protos = [
        {"index": int(tr[i]), "label": p.label, "features": p.features.tolist()}
        for i, p in zip(est.prototype_indices_, model.prototypes)
    ]
    for r in result.records:
        r.index = int(va[r.index])
    return ExperimentReport(
        dataset=config.dataset,
        classifier=config.classifier,
        stored_class=None if config.classifier == "hc" else stored,
        mode=config.mode,
        seed=seed,
        derived_seeds=seeds,
        batch=batch,
        n_train=len(tr),
        n_validation=len(va),
        scaler_stats=train.scaler_stats.to_dict(),
        prototypes=protos,
        training_accuracy=float(est.training_accuracy_),
        candidate_accuracies=[float(a) for a in est.candidate_accuracies_],
        run_accuracies=[float(a) for a in result.run_accuracies],
        mean_accuracy=result.mean_accuracy,
        records=result.records,
    )


def run_experiment(config: ExperimentConfig, raw=None) -> ExperimentSummary:
    """Run the full protocol for every seed in ``config``.

    ``raw`` may be a pre-loaded :class:`~qocc.datasets.RawDataset` to skip reading the file.
    """
    with _stage("load"):
        if raw is None:
            raw = load_dataset(config.dataset, config.data_path)
        data = select_features_and_classes(raw)

    reports, seed_accs = [], []
    per_batch = {}
    for seed in config.seeds:
        seeds = derive_seeds(seed)
        if config.dataset in BATCHED:
            with _stage("smote"):
                Xs, ys = smote_oversample(data.X, data.y, config.smote_k, seeds["smote"])
            with _stage("batching"):
                batches = make_batches(Xs, ys, config.batch_size, config.n_batches, seeds["batches"])
            chosen = range(config.n_batches) if config.batch is None else [config.batch]
            accs = []
            for b in chosen:
                rep = _run_one(config, Xs[batches[b]], ys[batches[b]], seed, seeds, b)
                reports.append(rep)
                accs.append(rep.mean_accuracy)
                per_batch.setdefault(b, []).append(rep.mean_accuracy)
            seed_accs.append(float(np.mean(accs)))
        else:
            rep = _run_one(config, data.X, data.y, seed, seeds, None)
            reports.append(rep)
            seed_accs.append(rep.mean_accuracy)

    return ExperimentSummary(
        config=config,
        reports=reports,
        seed_accuracies=seed_accs,
        batch_accuracies={b: float(np.mean(v)) for b, v in sorted(per_batch.items())},
        mean_accuracy=float(np.mean(seed_accs)),
        std_accuracy=float(np.std(seed_accs)),
    )
