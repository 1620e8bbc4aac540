import numpy as np
import pytest

from qocc import reporting
from qocc.circuits import PreparedSample, TrainedModel
from qocc.datasets import RawDataset, load_dataset
from qocc.exceptions import ConfigError, StageError
from qocc.experiment import (
    ExperimentConfig,
    derive_seeds,
    postselection_statistics,
    run_experiment,
    validate_model,
)


@pytest.fixture(scope="module")
def iris():
    return load_dataset("iris")


@pytest.fixture(scope="module")
def haberman():
    return load_dataset("haberman")


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig("iris", "svm")
    with pytest.raises(ConfigError):
        ExperimentConfig("iris", "qocc1", batch=0)
    with pytest.raises(ConfigError):
        ExperimentConfig("haberman", "qocc1", batch=4)
    with pytest.raises(ConfigError):
        ExperimentConfig("iris", "hc", stored_class=0)
    with pytest.raises(ConfigError):
        ExperimentConfig("iris", "qocc1", seeds=())
    with pytest.raises(ConfigError):
        ExperimentConfig("iris", "qocc1", mode="noisy")
    assert ExperimentConfig("haberman", "qocc1", batch="all").batch is None


def test_derived_seeds_are_stable_and_distinct():
    a = derive_seeds(0)
    assert a == derive_seeds(0)
    assert len(set(a.values())) == 5
    assert a != derive_seeds(1)


def test_validate_toy_set_is_perfect():
    model = TrainedModel("qocc1", (PreparedSample([1, 0], "c"),), other_class="o")
    X = np.array([[1.0, 0.0], [-1.0, 0.0]])
    y = np.array(["c", "o"])
    res = validate_model(model, X, y, mode="exact")
    assert res.run_accuracies == [1.0]
    res = validate_model(model, X, y, mode="shots", runs=3, shots=64, seed=0)
    assert res.run_accuracies == [1.0, 1.0, 1.0]
    assert len(res.records) == 6


def test_validate_antipodal_hc():
    model = TrainedModel("hc", (PreparedSample([1, 0], 0), PreparedSample([-1, 0], 1)))
    X = np.array([[1.0, 0.0], [-1.0, 0.0]])
    res = validate_model(model, X, np.array([0, 1]))
    assert res.mean_accuracy == 1.0


def test_iris_report_bookkeeping(iris):
    cfg = ExperimentConfig("iris", "qocc1", stored_class=0, mode="shots", runs=3, seeds=(0,))
    rep = run_experiment(cfg, raw=iris).reports[0]
    assert rep.n_train == 70 and rep.n_validation == 30
    assert len(rep.records) == 3 * 30
    assert len(rep.run_accuracies) == 3
    assert rep.mean_accuracy == pytest.approx(np.mean(rep.run_accuracies))
    for run in range(3):
        recs = [r for r in rep.records if r.run == run]
        assert rep.run_accuracies[run] == sum(r.correct for r in recs) / 30
    assert len(rep.candidate_accuracies) == 30
    assert rep.training_accuracy == max(rep.candidate_accuracies)
    assert rep.prototypes[0]["label"] == 0


def test_exact_mode_collapses_runs(iris):
    rep = run_experiment(ExperimentConfig("iris", "qocc1", runs=5), raw=iris).reports[0]
    assert len(rep.run_accuracies) == 1 and len(rep.records) == 30


def test_summary_arithmetic(iris):
    s = run_experiment(ExperimentConfig("iris", "hc", seeds=(0, 1, 2)), raw=iris)
    assert len(s.reports) == 3
    assert s.mean_accuracy == pytest.approx(np.mean(s.seed_accuracies))
    assert s.std_accuracy == pytest.approx(np.std(s.seed_accuracies))
    assert s.batch_accuracies == {}


def test_batched_dataset_reports_every_batch(haberman):
    s = run_experiment(ExperimentConfig("haberman", "qocc1", stored_class=1, candidates=5), raw=haberman)
    assert [r.batch for r in s.reports] == [0, 1, 2, 3]
    assert all(r.n_train == 70 and r.n_validation == 30 for r in s.reports)
    assert s.seed_accuracies[0] == pytest.approx(np.mean([r.mean_accuracy for r in s.reports]))
    assert set(s.batch_accuracies) == {0, 1, 2, 3}
    one = run_experiment(
        ExperimentConfig("haberman", "qocc1", stored_class=1, candidates=5, batch=2), raw=haberman
    )
    assert one.reports[0].to_dict() == s.reports[2].to_dict()


def test_experiment_is_deterministic(iris):
    cfg = ExperimentConfig("iris", "qocc2", stored_class=1, mode="shots", runs=2, seeds=(3,))
    a = reporting.to_json(run_experiment(cfg, raw=iris).to_dict())
    b = reporting.to_json(run_experiment(cfg, raw=iris).to_dict())
    assert a == b


def test_shots_agree_with_exact_away_from_threshold(iris):
    exact = run_experiment(ExperimentConfig("iris", "qocc1", seeds=(0,)), raw=iris).reports[0]
    shots = run_experiment(
        ExperimentConfig("iris", "qocc1", mode="shots", shots=2**16, runs=1, seeds=(0,)), raw=iris
    ).reports[0]
    checked = 0
    for e, s in zip(exact.records, shots.records):
        if not 0.45 <= e.score <= 0.55:
            assert e.prediction == s.prediction
            checked += 1
    assert checked > 0


def test_postselection_statistics(iris):
    s = run_experiment(ExperimentConfig("iris", "hc"), raw=iris)
    stats = postselection_statistics(s.reports[0])
    assert 0 <= stats["min"] <= stats["mean"] <= stats["max"] <= 1
    assert 0 <= stats["fraction_above_half"] <= 1
    assert stats["failures"] == 0
    assert s.to_dict()["postselection"] == [stats]
    q = run_experiment(ExperimentConfig("iris", "qocc1"), raw=iris)
    with pytest.raises(TypeError):
        postselection_statistics(q.reports[0])
    assert "postselection" not in q.to_dict()


def test_stage_errors_name_the_stage():
    raw = RawDataset("haberman", np.array([[30.0, 60, 1]] * 5 + [[40.0, 61, 2]]), np.array([1] * 5 + [2]),
                     ("age", "year", "nodes"))
    with pytest.raises(StageError, match=r"^\[smote\] BalanceError"):
        run_experiment(ExperimentConfig("haberman", "qocc1", stored_class=1), raw=raw)


def test_report_serializes(iris):
    d = run_experiment(ExperimentConfig("iris", "hc", mode="shots", runs=1), raw=iris).to_dict()
    assert d["schema_version"] == "1.0"
    assert d["settings"]["smote_k"] == 5
    rec = d["reports"][0]["records"][0]
    assert {"run", "index", "truth", "prediction", "correct", "distribution",
            "postselection_probability", "surviving_shots"} <= rec.keys()
    reporting.to_json(d)
