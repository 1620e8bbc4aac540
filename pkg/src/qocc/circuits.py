"""Circuits for the Hadamard classifier (HC) and the quantum one-class classifier (QOCC).

Register layout (qubit 0 is the most significant bit):

* QOCC1: ancilla, data...
* QOCC2: ancilla, index, data...
* HC:    ancilla, index, data..., class

Before the final Hadamard on the ancilla, every circuit holds

    1/sqrt(2M) * sum_m |m> (|0>|test> + |1>|x_m>)

so the probability of reading 0 on the ancilla afterwards is
``1/(4M) * sum_m ||test + x_m||**2``. QOCC reads that probability as the
degree of membership; HC postselects on it and reads the class qubit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np

from .encoding import NORM_TOL, AngleTree, LoaderSpec, angles_from_vector, loader_circuit
from .exceptions import DegenerateConditionError, EncodingError, ModelError, PostselectionError
from .simulator import (
    Circuit,
    cnot,
    conditional_distribution,
    h,
    joint_distribution,
    marginal_probability,
    sample_counts,
    x,
)

KINDS = ("hc", "qocc2", "qocc1")
ANCILLA = 0
INDEX = 1


@dataclass(frozen=True)
class PreparedSample:
    features: np.ndarray
    label: Any = None

    def __post_init__(self):
        f = np.asarray(self.features, dtype=float).ravel()
        norm = np.linalg.norm(f)
        if abs(norm - 1.0) > NORM_TOL:
            raise EncodingError(f"sample features have norm {norm:.12g}, expected 1")
        f.setflags(write=False)
        object.__setattr__(self, "features", f)


def _sample(obj) -> PreparedSample:
    return obj if isinstance(obj, PreparedSample) else PreparedSample(obj)


@dataclass(frozen=True)
class TrainedModel:
    """A classifier kind plus the prototype sample(s) it loads.

    For QOCC variants all prototypes share the stored class and
    ``other_class`` is what a sample below the 0.5 threshold is assigned.
    For HC the prototypes carry two distinct labels; prototype ``m`` is
    tied to class-qubit value ``m``.
    """

    kind: str
    prototypes: tuple
    other_class: Any = None
    angle_trees: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ModelError(f"unknown classifier kind {self.kind!r}")
        protos = tuple(_sample(p) for p in self.prototypes)
        object.__setattr__(self, "prototypes", protos)
        expected = 1 if self.kind == "qocc1" else 2
        if len(protos) != expected:
            raise ModelError(f"{self.kind} needs {expected} prototype(s), got {len(protos)}")
        if len({p.features.size for p in protos}) != 1:
            raise ModelError("prototypes have different feature counts")
        labels = [p.label for p in protos]
        if self.kind == "hc" and labels[0] == labels[1]:
            raise ModelError("HC prototypes must have distinct labels")
        if self.kind == "qocc2" and labels[0] != labels[1]:
            raise ModelError("QOCC prototypes must share one label")
        object.__setattr__(self, "angle_trees", tuple(angles_from_vector(p.features) for p in protos))

    @property
    def is_qocc(self) -> bool:
        return self.kind != "hc"

    @property
    def stored_class(self):
        if not self.is_qocc:
            raise ModelError("HC models have no single stored class")
        return self.prototypes[0].label

    @property
    def classes(self) -> tuple:
        if self.is_qocc:
            return (self.stored_class, self.other_class)
        return tuple(p.label for p in self.prototypes)

    @property
    def n_features(self) -> int:
        return self.prototypes[0].features.size

    @property
    def n_data_qubits(self) -> int:
        return self.angle_trees[0].num_qubits


def _check_test(test, model) -> AngleTree:
    t = _sample(test)
    if t.features.size != model.n_features:
        raise ModelError(f"test sample has {t.features.size} features, model expects {model.n_features}")
    return angles_from_vector(t.features)


def _interference_circuit(test_tree, model, with_class_qubit=False) -> Circuit:
    d = model.n_data_qubits
    two = len(model.prototypes) == 2
    data = tuple(range(2 if two else 1, (2 if two else 1) + d))
    n = 1 + int(two) + d + int(with_class_qubit)
    c = Circuit(n)
    c.append(h(ANCILLA))
    if two:
        c.append(h(INDEX))
    c.extend(loader_circuit(LoaderSpec(data, test_tree, ((ANCILLA, 1),))))
    c.append(x(ANCILLA))
    if two:
        ctrl = ((ANCILLA, 1), (INDEX, 1))
        c.extend(loader_circuit(LoaderSpec(data, model.angle_trees[0], ctrl)))
        c.append(x(INDEX))
        c.extend(loader_circuit(LoaderSpec(data, model.angle_trees[1], ctrl)))
    else:
        c.extend(loader_circuit(LoaderSpec(data, model.angle_trees[0], ((ANCILLA, 1),))))
    if with_class_qubit:
        c.append(cnot(INDEX, n - 1))
    c.append(h(ANCILLA))
    return c


def build_qocc_circuit(test, model: TrainedModel) -> Circuit:
    if not model.is_qocc:
        raise ModelError(f"expected a QOCC model, got {model.kind!r}")
    return _interference_circuit(_check_test(test, model), model)


def build_hc_circuit(test, model: TrainedModel) -> Circuit:
    if model.kind != "hc":
        raise ModelError(f"expected an HC model, got {model.kind!r}")
    return _interference_circuit(_check_test(test, model), model, with_class_qubit=True)


def closed_form_membership(test, prototypes) -> float:
    """``1/(4M) * sum_m ||test + x_m||**2`` evaluated directly on the vectors."""
    t = np.asarray(getattr(test, "features", test), dtype=float)
    protos = [np.asarray(getattr(p, "features", p), dtype=float) for p in prototypes]
    return float(sum(np.sum((t + p) ** 2) for p in protos) / (4 * len(protos)))


def membership_score(test, model: TrainedModel, shots: int | None = None, seed=None) -> float:
    """Probability of reading 0 on the ancilla (exact when ``shots`` is None)."""
    state = build_qocc_circuit(test, model).run()
    if shots is None:
        return marginal_probability(state, ANCILLA)[0]
    counts = sample_counts(state, [ANCILLA], shots, seed)
    return counts.get("0", 0) / shots


# scores this close to 0.5 (or to each other, for HC) count as ties;
# exact simulation leaves ~1e-16 of rounding on a true tie
TIE_TOL = 1e-12


def is_tie(a: float, b: float) -> bool:
    return abs(a - b) <= TIE_TOL


def qocc_decide(score: float, stored_class, other_class):
    # strictly greater than 0.5; a tie goes to the non-stored class
    return stored_class if score > 0.5 and not is_tie(score, 0.5) else other_class


class HCOutcome(NamedTuple):
    distribution: tuple  # P(class qubit = 0), P(class qubit = 1) after postselection
    postselection_probability: float  # exact P(ancilla = 0)
    surviving_shots: int | None  # shot mode only


def hc_outcome(test, model: TrainedModel, shots: int | None = None, seed=None) -> HCOutcome:
    circuit = build_hc_circuit(test, model)
    state = circuit.run()
    class_qubit = circuit.num_qubits - 1
    p_post = float(joint_distribution(state, [ANCILLA])[0])
    if shots is None:
        try:
            dist = conditional_distribution(state, ANCILLA, 0, class_qubit)
        except DegenerateConditionError as exc:
            raise PostselectionError(str(exc), p_post) from exc
        return HCOutcome(dist, p_post, None)

    counts = sample_counts(state, [ANCILLA, class_qubit], shots, seed)
    kept0, kept1 = counts.get("00", 0), counts.get("01", 0)
    survived = kept0 + kept1
    if survived == 0:
        raise PostselectionError(f"no shot out of {shots} passed postselection", p_post)
    return HCOutcome((kept0 / survived, kept1 / survived), p_post, survived)


def hc_label(outcome: HCOutcome, model: TrainedModel):
    p0, p1 = outcome.distribution
    # a 50/50 split goes to the class with the higher index
    return model.classes[1] if p1 >= p0 or is_tie(p0, p1) else model.classes[0]


def hc_decide(test, model: TrainedModel, shots: int | None = None, seed=None):
    return hc_label(hc_outcome(test, model, shots, seed), model)
