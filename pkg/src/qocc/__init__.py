"""Statevector simulation of the Hadamard classifier and the quantum one-class classifier."""

__version__ = "0.1.0"

from .circuits import (  # noqa: E402
    PreparedSample,
    TrainedModel,
    build_hc_circuit,
    build_qocc_circuit,
    closed_form_membership,
    hc_decide,
    membership_score,
    qocc_decide,
)
from .encoding import angles_from_vector, loader_circuit, two_feature_angle  # noqa: E402
from .estimators import HadamardClassifier, QuantumOneClassClassifier  # noqa: E402
from .preprocessing import StandardNormalizer  # noqa: E402
from .simulator import Circuit, StateVector, apply, init_state  # noqa: E402

__all__ = [
    "Circuit",
    "HadamardClassifier",
    "PreparedSample",
    "QuantumOneClassClassifier",
    "StandardNormalizer",
    "StateVector",
    "TrainedModel",
    "angles_from_vector",
    "apply",
    "build_hc_circuit",
    "build_qocc_circuit",
    "closed_form_membership",
    "hc_decide",
    "init_state",
    "loader_circuit",
    "membership_score",
    "qocc_decide",
    "two_feature_angle",
]
