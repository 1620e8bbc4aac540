"""Dense statevector simulator for controlled single-qubit gates.

Basis convention: for basis index ``i`` of an ``n``-qubit register, qubit ``k``
holds bit ``n - 1 - k`` of ``i``. Qubit 0 is therefore the most significant
bit and the leftmost symbol in ket notation ``|q0 q1 ... q(n-1)>``.

Shot sampling uses numpy's ``default_rng`` (PCG64) seeded with the caller's
integer seed, so counts are reproducible across runs and platforms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import (
    DegenerateConditionError,
    GateError,
    QubitIndexError,
    SamplingArgumentError,
    SimulationSizeError,
)

MAX_QUBITS = 16
ATOL = 1e-10
# conditioning events less likely than this are treated as impossible
DEGENERATE_PROB = 1e-12

_SQRT1_2 = 1.0 / np.sqrt(2.0)
X_MATRIX = np.array([[0, 1], [1, 0]], dtype=complex)
H_MATRIX = np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=complex)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


@dataclass(frozen=True)
class GateOp:
    """A single-qubit gate on ``target``, active only when every control is 1.

    ``kind`` is one of ``"x"``, ``"h"``, ``"ry"`` or ``"u"``; ``theta`` is used
    by ``"ry"`` and ``matrix`` (2x2 unitary) by ``"u"``.
    """

    kind: str
    target: int
    controls: frozenset = frozenset()
    theta: float | None = None
    matrix: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "controls", frozenset(int(c) for c in self.controls))
        if self.kind not in ("x", "h", "ry", "u"):
            raise GateError(f"unknown gate kind {self.kind!r}")
        if self.target in self.controls:
            raise GateError(f"target {self.target} is also a control")
        if self.kind == "ry":
            if self.theta is None or not np.isfinite(self.theta):
                raise GateError("ry gate needs a finite angle")
        if self.kind == "u":
            m = np.asarray(self.matrix, dtype=complex)
            if m.shape != (2, 2):
                raise GateError("unitary gate needs a 2x2 matrix")
            if not np.allclose(m.conj().T @ m, np.eye(2), atol=ATOL, rtol=0):
                raise GateError("matrix is not unitary")
            object.__setattr__(self, "matrix", m)

    @property
    def qubits(self) -> frozenset:
        return self.controls | {self.target}

    def unitary(self) -> np.ndarray:
        if self.kind == "x":
            return X_MATRIX
        if self.kind == "h":
            return H_MATRIX
        if self.kind == "ry":
            return ry_matrix(self.theta)
        return self.matrix

    def label(self) -> str:
        name = {"x": "X", "h": "H", "ry": "Ry", "u": "U"}[self.kind]
        if self.kind == "ry":
            name += f"({self.theta:+.6f})"
        name += f" q{self.target}"
        if self.controls:
            name += " ctrl[" + ",".join(f"q{c}" for c in sorted(self.controls)) + "]"
        return name


def x(target: int, controls: Iterable[int] = ()) -> GateOp:
    return GateOp("x", target, frozenset(controls))


def h(target: int, controls: Iterable[int] = ()) -> GateOp:
    return GateOp("h", target, frozenset(controls))


def ry(theta: float, target: int, controls: Iterable[int] = ()) -> GateOp:
    return GateOp("ry", target, frozenset(controls), theta=float(theta))


def unitary(matrix, target: int, controls: Iterable[int] = ()) -> GateOp:
    return GateOp("u", target, frozenset(controls), matrix=matrix)


def cnot(control: int, target: int) -> GateOp:
    return x(target, (control,))


def _check_size(n):
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUBITS:
        raise SimulationSizeError(f"qubit count must be in [1, {MAX_QUBITS}], got {n!r}")


def _check_qubit(q, n):
    if not isinstance(q, (int, np.integer)) or not 0 <= q < n:
        raise QubitIndexError(f"qubit index {q!r} out of range for {n} qubits")


class StateVector:
    """Complex amplitudes over the ``2**n`` computational basis states."""

    def __init__(self, amplitudes, num_qubits: int | None = None):
        amps = np.array(amplitudes, dtype=np.complex128).ravel()
        n = int(np.log2(amps.size)) if amps.size else 0
        if amps.size == 0 or 2**n != amps.size:
            raise SimulationSizeError(f"amplitude count {amps.size} is not a power of two")
        if num_qubits is not None and num_qubits != n:
            raise SimulationSizeError(f"{amps.size} amplitudes do not describe {num_qubits} qubits")
        _check_size(n)
        self.amplitudes = amps
        self.num_qubits = n

    def copy(self) -> StateVector:
        return StateVector(self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def tensor(self) -> np.ndarray:
        """View of the amplitudes with one axis per qubit (axis k = qubit k)."""
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def __len__(self):
        return self.amplitudes.size

    def __repr__(self):
        return f"StateVector(num_qubits={self.num_qubits}, amplitudes={self.amplitudes!r})"


def init_state(n: int) -> StateVector:
    """Return ``|0...0>`` on ``n`` qubits."""
    _check_size(n)
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(amps)


def _check_op(op: GateOp, n: int):
    for q in op.qubits:
        _check_qubit(q, n)


def apply(state: StateVector, op: GateOp, *, inplace: bool = False) -> StateVector:
    """Apply ``op`` to ``state``.

    Only the amplitude pairs whose control bits are all 1 are touched; all
    other amplitudes are left bit-for-bit unchanged.
    """
    _check_op(op, state.num_qubits)
    out = state if inplace else state.copy()
    psi = out.tensor()
    u = op.unitary()

    idx0 = [slice(None)] * out.num_qubits
    for c in op.controls:
        idx0[c] = 1
    idx1 = list(idx0)
    idx0[op.target] = 0
    idx1[op.target] = 1
    idx0, idx1 = tuple(idx0), tuple(idx1)

    a0 = psi[idx0].copy()
    a1 = psi[idx1].copy()
    psi[idx0] = u[0, 0] * a0 + u[0, 1] * a1
    psi[idx1] = u[1, 0] * a0 + u[1, 1] * a1
    return out


@dataclass
class Circuit:
    """Ordered list of gates on a fixed-width register."""

    num_qubits: int
    ops: list = field(default_factory=list)

    def __post_init__(self):
        _check_size(self.num_qubits)
        ops, self.ops = list(self.ops), []
        self.extend(ops)

    def append(self, op: GateOp) -> Circuit:
        _check_op(op, self.num_qubits)
        self.ops.append(op)
        return self

    def extend(self, ops: Iterable[GateOp]) -> Circuit:
        for op in ops:
            self.append(op)
        return self

    def run(self, initial: StateVector | None = None) -> StateVector:
        if initial is None:
            state = init_state(self.num_qubits)
        else:
            if initial.num_qubits != self.num_qubits:
                raise SimulationSizeError("initial state width does not match circuit")
            state = initial.copy()
        for op in self.ops:
            apply(state, op, inplace=True)
        return state

    def count(self, kind: str) -> int:
        return sum(op.kind == kind for op in self.ops)

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)


def marginal_probability(state: StateVector, qubit: int) -> tuple[float, float]:
    """Probability of reading 0 and 1 on ``qubit``."""
    _check_qubit(qubit, state.num_qubits)
    probs = np.moveaxis(state.probabilities().reshape((2,) * state.num_qubits), qubit, 0)
    p0 = float(probs[0].sum())
    p1 = float(probs[1].sum())
    return p0, p1


def joint_distribution(state: StateVector, qubits: Sequence[int]) -> np.ndarray:
    """Exact distribution over the listed qubits.

    Entry ``b`` is the probability of the bitstring whose first character is
    the value of ``qubits[0]``.
    """
    qubits = list(qubits)
    if not qubits:
        raise SamplingArgumentError("need at least one qubit")
    if len(set(qubits)) != len(qubits):
        raise SamplingArgumentError(f"repeated qubit in {qubits}")
    n = state.num_qubits
    for q in qubits:
        _check_qubit(q, n)
    probs = state.probabilities().reshape((2,) * n)
    rest = tuple(q for q in range(n) if q not in qubits)
    if rest:
        probs = probs.sum(axis=rest)
    # remaining axes are in ascending qubit order; reorder to the caller's order
    kept = sorted(qubits)
    probs = np.transpose(probs, [kept.index(q) for q in qubits])
    return probs.reshape(-1)


def conditional_distribution(
    state: StateVector, cond_qubit: int, cond_value: int, query_qubit: int
) -> tuple[float, float]:
    """Distribution of ``query_qubit`` given that ``cond_qubit`` reads ``cond_value``."""
    if cond_value not in (0, 1):
        raise SamplingArgumentError(f"condition value must be 0 or 1, got {cond_value!r}")
    if cond_qubit == query_qubit:
        raise SamplingArgumentError("condition and query qubit coincide")
    joint = joint_distribution(state, [cond_qubit, query_qubit]).reshape(2, 2)
    row = joint[cond_value]
    total = row.sum()
    if total <= DEGENERATE_PROB:
        raise DegenerateConditionError(
            f"P(q{cond_qubit} = {cond_value}) is zero; conditional distribution undefined"
        )
    return float(row[0] / total), float(row[1] / total)


def sample_counts(state: StateVector, qubits: Sequence[int], shots: int, seed) -> dict[str, int]:
    """Simulate ``shots`` measurements of ``qubits``; returns nonzero counts by bitstring."""
    if not isinstance(shots, (int, np.integer)) or shots < 1:
        raise SamplingArgumentError(f"shots must be a positive integer, got {shots!r}")
    probs = joint_distribution(state, qubits)
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(int(shots), probs)
    width = len(qubits)
    return {format(i, f"0{width}b"): int(c) for i, c in enumerate(draws) if c}
