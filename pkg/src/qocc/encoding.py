"""Amplitude encoding of real unit vectors with cascades of controlled Ry gates.

A vector of length ``2**n`` is loaded on ``n`` data qubits. The angle for
level ``s`` (``s = n`` is the most significant data qubit, ``s = 1`` the
least) and control pattern ``j`` splits the norm of amplitude block ``j`` of
size ``2**s`` between its lower and upper half:

    beta[s][j] = 2 * arcsin(|upper half| / |block|)

At the finest level the two amplitudes of each pair are used with their
signs, ``beta = 2 * atan2(a_odd, a_even)``, which lets real vectors with
negative entries round-trip exactly. A block with zero norm gets angle 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import EncodingError, LoaderSpecError
from .simulator import Circuit, GateOp, ry, x

NORM_TOL = 1e-9


def _as_unit_vector(v, what="vector") -> np.ndarray:
    arr = np.asarray(v)
    if np.iscomplexobj(arr):
        if np.any(np.imag(arr) != 0):
            raise EncodingError(f"{what} must be real")
        arr = np.real(arr)
    try:
        arr = arr.astype(float).ravel()
    except (TypeError, ValueError) as exc:
        raise EncodingError(f"{what} is not numeric") from exc
    if not np.all(np.isfinite(arr)):
        raise EncodingError(f"{what} has non-finite entries")
    norm = np.linalg.norm(arr)
    if norm == 0.0:
        raise EncodingError(f"{what} is the zero vector")
    if abs(norm - 1.0) > NORM_TOL:
        raise EncodingError(f"{what} has norm {norm:.12g}, expected 1")
    return arr


@dataclass(frozen=True)
class AngleTree:
    """Rotation angles per level; ``levels[0]`` is level ``n`` (one angle),
    ``levels[-1]`` is level 1 (``2**(n-1)`` angles)."""

    levels: tuple

    @property
    def num_qubits(self) -> int:
        return len(self.levels)

    def level(self, s: int) -> np.ndarray:
        if not 1 <= s <= self.num_qubits:
            raise IndexError(f"level {s} outside 1..{self.num_qubits}")
        return self.levels[self.num_qubits - s]

    def as_dict(self) -> dict:
        return {self.num_qubits - k: [float(b) for b in lvl] for k, lvl in enumerate(self.levels)}


def angles_from_vector(v) -> AngleTree:
    """Compute the loader angles for a real unit vector of length ``2**n``."""
    arr = _as_unit_vector(v)
    size = arr.size
    n = int(np.log2(size))
    if size < 2 or 2**n != size:
        raise EncodingError(f"length {size} is not a power of two >= 2")

    levels = []
    for s in range(n, 1, -1):
        block = 2**s
        half = block // 2
        blocks = arr.reshape(-1, block)
        lower = np.linalg.norm(blocks[:, :half], axis=1)
        upper = np.linalg.norm(blocks[:, half:], axis=1)
        levels.append(2.0 * np.arctan2(upper, lower))

    pairs = arr.reshape(-1, 2)
    finest = 2.0 * np.arctan2(pairs[:, 1], pairs[:, 0])
    finest[np.hypot(pairs[:, 0], pairs[:, 1]) == 0.0] = 0.0
    levels.append(finest)
    return AngleTree(tuple(np.asarray(lvl, dtype=float) for lvl in levels))


def two_feature_angle(v) -> float:
    """Angle ``theta`` with ``Ry(theta)|0> = v[0]|0> + v[1]|1>``."""
    arr = _as_unit_vector(v)
    if arr.size != 2:
        raise EncodingError(f"expected 2 features, got {arr.size}")
    return float(2.0 * np.arctan2(arr[1], arr[0]))


@dataclass(frozen=True)
class LoaderSpec:
    data_qubits: tuple
    angle_tree: AngleTree
    extra_controls: tuple = ()  # (qubit, required bit) pairs

    def __post_init__(self):
        object.__setattr__(self, "data_qubits", tuple(int(q) for q in self.data_qubits))
        object.__setattr__(
            self, "extra_controls", tuple((int(q), int(b)) for q, b in self.extra_controls)
        )
        data = self.data_qubits
        ctrl = [q for q, _ in self.extra_controls]
        if len(set(data)) != len(data):
            raise LoaderSpecError(f"repeated data qubit in {data}")
        if len(set(ctrl)) != len(ctrl):
            raise LoaderSpecError(f"repeated control qubit in {ctrl}")
        if set(data) & set(ctrl):
            raise LoaderSpecError("data qubits and extra controls overlap")
        if any(b not in (0, 1) for _, b in self.extra_controls):
            raise LoaderSpecError("control bits must be 0 or 1")
        if len(data) != self.angle_tree.num_qubits:
            raise LoaderSpecError(
                f"{len(data)} data qubits for an angle tree over {self.angle_tree.num_qubits}"
            )


def _conjugated(gate: GateOp, zero_controls: Sequence[int]) -> list:
    flips = [x(q) for q in zero_controls]
    return flips + [gate] + flips[::-1]


def loader_circuit(spec: LoaderSpec, num_qubits: int | None = None):
    """Gates that prepare the encoded vector on ``spec.data_qubits``.

    Returns a list of gates, or a :class:`Circuit` when ``num_qubits`` is given.
    """
    tree = spec.angle_tree
    data = spec.data_qubits
    extra_on = [q for q, b in spec.extra_controls if b == 1]
    extra_off = [q for q, b in spec.extra_controls if b == 0]

    ops = []
    for depth, angles in enumerate(tree.levels):
        target = data[depth]
        higher = data[:depth]
        for j, beta in enumerate(angles):
            bits = [(j >> (depth - 1 - k)) & 1 for k in range(depth)]
            off = [q for q, b in zip(higher, bits) if b == 0] + extra_off
            gate = ry(beta, target, list(higher) + extra_on + extra_off)
            ops.extend(_conjugated(gate, off))
    if num_qubits is not None:
        return Circuit(num_qubits, ops)
    return ops


def encode(v, data_qubits=None, extra_controls=()) -> list:
    """Shortcut: angles plus loader gates for ``v``."""
    tree = angles_from_vector(v)
    if data_qubits is None:
        data_qubits = range(tree.num_qubits)
    return loader_circuit(LoaderSpec(tuple(data_qubits), tree, tuple(extra_controls)))
