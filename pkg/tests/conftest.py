import numpy as np
import pytest
from hypothesis import strategies as st

from qocc.simulator import StateVector

ACCEPTANCE_LINES = []


def random_unit(rng, size):
    v = rng.normal(size=size)
    return v / np.linalg.norm(v)


def random_state(rng, n):
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(amps / np.linalg.norm(amps))


def random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def explicit_controlled_matrix(u, target, controls, n):
    """Full 2^n x 2^n matrix (I - P) + P (U on target), P projecting controls onto |1>."""
    eye = np.eye(2)
    proj1 = np.array([[0, 0], [0, 1]])

    def kron_all(factors):
        out = np.array([[1.0]])
        for f in factors:
            out = np.kron(out, f)
        return out

    p = kron_all([proj1 if q in controls else eye for q in range(n)])
    pu = kron_all([proj1 if q in controls else (u if q == target else eye) for q in range(n)])
    return np.eye(2**n) - p + pu


@st.composite
def unit_vectors(draw, size=2):
    vals = draw(st.lists(st.floats(-1, 1, allow_nan=False), min_size=size, max_size=size))
    v = np.array(vals)
    norm = np.linalg.norm(v)
    if norm < 1e-3:
        v = np.zeros(size)
        v[0] = 1.0
        return v
    return v / norm


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def acceptance():
    def record(number, name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name}" + (f" -- {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
