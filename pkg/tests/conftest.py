from functools import reduce
from pathlib import Path

import numpy as np
import pytest

from qsim.statevec import StateVector
from qsim.transforms import ClassicalOracle

ROOT = Path(__file__).resolve().parents[1]
CIRCUITS = ROOT / "circuits"
SCHEMAS = ROOT / "schemas"

# f(0)=f(5)=0, f(1)=f(4)=1, f(2)=f(7)=2, ... ; xor-mask 5
SIMON_PAIRS = [(0, 5), (1, 4), (2, 7), (3, 6), (8, 13), (9, 12), (10, 15), (11, 14)]


def simon_table():
    table = [0] * 16
    for value, (a, b) in enumerate(SIMON_PAIRS):
        table[a] = table[b] = value
    return ClassicalOracle(4, 4, table)


def random_amps(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def random_state(rng, n):
    return StateVector(random_amps(rng, n))


def random_unitary(rng, d=2):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def dense_1q(g, q, n):
    """Explicit Kronecker-built operator for a one-qubit gate (test oracle only)."""
    mats = [np.eye(2)] * n
    mats[q] = np.asarray(g)
    return reduce(np.kron, mats)


def dense_cnot(c, t, n):
    dim = 1 << n
    m = np.zeros((dim, dim))
    for j in range(dim):
        cbit = (j >> (n - 1 - c)) & 1
        k = j ^ (cbit << (n - 1 - t))
        m[k, j] = 1
    return m


def dense_oracle(f, n_total, inputs, outputs):
    dim = 1 << n_total
    m = np.zeros((dim, dim))
    for j in range(dim):
        bits = [(j >> (n_total - 1 - q)) & 1 for q in range(n_total)]
        x = 0
        for q in inputs:
            x = (x << 1) | bits[q]
        y = f(x)
        for pos, q in enumerate(outputs):
            bits[q] ^= (y >> (len(outputs) - 1 - pos)) & 1
        k = 0
        for b in bits:
            k = (k << 1) | b
        m[k, j] = 1
    return m


def tv_distance(p, q):
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE: list[str] = []


def report(number, title, ok, detail=""):
    """Record and print one pass/fail line for an acceptance criterion."""
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
