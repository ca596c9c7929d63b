import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsim import DomainError
from qsim.gates import (
    GateMatrix,
    apply_1q,
    apply_cnot,
    apply_gate,
    apply_hadamard,
    apply_hadamard_all,
    bloch_coords,
    standard_gate,
    zyz_decompose,
)
from qsim.statevec import StateVector, basis_state, uniform_state

from conftest import dense_1q, dense_cnot, random_state, random_unitary

S = 1 / math.sqrt(2)


@pytest.mark.parametrize("name", ["I", "H", "X", "Y", "Z", "CNOT"])
def test_standard_gates_unitary(name):
    g = standard_gate(name)
    assert g.unitarity_error() < 1e-12
    assert g.k_qubits == (2 if name == "CNOT" else 1)


def test_unknown_gate_and_non_unitary():
    with pytest.raises(DomainError):
        standard_gate("T")
    assert not GateMatrix([[1, 1], [0, 1]]).is_unitary()
    with pytest.raises(DomainError):
        GateMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_pauli_algebra():
    X, Y, Z = (standard_gate(n).entries for n in "XYZ")
    for a, b in [(X, Y), (Y, Z), (X, Z)]:
        assert np.allclose(a @ b, -(b @ a))
    assert np.allclose(X @ Y, 1j * Z)


def test_hadamard_and_x_on_basis():
    plus = apply_1q(basis_state(1, 0), standard_gate("H"), 0)
    assert np.allclose(plus.amps, [S, S])
    for j in (0, 1):
        assert apply_1q(basis_state(1, j), standard_gate("X"), 0).allclose(basis_state(1, 1 ^ j))


def test_apply_1q_examples(rng):
    s = apply_1q(basis_state(2, 0), standard_gate("H"), 0)
    assert np.allclose(s.amps, [S, 0, S, 0])
    psi = StateVector([0.6, 0.8j])
    assert np.allclose(apply_1q(psi, standard_gate("Z"), 0).amps, [0.6, -0.8j])
    r = random_state(rng, 4)
    assert apply_1q(r, standard_gate("I"), 2).allclose(r, atol=0)


def test_hadamard_all_examples():
    assert np.allclose(apply_hadamard_all(basis_state(4, 0)).amps, 0.25)
    signs = np.array([1, -1, 1, -1, -1, 1, -1, 1]) / math.sqrt(8)
    assert np.allclose(apply_hadamard_all(basis_state(3, 5)).amps, signs)
    for j in range(8):
        assert apply_hadamard_all(apply_hadamard_all(basis_state(3, j))).allclose(basis_state(3, j))


def test_hadamard_signs_bruteforce():
    # Independent check of (-1)^{j.k} with j.k = popcount(j & k) mod 2.
    n = 5
    for j in range(1 << n):
        out = apply_hadamard_all(basis_state(n, j)).amps
        expect = [(-1) ** bin(j & k).count("1") for k in range(1 << n)]
        assert np.allclose(out * math.sqrt(1 << n), expect)


def test_cnot_examples(rng):
    bell_in = StateVector([S, 0, S, 0])
    assert np.allclose(apply_cnot(bell_in, 0, 1).amps, [S, 0, 0, S])
    assert apply_cnot(basis_state(2, 0), 0, 1).allclose(basis_state(2, 0))
    r = random_state(rng, 5)
    assert apply_cnot(apply_cnot(r, 3, 1), 3, 1).allclose(r)
    with pytest.raises(DomainError, match="control equals target"):
        apply_cnot(r, 2, 2)


def test_apply_gate_dispatch(rng):
    r = random_state(rng, 3)
    assert apply_gate(r, standard_gate("CNOT"), [0, 2]).allclose(apply_cnot(r, 0, 2))
    with pytest.raises(DomainError):
        apply_gate(r, np.eye(4), [0, 1])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_apply_1q_matches_dense(n, seed):
    r = np.random.default_rng(seed)
    s = random_state(r, n)
    q = int(r.integers(n))
    g = random_unitary(r)
    out = apply_1q(s, g, q).amps
    assert np.max(np.abs(out - dense_1q(g, q, n) @ s.amps)) < 1e-10
    assert abs(np.linalg.norm(out) - 1) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_apply_cnot_matches_dense(n, seed):
    r = np.random.default_rng(seed)
    s = random_state(r, n)
    c, t = (int(v) for v in r.choice(n, 2, replace=False))
    assert np.max(np.abs(apply_cnot(s, c, t).amps - dense_cnot(c, t, n) @ s.amps)) < 1e-10


def test_hadamard_subset_matches_dense(rng):
    n = 6
    s = random_state(rng, n)
    H = standard_gate("H").entries
    expect = dense_1q(H, 4, n) @ (dense_1q(H, 1, n) @ s.amps)
    assert np.allclose(apply_hadamard(s, [1, 4]).amps, expect, atol=1e-12)


def test_zyz_examples():
    a = zyz_decompose(np.eye(2))
    assert (a.alpha, a.beta, a.gamma, a.delta) == (0, 0, 0, 0)
    H = standard_gate("H").entries
    assert np.max(np.abs(zyz_decompose(H).matrix() - H)) < 1e-10
    for name in "XYZ":
        m = standard_gate(name).entries
        assert np.max(np.abs(zyz_decompose(m).matrix() - m)) < 1e-10


def test_zyz_angle_ranges(rng):
    for _ in range(200):
        a = zyz_decompose(random_unitary(rng))
        assert -math.pi < a.alpha <= math.pi
        assert 0 <= a.gamma <= math.pi
        assert -2 * math.pi < a.beta <= 2 * math.pi
        assert -2 * math.pi < a.delta <= 2 * math.pi


def test_zyz_rejects():
    with pytest.raises(DomainError):
        zyz_decompose([[1, 1], [0, 1]])
    with pytest.raises(DomainError):
        zyz_decompose(np.eye(4))


def test_bloch_coords():
    p0 = bloch_coords(basis_state(1, 0))
    p1 = bloch_coords(basis_state(1, 1))
    pp = bloch_coords(uniform_state(1))
    assert (p0.theta, p0.phi) == (0, 0)
    assert math.isclose(p1.theta, math.pi) and p1.phi == 0
    assert math.isclose(pp.theta, math.pi / 2) and abs(pp.phi) < 1e-15
    pi_ = bloch_coords(StateVector([S, 1j * S]))
    assert math.isclose(pi_.phi, math.pi / 2)
