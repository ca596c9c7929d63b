import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsim import DomainError
from qsim.entangle import factor_product, is_product_2q
from qsim.gates import apply_hadamard_all
from qsim.measure import RngStream, measure_subset
from qsim.statevec import StateVector, basis_state, tensor, tensor_all

from conftest import random_state, tv_distance

S = 1 / math.sqrt(2)
BELL = StateVector([S, 0, 0, S])


def test_two_qubit_criterion_examples(rng):
    assert not is_product_2q(BELL)
    assert is_product_2q(StateVector([S, 0, S, 0]))
    for _ in range(50):
        assert is_product_2q(tensor(random_state(rng, 1), random_state(rng, 1)))
    with pytest.raises(DomainError):
        is_product_2q(basis_state(3, 0))


def test_factor_basis_state_29():
    sep = factor_product(basis_state(5, 29))
    assert sep.is_product
    bits = [int(np.argmax(np.abs(f.amps))) for f in sep.factors]
    assert bits == [1, 1, 1, 0, 1]
    assert all(abs(abs(f.amps[b]) - 1) < 1e-12 for f, b in zip(sep.factors, bits))


def test_factor_hadamard_state():
    n = 6
    sep = factor_product(apply_hadamard_all(basis_state(n, 0)))
    assert sep.is_product and len(sep.factors) == n
    for f in sep.factors:
        assert np.allclose(f.amps, [S, S], atol=1e-12)


def test_bell_entangled_at_qubit_0():
    sep = factor_product(BELL)
    assert not sep.is_product and sep.entangled_at == 0
    assert sep.residuals[0] == pytest.approx(S)


def test_entanglement_located_later():
    s = tensor(StateVector([0.6, 0.8]), tensor(BELL, basis_state(1, 1)))
    sep = factor_product(s)
    assert sep.entangled_at == 1


def test_phase_convention(rng):
    s = tensor_all([random_state(rng, 1) for _ in range(4)])
    sep = factor_product(s)
    for f in sep.factors[1:]:
        lead = f.amps[np.flatnonzero(np.abs(f.amps) > 1e-12)[0]]
        assert abs(lead.imag) < 1e-12 and lead.real > 0


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**32 - 1))
def test_product_round_trip(n, seed):
    r = np.random.default_rng(seed)
    s = tensor_all([random_state(r, 1) for _ in range(n)])
    sep = factor_product(s)
    assert sep.is_product
    assert np.max(np.abs(tensor_all(sep.factors).amps - s.amps)) < 1e-8


def test_measuring_one_factor_leaves_others_alone(rng):
    s = tensor_all([random_state(rng, 1) for _ in range(3)])
    p2 = (np.abs(s.amps.reshape(2, 2, 2)) ** 2).sum(axis=(0, 1))
    r = RngStream(31)
    counts = np.zeros(2)
    for _ in range(10_000):
        m = measure_subset(s, [0], r)
        counts[measure_subset(m.post_state, [2], r).outcome] += 1
    assert tv_distance(counts / 10_000, p2) < 0.02
