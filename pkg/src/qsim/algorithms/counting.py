"""Quantum counting: estimate the number of solutions from Grover eigenphases."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..gates import apply_hadamard_all
from ..measure import RngStream, measure_subset
from ..statevec import basis_state
from ..transforms import ClassicalOracle, apply_counting, apply_qft
from .records import RunRecord


def error_bound(t: float, n: int, p: int) -> float:
    """``(2π/2^p) sqrt(t(2^n - t)) + (π^2/2^{2p}) |2^n - 2t|``."""
    size = 1 << n
    return (2 * math.pi / (1 << p)) * math.sqrt(max(t * (size - t), 0.0)) + (
        math.pi**2 / (1 << (2 * p))
    ) * abs(size - 2 * t)


@dataclass(frozen=True)
class CountEstimate:
    l_measured: int
    l_folded: int
    omega_tilde: float
    t_tilde: float
    error_bound: float


def estimate_from_measurement(l_measured: int, n: int, p: int) -> CountEstimate:
    folded = (1 << p) - l_measured if l_measured > 1 << (p - 1) else l_measured
    omega = folded / (1 << p)
    t_tilde = (1 << n) * math.sin(math.pi * omega) ** 2
    return CountEstimate(l_measured, folded, omega, t_tilde, error_bound(t_tilde, n, p))


def peak_probability(omega: float, l, p: int):
    """``sin^2(2^p π δ) / (2^{2p} sin^2(π δ))`` with ``δ = ω - l/2^p``; 1 where ``δ`` is an integer."""
    delta = omega - np.asarray(l, dtype=float) / (1 << p)
    exact = np.abs(delta - np.round(delta)) < 1e-12
    safe = np.where(exact, 0.5, delta)
    ratio = np.sin((1 << p) * np.pi * safe) ** 2 / ((1 << (2 * p)) * np.sin(np.pi * safe) ** 2)
    return np.where(exact, 1.0, ratio)


def counter_distribution(n: int, t: int, p: int) -> np.ndarray:
    """Analytic distribution of the measured counter register.

    The start state splits evenly over the two Grover eigenvectors with phases
    ``ω`` and ``1 - ω``, so the result is the equal mixture of both peaks.
    """
    omega = math.asin(math.sqrt(t / (1 << n))) / math.pi
    l = np.arange(1 << p)
    return 0.5 * peak_probability(omega, l, p) + 0.5 * peak_probability(1 - omega, l, p)


def quantum_count(f: ClassicalOracle, rng: RngStream, p: int | None = None, trace: bool = False) -> RunRecord:
    if f.out_bits != 1:
        raise DomainError("counting needs a one-bit oracle")
    n = f.in_bits
    if p is None:
        p = n + 2
    if p < 2:
        raise DomainError(f"need at least 2 counter qubits, got {p}")
    rec = RunRecord("quantum_count", rng.seed, trace=trace)
    s = apply_hadamard_all(basis_state(p + n, 0))
    rec.snapshot("after H on both registers", s)
    s = apply_counting(s, f, p)
    rec.oracle_calls += (1 << p) - 1
    rec.snapshot("after counting gate", s)
    s = apply_qft(s, p, inverse=True)
    rec.snapshot("after inverse QFT on counter", s)
    rec.states["pre_measurement"] = s
    meas = measure_subset(s, range(p), rng)
    rec.measured("counter", meas.outcome)
    rec.final_state = meas.post_state
    est = estimate_from_measurement(meas.outcome, n, p)
    rec.iterations["counter_qubits"] = p
    rec.result = {
        "l_measured": est.l_measured,
        "l_folded": est.l_folded,
        "omega_tilde": est.omega_tilde,
        "t_tilde": est.t_tilde,
        "error_bound": est.error_bound,
        "p": p,
        "success": True,
    }
    return rec


def estimate_of(rec: RunRecord) -> CountEstimate:
    r = rec.result
    return CountEstimate(r["l_measured"], r["l_folded"], r["omega_tilde"], r["t_tilde"], r["error_bound"])
