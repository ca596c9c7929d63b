"""Grover search with a known solution count, and the randomized variant for unknown counts."""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DomainError
from ..gates import apply_hadamard_all
from ..measure import RngStream, measure_subset
from ..statevec import StateVector, basis_state, probabilities, tensor
from ..transforms import ClassicalOracle, grover_step
from .records import RunRecord


@dataclass(frozen=True)
class GroverSchedule:
    theta: float
    m_opt: int

    def amplitude(self, j: int, t: int = 1) -> float:
        """Analytic amplitude of each solution in the ``j``-th state (``j = 1`` is the start)."""
        return math.sin((2 * j - 1) * self.theta) / math.sqrt(t)

    def success_probability(self, iterations: int) -> float:
        return math.sin((2 * iterations + 1) * self.theta) ** 2


def schedule(n: int, t: int = 1) -> GroverSchedule:
    """``sin^2 θ = t / 2^n`` and ``m = floor(π / 4θ)``."""
    if not 0 <= t <= 1 << n:
        raise DomainError(f"solution count {t} out of range for {n} qubits")
    theta = math.asin(math.sqrt(t / (1 << n)))
    m_opt = math.floor(math.pi / (4 * theta)) if t >= 1 else 0
    return GroverSchedule(theta, m_opt)


def initial_search_state(n: int) -> StateVector:
    """``|γ>_n ⊗ |->``: H on ``|0...0>|1>``."""
    return apply_hadamard_all(tensor(basis_state(n, 0), basis_state(1, 1)))


def search_success(s: StateVector, f: ClassicalOracle) -> float:
    """Probability that measuring the search register gives a solution."""
    probs = probabilities(s)
    if s.n_qubits == f.in_bits + 1:
        probs = probs.reshape(-1, 2).sum(axis=1)
    return float(probs[f.table == 1].sum())


def grover_known(
    f: ClassicalOracle,
    rng: RngStream,
    t: int = 1,
    iterations: int | None = None,
    trace: bool = False,
) -> RunRecord:
    """Run ``floor(π/4θ)`` Grover iterations (or ``iterations``) and measure."""
    if f.out_bits != 1:
        raise DomainError("Grover needs a one-bit oracle")
    n = f.in_bits
    sched = schedule(n, t)
    m = sched.m_opt if iterations is None else iterations
    rec = RunRecord("grover", rng.seed, trace=trace)
    s = initial_search_state(n)
    rec.snapshot("initial |γ>|->", s)
    for j in range(1, m + 1):
        s = grover_step(s, f)
        rec.oracle_calls += 1
        rec.snapshot(f"after iteration {j}", s)
    rec.iterations["grover"] = m
    rec.states["pre_measurement"] = s
    meas = measure_subset(s, range(n), rng)
    rec.measured("search", meas.outcome)
    rec.final_state = meas.post_state
    found = meas.outcome
    rec.bump("classical_checks")
    rec.result = {
        "found": found,
        "iterations": m,
        "theta": sched.theta,
        "m_opt": sched.m_opt,
        "success_probability": sched.success_probability(m),
        "analytic_amplitudes": [sched.amplitude(j, t) for j in range(1, m + 2)],
        "success": f(found) == 1,
    }
    return rec


def grover_unknown(
    f: ClassicalOracle,
    rng: RngStream,
    lam: float = 6 / 5,
    max_total_iters: int | None = None,
    trace: bool = False,
) -> RunRecord:
    """Randomized Grover for an unknown number of solutions.

    Each round draws ``j`` uniformly from ``{1, ..., ceil(m)}``, applies ``G``
    ``j - 1`` times to a fresh ``|γ>`` and checks the measured index
    classically; on failure ``m <- min(λ m, sqrt(2^n))``. The sum of applied
    iterations is capped by ``max_total_iters`` (default ``ceil(9 sqrt(2^n))``),
    after which the run reports no solution.
    """
    if not 1 < lam < 4 / 3:
        raise DomainError(f"lambda must lie in (1, 4/3), got {lam}")
    if f.out_bits != 1:
        raise DomainError("Grover needs a one-bit oracle")
    n = f.in_bits
    cap = math.sqrt(1 << n)
    if max_total_iters is None:
        max_total_iters = math.ceil(9 * cap)
    rec = RunRecord("grover_unknown", rng.seed, trace=trace)
    m = 1.0
    total = 0
    rounds = 0
    found = None
    start = initial_search_state(n)
    while True:
        j = rng.integers(1, math.ceil(m) + 1)
        if total + (j - 1) > max_total_iters:
            break
        rounds += 1
        s = start
        for _ in range(j - 1):
            s = grover_step(s, f)
        rec.oracle_calls += j - 1
        total += j - 1
        rec.snapshot(f"round {rounds}: {j - 1} iterations", s)
        meas = measure_subset(s, range(n), rng)
        rec.measured("search", meas.outcome)
        rec.bump("classical_checks")
        if f(meas.outcome) == 1:
            found = meas.outcome
            rec.final_state = meas.post_state
            break
        m = min(lam * m, cap)
    rec.iterations.update(rounds=rounds, grover=total)
    rec.result = {
        "found": found,
        "total_iterations": total,
        "verdict": "found" if found is not None else "no solution",
        "success": found is not None,
    }
    return rec
