"""Deutsch and Deutsch-Jozsa: one oracle query decides constant vs balanced."""
from __future__ import annotations

from ..errors import DomainError
from ..gates import apply_hadamard, apply_hadamard_all
from ..measure import RngStream, measure_subset
from ..statevec import basis_state, tensor
from ..transforms import ClassicalOracle, apply_oracle
from .records import RunRecord


def _prepare(n: int):
    # |0>_n ⊗ |1>, then H on everything.
    return apply_hadamard_all(tensor(basis_state(n, 0), basis_state(1, 1)))


def deutsch(f: ClassicalOracle, rng: RngStream, trace: bool = False) -> RunRecord:
    if f.in_bits != 1 or f.out_bits != 1:
        raise DomainError("Deutsch's algorithm needs a 1-bit to 1-bit oracle")
    rec = RunRecord("deutsch", rng.seed, trace=trace)
    s = _prepare(1)
    rec.snapshot("after H⊗H", s)
    s = apply_oracle(s, f)
    rec.oracle_calls += 1
    rec.snapshot("after oracle", s)
    s = apply_hadamard(s, [0])
    rec.snapshot("after H⊗I", s)
    rec.states["pre_measurement"] = s
    m = measure_subset(s, [0], rng)
    rec.measured("delta", m.outcome)
    rec.final_state = m.post_state
    rec.result = {
        "verdict": "constant" if m.outcome == 0 else "balanced",
        "delta": m.outcome,
        "success": True,
    }
    return rec


def deutsch_jozsa(f: ClassicalOracle, rng: RngStream, trace: bool = False) -> RunRecord:
    """Promise problem: ``f`` is constant or balanced. Not checked here."""
    if f.out_bits != 1:
        raise DomainError("Deutsch-Jozsa needs a one-bit oracle")
    n = f.in_bits
    rec = RunRecord("deutsch_jozsa", rng.seed, trace=trace)
    s = _prepare(n)
    rec.snapshot("after H", s)
    s = apply_oracle(s, f)
    rec.oracle_calls += 1
    rec.snapshot("after oracle", s)
    s = apply_hadamard(s, range(n))
    rec.snapshot("after H on first register", s)
    rec.states["pre_measurement"] = s
    m = measure_subset(s, range(n), rng)
    rec.measured("k", m.outcome)
    rec.final_state = m.post_state
    rec.result = {
        "verdict": "constant" if m.outcome == 0 else "balanced",
        "k": m.outcome,
        "success": True,
    }
    return rec
