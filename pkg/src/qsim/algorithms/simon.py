"""Simon's algorithm: recover the xor-mask from samples orthogonal to it."""
from __future__ import annotations

from ..errors import DomainError
from ..gates import apply_hadamard
from ..gf2 import GF2Basis, nullspace_nontrivial
from ..measure import RngStream, measure_subset
from ..statevec import basis_state
from ..transforms import ClassicalOracle, apply_oracle
from .records import RunRecord


def simon_round(f: ClassicalOracle, rng: RngStream, rec: RunRecord | None = None) -> tuple[int, int]:
    """One quantum round; returns ``(delta, omega)``."""
    n = f.in_bits
    s = apply_hadamard(basis_state(2 * n, 0), range(n))
    s = apply_oracle(s, f)
    if rec is not None:
        rec.oracle_calls += 1
        rec.snapshot("after oracle", s)
    m2 = measure_subset(s, range(n, 2 * n), rng)
    s = apply_hadamard(m2.post_state, range(n))
    if rec is not None:
        rec.snapshot(f"after H, second register = {m2.outcome}", s)
    m1 = measure_subset(s, range(n), rng)
    if rec is not None:
        rec.final_state = m1.post_state
    return m2.outcome, m1.outcome


def simon(f: ClassicalOracle, rng: RngStream, max_rounds: int | None = None, trace: bool = False) -> RunRecord:
    n = f.in_bits
    if f.out_bits != n:
        raise DomainError("Simon's algorithm needs an n-bit to n-bit oracle")
    if max_rounds is None:
        max_rounds = 10 * n
    rec = RunRecord("simon", rng.seed, trace=trace)
    basis = GF2Basis(n)
    omegas = []
    rounds = 0
    while basis.rank < n - 1 and rounds < max_rounds:
        delta, omega = simon_round(f, rng, rec)
        rounds += 1
        rec.measured("delta", delta)
        rec.measured("omega", omega)
        omegas.append(omega)
        basis.add(omega)
    rec.iterations["rounds"] = rounds
    result = {"omegas": omegas, "rank": basis.rank, "s": None, "success": False}
    if basis.rank == n - 1:
        s = nullspace_nontrivial(basis)
        rec.bump("classical_checks")
        if f(0) == f(s):
            result.update(s=s, success=True)
        else:
            result["reason"] = "candidate mask fails f(0) == f(s)"
    else:
        result["reason"] = f"rank {basis.rank} < {n - 1} after {rounds} rounds"
    rec.result = result
    return rec
