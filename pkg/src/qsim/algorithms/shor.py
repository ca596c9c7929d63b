"""Shor's order finding (simulated) and the classical factoring loop around it."""
from __future__ import annotations

from ..errors import DomainError
from ..gates import apply_hadamard_all
from ..measure import RngStream, marginal, measure_subset
from ..numtheory import (
    check_unit,
    extract_order,
    gcd,
    is_prime,
    modpow,
    order_candidate,
    prime_power_base,
    reduce_order,
)
from ..statevec import MAX_QUBITS, basis_state, tensor
from ..transforms import apply_modexp, apply_qft
from .records import RunRecord


def register_sizes(N: int) -> tuple[int, int]:
    """``(t, n)`` with ``n = ceil(log2 N)`` and ``t = 2n``."""
    n = (N - 1).bit_length()
    return 2 * n, n


def order_finding_round(x: int, N: int, rng: RngStream, rec: RunRecord | None = None) -> tuple[int, int]:
    """Prepare, exponentiate, measure, transform, measure. Returns ``(delta, omega)``."""
    t, n = register_sizes(N)
    first = apply_hadamard_all(basis_state(t, 0))
    s = tensor(first, basis_state(n, 0))
    del first
    s = apply_modexp(s, x, N, t, n)
    if rec is not None:
        rec.oracle_calls += 1
        rec.snapshot("after modular exponentiation", s)
    m2 = measure_subset(s, range(t, t + n), rng)
    delta = m2.outcome
    del s
    s = apply_qft(m2.post_state, t)
    del m2
    if rec is not None and rec.trace:
        rec.snapshot("after QFT on first register", s)
        rec.distribution = marginal(s, range(t))
    m1 = measure_subset(s, range(t), rng)
    if rec is not None:
        rec.final_state = m1.post_state
    return delta, m1.outcome


def shor_order(x: int, N: int, rng: RngStream, max_attempts: int = 8, trace: bool = False) -> RunRecord:
    """Find the multiplicative order of ``x`` mod ``N`` by simulated phase sampling.

    When a run only yields a divisor ``c`` of the order, the next attempt runs
    on ``x**c`` and the partial orders are multiplied together.
    """
    check_unit(x, N)
    t, n = register_sizes(N)
    if t + n > MAX_QUBITS:
        raise DomainError(f"N={N} needs {t + n} qubits, above the limit of {MAX_QUBITS}")
    rec = RunRecord("shor_order", rng.seed, trace=trace)
    partial, y = 1, x
    order = None
    attempts = 0
    while attempts < max_attempts:
        attempts += 1
        delta, omega = order_finding_round(y, N, rng, rec)
        rec.measured("delta", delta)
        rec.measured("omega", omega)
        r = extract_order(omega, t, y, N)
        if r is not None:
            total = partial * r
            if modpow(x, total, N) == 1:
                order = reduce_order(x, total, N)
                break
        c = order_candidate(omega, t, N)
        if c is None or c < 2 or modpow(y, c, N) == 1:
            continue
        partial *= c
        y = modpow(x, partial, N)
        if y == 1:
            order = reduce_order(x, partial, N)
            break
        if partial >= N:
            partial, y = 1, x
    rec.iterations["attempts"] = attempts
    rec.result = {"x": x, "N": N, "t": t, "n": n, "order": order, "success": order is not None}
    return rec


def check_factorable(N: int) -> None:
    if N < 3 or N % 2 == 0:
        raise DomainError(f"N must be odd and greater than 2, got {N}")
    if is_prime(N):
        raise DomainError(f"{N} is prime")
    base = prime_power_base(N)
    if base is not None:
        raise DomainError(f"{N} is a perfect power of {base}")


def shor_factor(
    N: int,
    rng: RngStream,
    max_outer: int = 20,
    max_attempts: int = 8,
    x: int | None = None,
    trace: bool = False,
) -> RunRecord:
    """Split an odd composite non-prime-power ``N`` into two nontrivial factors.

    With ``x`` fixed every outer round reuses it; otherwise a fresh base is
    drawn from the stream each round.
    """
    check_factorable(N)
    if x is not None and not 1 < x < N:
        raise DomainError(f"need 1 < x < N, got x={x}")
    rec = RunRecord("shor_factor", rng.seed, trace=trace)
    result: dict = {"N": N, "success": False}
    for _ in range(max_outer):
        rec.bump("outer")
        base = x if x is not None else rng.integers(2, N)
        result["x"] = base
        d = gcd(base, N)
        if d > 1:
            result.update(factors=sorted([d, N // d]), order=None, method="gcd", success=True)
            break
        sub = shor_order(base, N, rng, max_attempts=max_attempts, trace=trace)
        rec.merge(sub)
        r = sub.result["order"]
        result["order"] = r
        if r is None:
            result["reason"] = "order finding failed"
            continue
        if r % 2:
            result["reason"] = "odd order"
            if x is not None:
                break
            continue
        half = modpow(base, r // 2, N)
        if half == N - 1:
            result["reason"] = "x^(r/2) = -1 mod N"
            if x is not None:
                break
            continue
        f1, f2 = gcd(half + 1, N), gcd(half - 1, N)
        if not all(1 < f < N and N % f == 0 for f in (f1, f2)):
            result["reason"] = "trivial factors"
            continue
        result.pop("reason", None)
        result.update(factors=sorted([f1, f2]), method="order", success=True)
        break
    rec.result = result
    return rec
