"""Seeded measurement with collapse.

Every single measurement consumes exactly one uniform draw from the stream
and picks its outcome by inverse CDF, so a seed fixes the whole outcome
sequence.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .statevec import StateVector, probabilities

EXTINCT = 1e-15


class RngStream:
    """Reproducible uniform stream keyed by ``(seed, *path)``.

    Backed by PCG64 seeded through ``SeedSequence``; both are specified
    bit-for-bit by numpy, so the draws are platform independent.
    """

    def __init__(self, seed: int = 0, path: tuple[int, ...] = ()):
        if not 0 <= seed < 1 << 64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = int(seed)
        self.path = tuple(int(p) for p in path)
        self.counter = 0
        ss = np.random.SeedSequence([self.seed, *self.path]) if self.path else np.random.SeedSequence(self.seed)
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def uniform(self) -> float:
        self.counter += 1
        return float(self._gen.random())

    def integers(self, low: int, high: int) -> int:
        """Uniform integer in ``[low, high)``."""
        self.counter += 1
        return int(self._gen.integers(low, high))

    def multinomial(self, shots: int, probs: np.ndarray) -> np.ndarray:
        self.counter += 1
        return self._gen.multinomial(shots, probs)

    def derive(self, index: int) -> "RngStream":
        """Independent child stream; the parent is left untouched."""
        return RngStream(self.seed, self.path + (index,))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, path={self.path}, counter={self.counter})"


@dataclass
class MeasureResult:
    outcome: int
    post_state: StateVector
    probability: float


def _draw(probs: np.ndarray, rng: RngStream) -> int:
    p = np.where(probs < EXTINCT, 0.0, probs)
    cdf = np.cumsum(p)
    u = rng.uniform() * cdf[-1]
    idx = int(np.searchsorted(cdf, u, side="right"))
    idx = min(idx, p.size - 1)
    # Guard against landing on a zero-probability slot at the top end.
    while p[idx] == 0.0 and idx > 0:
        idx -= 1
    return idx


def measure_all(s: StateVector, rng: RngStream) -> MeasureResult:
    probs = probabilities(s)
    j = _draw(probs, rng)
    post = np.zeros(s.dim, dtype=np.complex128)
    post[j] = 1.0
    return MeasureResult(j, StateVector._wrap(post), float(probs[j]))


def _normalize_subset(s: StateVector, qubits) -> list[int]:
    qs = [int(q) for q in qubits]
    if not qs:
        raise DomainError("cannot measure an empty set of qubits")
    if len(set(qs)) != len(qs):
        raise DomainError("measured qubits must be distinct")
    for q in qs:
        if not 0 <= q < s.n_qubits:
            raise DomainError(f"qubit {q} out of range for {s.n_qubits} qubits")
    return qs


def block_marginal(amps: np.ndarray, lo: int, k: int) -> np.ndarray:
    """Marginal of the contiguous block ``[lo, lo + k)`` in one pass over the data."""
    x = amps.view(np.float64).reshape(1 << lo, 1 << k, -1)
    if x.shape[0] == 1:
        return np.einsum("kb,kb->k", x[0], x[0])
    if x.shape[2] == 2:
        y = x.reshape(x.shape[0], -1)
        return np.einsum("ij,ij->j", y, y).reshape(-1, 2).sum(axis=1)
    return np.einsum("akb,akb->k", x, x)


def marginal(s: StateVector, qubits) -> np.ndarray:
    """Distribution of the listed qubits, first listed qubit most significant."""
    qs = _normalize_subset(s, qubits)
    n = s.n_qubits
    if qs == list(range(qs[0], qs[0] + len(qs))):
        return block_marginal(s.amps, qs[0], len(qs))
    t = probabilities(s).reshape((2,) * n)
    rest = tuple(i for i in range(n) if i not in qs)
    m = t.sum(axis=rest) if rest else t
    kept = sorted(qs)
    m = np.transpose(m, [kept.index(q) for q in qs])
    return m.reshape(-1)


def _collapse(s: StateVector, qs: list[int], outcome: int, p: float) -> StateVector:
    n = s.n_qubits
    k = len(qs)
    scale = 1.0 / math.sqrt(p)
    if qs == list(range(qs[0], qs[0] + k)):
        lo = qs[0]
        v = s.amps.reshape(1 << lo, 1 << k, -1)
        out = np.zeros(v.shape, dtype=np.complex128)
        out[:, outcome, :] = v[:, outcome, :] * scale
        return StateVector._wrap(out)
    v = s.amps.reshape((2,) * n)
    out = np.zeros(v.shape, dtype=np.complex128)
    sel = [slice(None)] * n
    for pos, q in enumerate(qs):
        sel[q] = (outcome >> (k - 1 - pos)) & 1
    sel = tuple(sel)
    out[sel] = v[sel] * scale
    return StateVector._wrap(out)


def measure_subset(s: StateVector, qubits, rng: RngStream) -> MeasureResult:
    """Measure some qubits; the rest stay in (renormalized) superposition.

    The outcome reads the listed qubits in the given order, first one as
    the most significant bit.
    """
    qs = _normalize_subset(s, qubits)
    probs = marginal(s, qs)
    outcome = _draw(probs, rng)
    p = float(probs[outcome])
    return MeasureResult(outcome, _collapse(s, qs, outcome, p), p)


def sample_counts(s: StateVector, shots: int, rng: RngStream) -> dict[int, int]:
    """Non-collapsing multinomial sample of the full register."""
    if shots < 1:
        raise DomainError("shots must be at least 1")
    probs = probabilities(s)
    probs = np.where(probs < EXTINCT, 0.0, probs)
    counts = rng.multinomial(shots, probs / probs.sum())
    nz = np.flatnonzero(counts)
    return {int(j): int(counts[j]) for j in nz}


def histogram_json(counts, shots: int | None = None) -> dict:
    counts = Counter(counts) if not isinstance(counts, dict) else counts
    total = sum(counts.values()) if shots is None else shots
    return {"shots": int(total), "counts": {str(k): int(v) for k, v in sorted(counts.items())}}
