"""Structured multi-qubit unitaries applied as specialised kernels.

All block kernels view the amplitude array as ``(2**lo, 2**q, 2**rest)`` for
a contiguous qubit block ``[lo, lo + q)`` and act on the middle axis. The
oracle and modular-exponentiation maps are permutations of amplitudes, so
they are unitary by construction.
"""
from __future__ import annotations

import math
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .statevec import StateVector


class OracleLoadError(DomainError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"{message}, line {line}" if line is not None else message)


class ClassicalOracle:
    """Total function ``{0..2**n-1} -> {0..2**m-1}`` stored as a lookup table."""

    __slots__ = ("in_bits", "out_bits", "table")

    def __init__(self, in_bits: int, out_bits: int, table):
        if in_bits < 1 or out_bits < 1:
            raise DomainError("oracle needs at least one input and one output bit")
        if callable(table):
            table = [table(j) for j in range(1 << in_bits)]
        arr = np.asarray(table, dtype=np.int64).reshape(-1)
        if arr.size != 1 << in_bits:
            raise DomainError(f"oracle table has {arr.size} entries, expected {1 << in_bits}")
        if arr.size and (arr.min() < 0 or arr.max() >= 1 << out_bits):
            raise DomainError(f"oracle outputs must fit in {out_bits} bits")
        arr.flags.writeable = False
        self.in_bits = in_bits
        self.out_bits = out_bits
        self.table = arr

    def __call__(self, j: int) -> int:
        return int(self.table[j])

    def solutions(self) -> list[int]:
        return [int(j) for j in np.flatnonzero(self.table)]

    def to_text(self) -> str:
        lines = [f"{self.in_bits} {self.out_bits}"]
        lines += [f"{j} {int(v)}" for j, v in enumerate(self.table)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_function(cls, in_bits: int, out_bits: int, fn: Callable[[int], int]) -> "ClassicalOracle":
        return cls(in_bits, out_bits, fn)

    @classmethod
    def indicator(cls, in_bits: int, marked) -> "ClassicalOracle":
        table = np.zeros(1 << in_bits, dtype=np.int64)
        table[list(marked)] = 1
        return cls(in_bits, 1, table)

    def __repr__(self) -> str:
        return f"ClassicalOracle(in_bits={self.in_bits}, out_bits={self.out_bits})"


def parse_oracle(text: str) -> ClassicalOracle:
    """Parse the ``n m`` header + ``j f(j)`` lines table format."""
    lines = text.splitlines()
    header = None
    values: dict[int, int] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise OracleLoadError(f"expected two integers, got {line!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise OracleLoadError(f"non-integer field in {line!r}", lineno) from None
        if header is None:
            if a < 1 or b < 1 or a > 26 or b > 26:
                raise OracleLoadError(f"bad header sizes {a} {b}", lineno)
            header = (a, b)
            continue
        n, m = header
        if not 0 <= a < 1 << n:
            raise OracleLoadError(f"input {a} out of range for {n} bits", lineno)
        if not 0 <= b < 1 << m:
            raise OracleLoadError(f"output {b} does not fit in {m} bits", lineno)
        if a in values:
            raise OracleLoadError(f"input {a} defined twice", lineno)
        values[a] = b
    if header is None:
        raise OracleLoadError("missing 'n m' header")
    n, m = header
    missing = [j for j in range(1 << n) if j not in values]
    if missing:
        raise OracleLoadError(f"no value for input {missing[0]} ({len(missing)} inputs unspecified)")
    return ClassicalOracle(n, m, [values[j] for j in range(1 << n)])


def load_oracle(path) -> ClassicalOracle:
    return parse_oracle(Path(path).read_text(encoding="utf-8"))


def _block(s: StateVector, lo: int, q: int) -> np.ndarray:
    if q < 1 or lo < 0 or lo + q > s.n_qubits:
        raise DomainError(f"block [{lo}, {lo + q}) does not fit in {s.n_qubits} qubits")
    return s.amps.reshape(1 << lo, 1 << q, -1)


def _is_contiguous(qs: Sequence[int]) -> bool:
    return all(b == a + 1 for a, b in zip(qs, qs[1:]))


def apply_oracle(s: StateVector, f: ClassicalOracle, inputs=None, outputs=None) -> StateVector:
    """``|j>|k> -> |j>|k xor f(j)>``.

    By default the first ``f.in_bits`` qubits are the input register and the
    next ``f.out_bits`` qubits the output register, and ``s`` must have exactly
    that many qubits. Explicit qubit lists allow any disjoint placement.
    """
    n, m = f.in_bits, f.out_bits
    if inputs is None and outputs is None:
        if s.n_qubits != n + m:
            raise DomainError(f"oracle needs {n + m} qubits, state has {s.n_qubits}")
        inputs, outputs = list(range(n)), list(range(n, n + m))
    else:
        inputs = list(range(n)) if inputs is None else list(inputs)
        outputs = list(range(n, n + m)) if outputs is None else list(outputs)
    if len(inputs) != n or len(outputs) != m:
        raise DomainError("register sizes do not match the oracle")
    qs = inputs + outputs
    if len(set(qs)) != len(qs) or min(qs) < 0 or max(qs) >= s.n_qubits:
        raise DomainError("oracle registers overlap or fall outside the state")

    table = f.table
    if _is_contiguous(qs):
        v = _block(s, qs[0], n + m).reshape(1 << qs[0], 1 << n, 1 << m, -1)
        j = np.arange(1 << n)[:, None]
        k = np.arange(1 << m)[None, :]
        # XOR is an involution, so the gather below is the forward permutation.
        return StateVector._wrap(v[:, j, k ^ table[j], :])

    nq = s.n_qubits
    idx = np.arange(1 << nq, dtype=np.int64)
    jv = np.zeros_like(idx)
    for q in inputs:
        jv = (jv << 1) | ((idx >> (nq - 1 - q)) & 1)
    fv = table[jv]
    mask = np.zeros_like(idx)
    for pos, q in enumerate(outputs):
        bit = (fv >> (m - 1 - pos)) & 1
        mask |= bit << (nq - 1 - q)
    return StateVector._wrap(s.amps[idx ^ mask])


def apply_phase_oracle(s: StateVector, f: ClassicalOracle, lo: int = 0) -> StateVector:
    """Negate amplitudes whose block ``[lo, lo + n)`` holds a ``j`` with ``f(j) = 1``.

    Equivalent to the XOR oracle with its output qubit held in ``|->``.
    """
    if f.out_bits != 1:
        raise DomainError("phase oracle needs a single output bit")
    v = _block(s, lo, f.in_bits)
    signs = 1 - 2 * f.table
    return StateVector._wrap(v * signs[None, :, None])


def _powers_mod(x: int, count: int, N: int) -> np.ndarray:
    # x^j mod N for j < count; computed over one period and tiled.
    seq = [1 % N]
    cur = 1 % N
    while len(seq) < count:
        cur = cur * x % N
        if cur == seq[0]:
            break
        seq.append(cur)
    period = np.array(seq, dtype=np.int64)
    reps = -(-count // period.size)
    return np.tile(period, reps)[:count]


def apply_modexp(s: StateVector, x: int, N: int, t_qubits: int, n_qubits: int) -> StateVector:
    """``|j>_t |k>_n -> |j>_t |(k + x^j) mod N>_n`` for ``k < N``; identity for ``k >= N``."""
    if N < 2 or not 1 < x < N or math.gcd(x, N) != 1:
        raise DomainError(f"need 1 < x < N with gcd(x, N) = 1, got x={x}, N={N}")
    if s.n_qubits != t_qubits + n_qubits:
        raise DomainError(f"state has {s.n_qubits} qubits, expected {t_qubits + n_qubits}")
    if N > 1 << n_qubits:
        raise DomainError(f"{n_qubits} qubits cannot hold residues mod {N}")
    v = s.amps.reshape(1 << t_qubits, 1 << n_qubits)
    out = np.empty_like(v)
    out[:, N:] = v[:, N:]
    # x^j mod N is periodic in j, so rows sharing a shift form a strided slice.
    powers = _powers_mod(x, 1 << t_qubits, N)
    period = _period(powers)
    for b in range(period):
        shift = int(powers[b])
        src, dst = v[b::period], out[b::period]
        dst[:, shift:N] = src[:, : N - shift]
        dst[:, :shift] = src[:, N - shift : N]
    return StateVector._wrap(out)


def _period(powers: np.ndarray) -> int:
    hits = np.flatnonzero(powers[1:] == powers[0])
    return int(hits[0]) + 1 if hits.size else powers.size


def _bit_reverse(q: int) -> np.ndarray:
    idx = np.arange(1 << q)
    rev = np.zeros_like(idx)
    for _ in range(q):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def _fft_rows(x: np.ndarray, q: int, sign: float) -> np.ndarray:
    """Radix-2 decimation-in-time DFT along axis 0, kernel ``e^{sign 2πi jk / 2^q}``."""
    dim = 1 << q
    y = x[_bit_reverse(q)]
    cols = y.shape[1]
    size = 2
    while size <= dim:
        half = size // 2
        tw = np.exp(sign * 2j * np.pi * np.arange(half) / size)[None, :, None]
        blocks = y.reshape(dim // size, 2, half, cols)
        even = blocks[:, 0]
        odd = blocks[:, 1] * tw
        y = np.concatenate((even + odd, even - odd), axis=1).reshape(dim, cols)
        size *= 2
    return y / math.sqrt(dim)


def apply_qft(s: StateVector, q: int | None = None, inverse: bool = False, lo: int = 0) -> StateVector:
    """QFT on the block ``[lo, lo + q)``; defaults to the whole state.

    Forward kernel is ``e^{-2πi jk/2^q}``, the inverse uses the positive sign.
    Trailing configurations whose block amplitudes are all zero are skipped,
    which matters after a register has been measured.
    """
    if q is None:
        q = s.n_qubits - lo
    v = _block(s, lo, q)
    sign = 1.0 if inverse else -1.0
    heads, dim, tails = v.shape
    cols = np.moveaxis(v, 1, 0).reshape(dim, heads * tails)
    if cols.shape[1] > 1:
        flat = cols.view(np.float64)
        live = np.flatnonzero(np.einsum("ij,ij->j", flat, flat).reshape(-1, 2).sum(axis=1) > 0)
        out = np.zeros(cols.shape, dtype=np.complex128)
        if live.size == cols.shape[1]:
            out = _fft_rows(cols, q, sign)
        elif live.size:
            out[:, live] = _fft_rows(cols[:, live], q, sign)
    else:
        out = _fft_rows(cols, q, sign)
    out = np.moveaxis(out.reshape(dim, heads, tails), 0, 1)
    return StateVector._wrap(out)


def dft_matrix(q: int, inverse: bool = False) -> np.ndarray:
    """Dense QFT matrix, only meant as a small-size reference."""
    dim = 1 << q
    sign = 1.0 if inverse else -1.0
    jk = np.outer(np.arange(dim), np.arange(dim))
    return np.exp(sign * 2j * np.pi * jk / dim) / math.sqrt(dim)


def apply_diffusion(s: StateVector, q: int | None = None, lo: int = 0) -> StateVector:
    """Inversion about the mean, ``2|γ><γ| - I``, on the block ``[lo, lo + q)``."""
    if q is None:
        q = s.n_qubits - lo
    v = _block(s, lo, q)
    mean = v.mean(axis=1, keepdims=True)
    return StateVector._wrap(2.0 * mean - v)


def _grover_rows(v: np.ndarray, signs: np.ndarray, ancilla: bool) -> np.ndarray:
    """One Grover iteration on each row of ``v`` with shape (rows, 2**q[, 2])."""
    if ancilla:
        # XOR oracle on the trailing ancilla: swap its two components where f = 1.
        w = np.where((signs < 0)[None, :, None], v[:, :, ::-1], v)
    else:
        w = v * signs[None, :]
    mean = w.mean(axis=1, keepdims=True)
    return 2.0 * mean - w


def _search_layout(s: StateVector, f: ClassicalOracle, lo: int) -> bool:
    q = f.in_bits
    if s.n_qubits == lo + q + 1:
        return True
    if s.n_qubits == lo + q:
        return False
    raise DomainError(f"state has {s.n_qubits} qubits; expected {lo + q} or {lo + q + 1}")


def grover_step(s: StateVector, f: ClassicalOracle) -> StateVector:
    """One Grover iteration ``(Γ ⊗ I) O_f``.

    ``s`` either holds the search register plus a trailing ancilla (the ancilla
    should be ``|->`` for the usual phase kickback) or only the search register,
    in which case the oracle acts as a phase flip.
    """
    if f.out_bits != 1:
        raise DomainError("Grover needs a one-bit oracle")
    ancilla = _search_layout(s, f, 0)
    signs = 1 - 2 * f.table
    v = s.amps.reshape(1, 1 << f.in_bits, 2) if ancilla else s.amps.reshape(1, -1)
    return StateVector._wrap(_grover_rows(v, signs, ancilla))


def apply_counting(s: StateVector, f: ClassicalOracle, p: int) -> StateVector:
    """``|m>_p |ψ> -> |m>_p G^m |ψ>`` for every counter value ``m``."""
    if f.out_bits != 1:
        raise DomainError("counting needs a one-bit oracle")
    if p < 1:
        raise DomainError("counter register needs at least one qubit")
    ancilla = _search_layout(s, f, p)
    signs = 1 - 2 * f.table
    shape = (1 << p, 1 << f.in_bits, 2) if ancilla else (1 << p, 1 << f.in_bits)
    out = s.copy_amps().reshape(shape)
    # Row m has G applied once for every k in 1..m.
    if ancilla:
        for k in range(1, 1 << p):
            out[k:] = _grover_rows(out[k:], signs, True)
        return StateVector._wrap(out)
    # Phase form in place: G v = (2/N) (signs . v) - signs * v, row by row.
    scale = 2.0 / (1 << f.in_bits)
    csigns = signs.astype(np.complex128)
    neg = -csigns
    for k in range(1, 1 << p):
        blk = out[k:]
        m = blk @ csigns
        m *= scale
        blk *= neg
        blk += m[:, None]
    return StateVector._wrap(out)
