"""Dense n-qubit pure states and the tensor-algebra helpers built on them.

Amplitudes are stored flat, indexed by the basis integer. Qubit 0 is the
leftmost tensor factor, i.e. the most significant bit of the index, so
``|a_{n-1} ... a_1 a_0>`` lives at index ``a``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

NORM_TOL = 1e-10
RENORM_TOL = 1e-6
MAX_QUBITS = 26


class StateVector:
    """Unit-norm vector of ``2**n_qubits`` complex amplitudes.

    Raw amplitudes are renormalized when their norm is off by at most
    ``RENORM_TOL``; anything further from unit norm is rejected.
    The stored array is read-only; operations return new states.
    """

    __slots__ = ("n_qubits", "amps")

    def __init__(self, amps, *, max_qubits: int | None = None):
        arr = np.array(amps, dtype=np.complex128).reshape(-1)
        dim = arr.size
        if dim < 2 or dim & (dim - 1):
            raise DomainError(f"amplitude count {dim} is not a power of two >= 2")
        n = dim.bit_length() - 1
        limit = MAX_QUBITS if max_qubits is None else max_qubits
        if n > limit:
            raise DomainError(f"{n} qubits exceeds the limit of {limit}")
        norm = math.sqrt(float(np.vdot(arr, arr).real))
        if abs(norm - 1.0) > RENORM_TOL:
            raise DomainError(f"state norm {norm!r} is not 1")
        if abs(norm - 1.0) > NORM_TOL:
            arr /= norm
        arr.flags.writeable = False
        self.n_qubits = n
        self.amps = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "StateVector":
        # Kernel output: already unit norm by construction, skip validation.
        obj = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.complex128).reshape(-1)
        arr.flags.writeable = False
        obj.n_qubits = arr.size.bit_length() - 1
        obj.amps = arr
        return obj

    @property
    def dim(self) -> int:
        return self.amps.size

    def norm(self) -> float:
        return math.sqrt(float(np.vdot(self.amps, self.amps).real))

    def copy_amps(self) -> np.ndarray:
        """Writable copy of the amplitude array."""
        return self.amps.copy()

    def allclose(self, other: "StateVector", atol: float = 1e-10) -> bool:
        return self.n_qubits == other.n_qubits and bool(
            np.allclose(self.amps, other.amps, rtol=0, atol=atol)
        )

    def to_json(self) -> dict:
        return {"n": self.n_qubits, "amps": [[float(a.real), float(a.imag)] for a in self.amps]}

    @classmethod
    def from_json(cls, obj: dict) -> "StateVector":
        amps = [complex(re, im) for re, im in obj["amps"]]
        state = cls(amps)
        if state.n_qubits != obj["n"]:
            raise DomainError("qubit count does not match amplitude count")
        return state

    def __len__(self) -> int:
        return self.amps.size

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits})"


@dataclass(frozen=True)
class BlochPoint:
    theta: float
    phi: float


def basis_state(n: int, a: int) -> StateVector:
    """The computational basis state ``|a>_n``."""
    if n < 1:
        raise DomainError(f"need at least one qubit, got {n}")
    if not 0 <= a < (1 << n):
        raise DomainError(f"index {a} does not fit in {n} qubits")
    if n > MAX_QUBITS:
        raise DomainError(f"{n} qubits exceeds the limit of {MAX_QUBITS}")
    arr = np.zeros(1 << n, dtype=np.complex128)
    arr[a] = 1.0
    return StateVector._wrap(arr)


def uniform_state(n: int) -> StateVector:
    """Equal superposition of all ``2**n`` basis states."""
    if n < 1:
        raise DomainError(f"need at least one qubit, got {n}")
    dim = 1 << n
    return StateVector._wrap(np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """``a ⊗ b``; ``a`` supplies the high-order qubits."""
    n = a.n_qubits + b.n_qubits
    if n > MAX_QUBITS:
        raise DomainError(f"{n} qubits exceeds the limit of {MAX_QUBITS}")
    nz = np.flatnonzero(b.amps)
    if 4 * nz.size >= b.amps.size:
        return StateVector._wrap(np.multiply.outer(a.amps, b.amps))
    # Sparse right factor (typically a basis state): fill only its live columns.
    out = np.zeros((a.amps.size, b.amps.size), dtype=np.complex128)
    out[:, nz] = np.multiply.outer(a.amps, b.amps[nz])
    return StateVector._wrap(out.reshape(-1))


def tensor_all(states) -> StateVector:
    states = list(states)
    if not states:
        raise DomainError("cannot tensor an empty sequence")
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


def _check_same_dim(a: StateVector, b: StateVector) -> None:
    if a.n_qubits != b.n_qubits:
        raise DomainError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")


def inner(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    _check_same_dim(a, b)
    return complex(np.vdot(a.amps, b.amps))


def outer(a: StateVector, b: StateVector) -> np.ndarray:
    """``|a><b|`` as a dense matrix."""
    _check_same_dim(a, b)
    return np.outer(a.amps, b.amps.conj())


def probabilities(s: StateVector) -> np.ndarray:
    a = s.amps
    return a.real * a.real + a.imag * a.imag


def kron(A, B) -> np.ndarray:
    """Kronecker product of two rectangular matrices.

    Written out as a block assembly rather than delegating to ``np.kron`` so
    the tests can use ``np.kron`` as an independent check. Two vectors give
    a vector.
    """
    A, B = np.asarray(A), np.asarray(B)
    if A.ndim == 1 and B.ndim == 1:
        return np.multiply.outer(A, B).reshape(-1)
    A, B = np.atleast_2d(A), np.atleast_2d(B)
    ra, ca = A.shape
    rb, cb = B.shape
    dtype = np.result_type(A, B)
    out = np.empty((ra, rb, ca, cb), dtype=dtype)
    out[...] = A[:, None, :, None] * B[None, :, None, :]
    return out.reshape(ra * rb, ca * cb)
