"""Dense single- and two-qubit gates and their strided application.

Gates never get expanded to ``2**n x 2**n`` operators here. Each kernel views
the amplitude array as ``(2**q, 2, 2**rest)`` around the target qubit and
updates the two halves directly.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .statevec import BlochPoint, StateVector

_S = 1.0 / math.sqrt(2.0)


class GateMatrix:
    """A ``2**k x 2**k`` complex matrix meant to be unitary."""

    __slots__ = ("k_qubits", "entries")

    def __init__(self, entries):
        m = np.array(entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"gate must be square, got shape {m.shape}")
        dim = m.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise DomainError(f"gate dimension {dim} is not a power of two")
        m.flags.writeable = False
        self.k_qubits = dim.bit_length() - 1
        self.entries = m

    def unitarity_error(self) -> float:
        """``max |U U† - I|`` over entries, taking the worse of both products."""
        u = self.entries
        eye = np.eye(u.shape[0])
        return float(max(np.abs(u @ u.conj().T - eye).max(), np.abs(u.conj().T @ u - eye).max()))

    def is_unitary(self, tol: float = 1e-10) -> bool:
        return self.unitarity_error() < tol

    def __matmul__(self, other: "GateMatrix") -> "GateMatrix":
        return GateMatrix(self.entries @ other.entries)

    def __repr__(self) -> str:
        return f"GateMatrix(k_qubits={self.k_qubits})"


_STANDARD = {
    "I": [[1, 0], [0, 1]],
    "H": [[_S, _S], [_S, -_S]],
    "X": [[0, 1], [1, 0]],
    "Y": [[0, -1j], [1j, 0]],
    "Z": [[1, 0], [0, -1]],
    "CNOT": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
}


def standard_gate(name: str) -> GateMatrix:
    try:
        return GateMatrix(_STANDARD[name.upper()])
    except KeyError:
        raise DomainError(f"unknown gate {name!r}") from None


def _as_matrix(g, k: int) -> np.ndarray:
    m = g.entries if isinstance(g, GateMatrix) else np.asarray(g, dtype=np.complex128)
    if m.shape != (1 << k, 1 << k):
        raise DomainError(f"expected a {k}-qubit gate, got shape {m.shape}")
    return m


def _check_qubit(s: StateVector, q: int) -> None:
    if not 0 <= q < s.n_qubits:
        raise DomainError(f"qubit {q} out of range for {s.n_qubits} qubits")


def apply_1q(s: StateVector, g, qubit: int) -> StateVector:
    """Apply a single-qubit gate to one qubit of ``s``."""
    _check_qubit(s, qubit)
    m = _as_matrix(g, 1)
    v = s.amps.reshape(1 << qubit, 2, -1)
    out = np.empty_like(v)
    a0, a1 = v[:, 0, :], v[:, 1, :]
    out[:, 0, :] = m[0, 0] * a0 + m[0, 1] * a1
    out[:, 1, :] = m[1, 0] * a0 + m[1, 1] * a1
    return StateVector._wrap(out)


def apply_hadamard(s: StateVector, qubits) -> StateVector:
    """H on each listed qubit."""
    out = s
    for q in qubits:
        _check_qubit(s, q)
        v = out.amps.reshape(1 << q, 2, -1)
        res = np.empty_like(v)
        np.add(v[:, 0, :], v[:, 1, :], out=res[:, 0, :])
        np.subtract(v[:, 0, :], v[:, 1, :], out=res[:, 1, :])
        res *= _S
        out = StateVector._wrap(res)
    return out


def apply_hadamard_all(s: StateVector) -> StateVector:
    return apply_hadamard(s, range(s.n_qubits))


def apply_cnot(s: StateVector, control: int, target: int) -> StateVector:
    _check_qubit(s, control)
    _check_qubit(s, target)
    if control == target:
        raise DomainError("control equals target")
    n = s.n_qubits
    v = s.amps.reshape((2,) * n)
    out = v.copy()
    hi = [slice(None)] * n
    lo = [slice(None)] * n
    hi[control] = lo[control] = 1
    hi[target], lo[target] = 1, 0
    out[tuple(lo)] = v[tuple(hi)]
    out[tuple(hi)] = v[tuple(lo)]
    return StateVector._wrap(out)


def apply_gate(s: StateVector, g, qubits) -> StateVector:
    """Dispatch a 1- or 2-qubit gate. Two-qubit support is CNOT only."""
    qubits = list(qubits)
    m = g.entries if isinstance(g, GateMatrix) else np.asarray(g)
    if len(qubits) == 1:
        return apply_1q(s, m, qubits[0])
    if len(qubits) == 2 and np.array_equal(m, _STANDARD["CNOT"]):
        return apply_cnot(s, qubits[0], qubits[1])
    raise DomainError("only single-qubit gates and CNOT are supported")


def rz(angle: float) -> np.ndarray:
    return np.array([[cmath.exp(-0.5j * angle), 0], [0, cmath.exp(0.5j * angle)]])


def ry(angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


@dataclass(frozen=True)
class ZyzAngles:
    alpha: float
    beta: float
    gamma: float
    delta: float

    def matrix(self) -> np.ndarray:
        return cmath.exp(1j * self.alpha) * (rz(self.beta) @ ry(self.gamma) @ rz(self.delta))


def zyz_decompose(U, tol: float = 1e-10) -> ZyzAngles:
    """Angles with ``U = e^{iα} Rz(β) Ry(γ) Rz(δ)``.

    Only reconstruction is guaranteed; the angles are one valid choice.
    """
    gate = U if isinstance(U, GateMatrix) else GateMatrix(U)
    if gate.k_qubits != 1:
        raise DomainError("ZYZ decomposition needs a single-qubit gate")
    if not gate.is_unitary(tol):
        raise DomainError("matrix is not unitary")
    m = gate.entries
    alpha = cmath.phase(np.linalg.det(m)) / 2.0
    v = m * cmath.exp(-1j * alpha)
    gamma = 2.0 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
    # The rotation block has v11 = e^{i(β+δ)/2} cos and v10 = e^{i(β-δ)/2} sin.
    if abs(v[1, 0]) < 1e-14:
        total, diff = 2.0 * cmath.phase(v[1, 1]), None
    elif abs(v[0, 0]) < 1e-14:
        total, diff = None, 2.0 * cmath.phase(v[1, 0])
    else:
        total, diff = 2.0 * cmath.phase(v[1, 1]), 2.0 * cmath.phase(v[1, 0])
    if diff is None:
        beta, delta = total, 0.0
    elif total is None:
        beta, delta = diff, 0.0
    else:
        beta, delta = (total + diff) / 2.0, (total - diff) / 2.0
    if alpha <= -math.pi:
        alpha += 2 * math.pi
    return ZyzAngles(alpha + 0.0, beta + 0.0, gamma, delta + 0.0)


def bloch_coords(s: StateVector) -> BlochPoint:
    if s.n_qubits != 1:
        raise DomainError("Bloch coordinates need a single-qubit state")
    a, b = s.amps
    ra, rb = abs(a), abs(b)
    theta = 2.0 * math.acos(min(1.0, ra))
    if ra < 1e-12 or rb < 1e-12:
        return BlochPoint(theta, 0.0)
    phi = cmath.phase(b * a.conjugate() / (ra * rb)) % (2 * math.pi)
    if phi >= 2 * math.pi:
        phi = 0.0
    return BlochPoint(theta, phi)
